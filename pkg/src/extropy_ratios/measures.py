"""Population extropies, inaccuracies, divergence ratios and similarity ratios.

All quantities are integrals of products of two probability functions of the
same kind over the half line:

    U(phi)        = -1/2 * int phi^2
    U(phi1, phi2) = -1/2 * int phi1 * phi2
    I(phi1|phi2)  = U(phi1, phi2) / U(phi1)
    S(phi1, phi2) = U(phi1, phi2)^2 / (U(phi1) * U(phi2))

``S`` is the squared cosine of the angle between ``phi1`` and ``phi2`` in
L2[0, inf).  For pairs, all three integrals are taken over one common range so
that the Cauchy-Schwarz bound ``S <= 1`` carries over to the numerics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, DivergentMeasureError, KindMismatchError, QuadratureError
from .functions import Kind, ProbabilityFunction
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, integrate, truncation_point

__all__ = [
    "SimilarityReport",
    "generalized_extropy",
    "generalized_inaccuracy",
    "divergence_ratio",
    "similarity_ratio",
    "similarity_report",
    "cosine_angle",
    "exponential_similarity_closed_form",
    "relative_extropy",
    "extropy_divergence",
    "survival_extropy_divergence",
    "scaled_copy_similarity",
]

# S may exceed 1 by at most this much before it is treated as an error.
SIMILARITY_CLAMP = 1e-9


@dataclass(frozen=True)
class SimilarityReport:
    kind: Kind
    u1: float
    u2: float
    u12: float
    i12: float
    i21: float
    similarity: float
    cos_theta: float

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "U1": self.u1,
            "U2": self.u2,
            "U12": self.u12,
            "I12": self.i12,
            "I21": self.i21,
            "S": self.similarity,
            "cos_theta": self.cos_theta,
        }


def _integration_upper(funcs, q: QuadratureConfig) -> float:
    upper = max(f.support[1] for f in funcs)
    if math.isfinite(upper):
        return upper
    kind = funcs[0].kind
    if kind is Kind.CUMULATIVE:
        raise DivergentMeasureError(
            "cumulative measure diverges on unbounded support (F -> 1 at infinity)"
        )
    # survival integrands are squared tails: stop where the tail is below sqrt(eps)
    threshold = math.sqrt(q.tail_eps) if kind is Kind.SURVIVAL else q.tail_eps
    start = max([1.0] + [v for f in funcs for v in f.support if math.isfinite(v)])
    upper = start
    for f in funcs:
        if math.isfinite(f.support[1]):
            continue
        tail = f.tail_function() or f
        upper = max(upper, truncation_point(tail, start, threshold))
    return upper


def _breakpoints(funcs):
    return sorted({v for f in funcs for v in f.support if math.isfinite(v)})


def _gram(phi1: ProbabilityFunction, phi2: ProbabilityFunction, q: QuadratureConfig):
    """Return (int phi1^2, int phi2^2, int phi1*phi2) over the pair's common range."""
    _check_pair(phi1, phi2)
    funcs = (phi1, phi2)
    upper = _integration_upper(funcs, q)

    def integrand(x):
        a, b = phi1(x), phi2(x)
        return np.stack([a * a, b * b, a * b])

    out = integrate(integrand, 0.0, upper, _breakpoints(funcs), q)
    return float(out[0]), float(out[1]), float(out[2])


def _square_norm(phi: ProbabilityFunction, q: QuadratureConfig) -> float:
    upper = _integration_upper((phi,), q)
    return float(integrate(lambda x: phi(x) ** 2, 0.0, upper, _breakpoints((phi,)), q))


def _check_pair(phi1, phi2):
    if phi1.kind is not phi2.kind:
        raise KindMismatchError(
            f"cannot pair a {phi1.kind.value} function with a {phi2.kind.value} function"
        )


def _as_extropy(square_norm: float) -> float:
    u = -0.5 * square_norm
    if not u < 0:
        raise DegenerateInputError(f"generalized extropy must be negative, got {u}")
    return u


def generalized_extropy(phi: ProbabilityFunction, q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """U(phi) = -1/2 int phi^2 (extropy, survival extropy or cumulative extropy)."""
    return _as_extropy(_square_norm(phi, q))


def generalized_inaccuracy(
    phi1: ProbabilityFunction, phi2: ProbabilityFunction, q: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """U(phi1, phi2) = -1/2 int phi1 phi2 over the pair's common range."""
    _check_pair(phi1, phi2)
    if phi1 is phi2:
        return generalized_extropy(phi1, q)
    return -0.5 * _gram(phi1, phi2, q)[2]


def similarity_report(
    phi1: ProbabilityFunction, phi2: ProbabilityFunction, q: QuadratureConfig = DEFAULT_QUADRATURE
) -> SimilarityReport:
    _check_pair(phi1, phi2)
    if phi1 is phi2:
        n11 = n22 = n12 = _square_norm(phi1, q)
    else:
        n11, n22, n12 = _gram(phi1, phi2, q)
    u1, u2 = _as_extropy(n11), _as_extropy(n22)
    u12 = -0.5 * n12
    if not u12 < 0:
        raise DegenerateInputError(
            "the two functions are orthogonal (disjoint supports); similarity is undefined"
        )
    # from the three integrals directly rather than the product of two ratios
    s = (n12 * n12) / (n11 * n22)
    if s > 1.0:
        if s > 1.0 + SIMILARITY_CLAMP:
            raise QuadratureError(f"similarity {s!r} exceeds 1 beyond rounding noise")
        s = 1.0
    return SimilarityReport(
        kind=phi1.kind,
        u1=u1,
        u2=u2,
        u12=u12,
        i12=u12 / u1,
        i21=u12 / u2,
        similarity=s,
        cos_theta=math.sqrt(s),
    )


def divergence_ratio(
    phi1: ProbabilityFunction, phi2: ProbabilityFunction, q: QuadratureConfig = DEFAULT_QUADRATURE
) -> tuple[float, float]:
    """(I(phi1|phi2), I(phi2|phi1))."""
    r = similarity_report(phi1, phi2, q)
    return r.i12, r.i21


def similarity_ratio(
    phi1: ProbabilityFunction, phi2: ProbabilityFunction, q: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    return similarity_report(phi1, phi2, q).similarity


def cosine_angle(
    phi1: ProbabilityFunction, phi2: ProbabilityFunction, q: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    return similarity_report(phi1, phi2, q).cos_theta


def exponential_similarity_closed_form(rate1: float, rate2: float) -> float:
    """S_E = S_SE = 4 l1 l2 / (l1 + l2)^2 for two exponential distributions."""
    if not (rate1 > 0 and rate2 > 0):
        raise ValueError("rates must be positive")
    return 4.0 * rate1 * rate2 / (rate1 + rate2) ** 2


def _half_integral(phi1, phi2, combine, q):
    _check_pair(phi1, phi2)
    funcs = (phi1, phi2)
    upper = _integration_upper(funcs, q)
    value = integrate(lambda x: combine(phi1(x), phi2(x)), 0.0, upper, _breakpoints(funcs), q)
    return 0.5 * float(value)


def _require_kind(kind, *funcs):
    for f in funcs:
        if f.kind is not kind:
            raise KindMismatchError(f"expected {kind.value} functions, got {f.kind.value}")


def relative_extropy(
    f: ProbabilityFunction, g: ProbabilityFunction, q: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """d(f, g) = 1/2 int (f - g)^2 for two densities."""
    _require_kind(Kind.DENSITY, f, g)
    return _half_integral(f, g, lambda a, b: (a - b) ** 2, q)


def extropy_divergence(
    f: ProbabilityFunction, g: ProbabilityFunction, q: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """J(f|g) = 1/2 int (f - g) f, equal to xiJ(X, Y) - J(X)."""
    _require_kind(Kind.DENSITY, f, g)
    return _half_integral(f, g, lambda a, b: (a - b) * a, q)


def survival_extropy_divergence(
    sf1: ProbabilityFunction, sf2: ProbabilityFunction, q: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """SJ(F|G) = 1/2 int (Fbar - Gbar) Fbar, equal to xiJ_s(X, Y) - J_s(X)."""
    _require_kind(Kind.SURVIVAL, sf1, sf2)
    return _half_integral(sf1, sf2, lambda a, b: (a - b) * a, q)


def scaled_copy_similarity(
    phi: ProbabilityFunction, a: float, q: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """S between phi and its composition x -> phi(a x), computed as a * I^2.

    ``I = U(phi(a .), phi) / U(phi)``.  Agrees with ``similarity_ratio(phi,
    phi.rescaled(a))`` because int phi(a x)^2 dx = int phi^2 / a.
    """
    scaled = phi.rescaled(a)
    u = generalized_extropy(phi, q)
    cross = generalized_inaccuracy(scaled, phi, q)
    return a * (cross / u) ** 2
