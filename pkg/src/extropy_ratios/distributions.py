"""Parametric lifetime families, exact samplers and the PHM / PRHM transforms.

Four families are supported: ``Exponential(rate)``, ``Beta(a, b)``,
``Uniform(lower, upper)`` and ``Power(c)`` (cdf ``x**c`` on ``[0, 1]``).
Every distribution evaluates pdf / cdf / sf on the whole half line, so
``cdf`` is 0 below the support and 1 above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np
from scipy import special

from .errors import DomainError
from .functions import Kind, ProbabilityFunction

__all__ = [
    "Distribution",
    "ParametricDistribution",
    "TransformedDistribution",
    "ProbabilityTriple",
    "SampleData",
    "Exponential",
    "Beta",
    "Uniform",
    "Power",
    "parse_distribution",
    "pdf_at",
    "cdf_at",
    "sf_at",
    "hazard_at",
    "reversed_hazard_at",
    "sample",
    "phm_transform",
    "prhm_transform",
]

_UINT64_MASK = (1 << 64) - 1


class ProbabilityTriple(NamedTuple):
    density: ProbabilityFunction
    survival: ProbabilityFunction
    cumulative: ProbabilityFunction

    def of_kind(self, kind) -> ProbabilityFunction:
        return getattr(self, Kind.parse(kind).value)


class Distribution:
    """Common surface of parametric and transformed distributions.

    Subclasses provide vectorized ``pdf``, ``cdf``, ``sf`` and a ``support``.
    """

    support: tuple[float, float]

    def pdf(self, x) -> np.ndarray:
        raise NotImplementedError

    def cdf(self, x) -> np.ndarray:
        raise NotImplementedError

    def sf(self, x) -> np.ndarray:
        raise NotImplementedError

    def hazard(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        s = self.sf(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(s > 0, self.pdf(x) / np.where(s > 0, s, 1.0), np.nan)

    def reversed_hazard(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        c = self.cdf(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(c > 0, self.pdf(x) / np.where(c > 0, c, 1.0), np.nan)

    def density(self) -> ProbabilityFunction:
        return ProbabilityFunction(self.pdf, Kind.DENSITY, self.support, self.sf)

    def survival(self) -> ProbabilityFunction:
        return ProbabilityFunction(self.sf, Kind.SURVIVAL, self.support, self.sf)

    def cumulative(self) -> ProbabilityFunction:
        return ProbabilityFunction(self.cdf, Kind.CUMULATIVE, self.support, self.sf)

    def function(self, kind) -> ProbabilityFunction:
        return self.functions().of_kind(kind)

    def functions(self) -> ProbabilityTriple:
        return ProbabilityTriple(self.density(), self.survival(), self.cumulative())


@dataclass(frozen=True)
class ParametricDistribution(Distribution):
    family: str
    params: tuple[float, ...]

    def __post_init__(self):
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "params", params)
        if not all(math.isfinite(p) for p in params):
            raise ValueError(f"non-finite parameter in {params}")
        fam = self.family
        if fam == "exponential":
            _expect(len(params) == 1 and params[0] > 0, "Exponential needs rate > 0")
        elif fam == "beta":
            _expect(len(params) == 2 and min(params) > 0, "Beta needs shapes a > 0, b > 0")
        elif fam == "uniform":
            _expect(
                len(params) == 2 and 0 <= params[0] < params[1],
                "Uniform needs 0 <= lower < upper",
            )
        elif fam == "power":
            _expect(len(params) == 1 and params[0] > 0, "Power needs exponent c > 0")
        else:
            raise ValueError(f"unknown family {fam!r}")

    def __str__(self):
        return f"{self.family}({', '.join(f'{p:g}' for p in self.params)})"

    @property
    def support(self) -> tuple[float, float]:
        if self.family == "exponential":
            return (0.0, math.inf)
        if self.family == "uniform":
            return self.params
        return (0.0, 1.0)

    def mean(self) -> float:
        p = self.params
        return {
            "exponential": lambda: 1.0 / p[0],
            "beta": lambda: p[0] / (p[0] + p[1]),
            "uniform": lambda: 0.5 * (p[0] + p[1]),
            "power": lambda: p[0] / (p[0] + 1.0),
        }[self.family]()

    def pdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        p = self.params
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if self.family == "exponential":
                return np.where(x >= 0, p[0] * np.exp(-p[0] * np.maximum(x, 0.0)), 0.0)
            if self.family == "uniform":
                return np.where((x >= p[0]) & (x <= p[1]), 1.0 / (p[1] - p[0]), 0.0)
            inside = (x >= 0) & (x <= 1)
            t = np.clip(x, 0.0, 1.0)
            if self.family == "beta":
                a, b = p
                logpdf = special.xlogy(a - 1, t) + special.xlog1py(b - 1, -t) - special.betaln(a, b)
                return np.where(inside, np.exp(logpdf), 0.0)
            c = p[0]
            return np.where(inside, c * t ** (c - 1.0), 0.0)

    def cdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        p = self.params
        if self.family == "exponential":
            return np.where(x > 0, -np.expm1(-p[0] * np.maximum(x, 0.0)), 0.0)
        if self.family == "uniform":
            return np.clip((x - p[0]) / (p[1] - p[0]), 0.0, 1.0)
        t = np.clip(x, 0.0, 1.0)
        if self.family == "beta":
            return special.betainc(p[0], p[1], t)
        return t ** p[0]

    def sf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        p = self.params
        if self.family == "exponential":
            return np.where(x > 0, np.exp(-p[0] * np.maximum(x, 0.0)), 1.0)
        if self.family == "uniform":
            return np.clip((p[1] - x) / (p[1] - p[0]), 0.0, 1.0)
        return 1.0 - self.cdf(x)

    def quantile(self, u) -> np.ndarray:
        """Closed-form inverse cdf; not available for Beta."""
        u = np.asarray(u, dtype=float)
        p = self.params
        if self.family == "exponential":
            return -np.log1p(-u) / p[0]
        if self.family == "uniform":
            return p[0] + (p[1] - p[0]) * u
        if self.family == "power":
            return u ** (1.0 / p[0])
        raise NotImplementedError("Beta has no closed-form quantile")

    def draw(self, n: int, rng: np.random.Generator) -> np.ndarray:
        # Beta: numpy's generator draws the exact ratio of two gamma variates
        # (Johnk's algorithm when both shapes are <= 1), no approximation.
        if self.family == "beta":
            return rng.beta(self.params[0], self.params[1], size=n)
        return self.quantile(rng.random(n))


def _expect(ok: bool, message: str):
    if not ok:
        raise ValueError(message)


def Exponential(rate: float) -> ParametricDistribution:
    return ParametricDistribution("exponential", (rate,))


def Beta(a: float, b: float) -> ParametricDistribution:
    return ParametricDistribution("beta", (a, b))


def Uniform(lower: float = 0.0, upper: float = 1.0) -> ParametricDistribution:
    return ParametricDistribution("uniform", (lower, upper))


def Power(c: float) -> ParametricDistribution:
    return ParametricDistribution("power", (c,))


_FAMILY_ALIASES = {
    "exp": "exponential",
    "exponential": "exponential",
    "beta": "beta",
    "unif": "uniform",
    "uniform": "uniform",
    "power": "power",
    "pow": "power",
}


def parse_distribution(text: str) -> ParametricDistribution:
    """Parse ``family:p1,p2`` (e.g. ``exp:1``, ``beta:3,2``, ``uniform:0,1``)."""
    name, sep, rest = text.strip().partition(":")
    family = _FAMILY_ALIASES.get(name.strip().lower())
    if family is None or not sep:
        raise ValueError(f"cannot parse distribution {text!r}; expected family:params")
    try:
        params = tuple(float(tok) for tok in rest.split(",") if tok.strip())
    except ValueError:
        raise ValueError(f"non-numeric parameter in {text!r}") from None
    return ParametricDistribution(family, params)


class TransformedDistribution(Distribution):
    """A distribution defined by powering the survival (PHM) or cdf (PRHM) of a base.

    The support is inherited from the base.
    """

    def __init__(self, base: Distribution, c: float, model: str):
        if not (math.isfinite(c) and c > 0):
            raise ValueError("proportionality constant c must be > 0")
        if model not in ("phm", "prhm"):
            raise ValueError(f"unknown model {model!r}")
        self.base = base
        self.c = float(c)
        self.model = model
        self.support = base.support

    def __repr__(self):
        return f"{self.model}({self.base!s}, c={self.c:g})"

    def sf(self, x) -> np.ndarray:
        if self.model == "phm":
            return self.base.sf(x) ** self.c
        return 1.0 - self.base.cdf(x) ** self.c

    def cdf(self, x) -> np.ndarray:
        if self.model == "phm":
            return 1.0 - self.base.sf(x) ** self.c
        return self.base.cdf(x) ** self.c

    def pdf(self, x) -> np.ndarray:
        # PHM: g = c h_X Fbar^c = c f Fbar^(c-1);  PRHM: g = c f F^(c-1)
        x = np.asarray(x, dtype=float)
        f = self.base.pdf(x)
        anchor = self.base.sf(x) if self.model == "phm" else self.base.cdf(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = self.c * f * anchor ** (self.c - 1.0)
        return np.where(f > 0, np.nan_to_num(g, nan=0.0, posinf=np.inf), 0.0)


def phm_transform(base: Distribution, c: float) -> TransformedDistribution:
    """Proportional hazards companion: survival ``sf_base(x) ** c``."""
    return TransformedDistribution(base, c, "phm")


def prhm_transform(base: Distribution, c: float) -> TransformedDistribution:
    """Proportional reversed hazards companion: cdf ``cdf_base(x) ** c``."""
    return TransformedDistribution(base, c, "prhm")


def _checked_point(x) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"evaluation point must be finite, got {x}")
    return x


def pdf_at(dist: Distribution, x: float) -> float:
    return float(dist.pdf(_checked_point(x)))


def cdf_at(dist: Distribution, x: float) -> float:
    return float(dist.cdf(_checked_point(x)))


def sf_at(dist: Distribution, x: float) -> float:
    return float(dist.sf(_checked_point(x)))


def hazard_at(dist: Distribution, x: float) -> float:
    x = _checked_point(x)
    s = float(dist.sf(x))
    if s <= 0:
        raise DomainError(f"hazard undefined at x={x}: survival is 0")
    return float(dist.pdf(x)) / s


def reversed_hazard_at(dist: Distribution, x: float) -> float:
    x = _checked_point(x)
    c = float(dist.cdf(x))
    if c <= 0:
        raise DomainError(f"reversed hazard undefined at x={x}: cdf is 0")
    return float(dist.pdf(x)) / c


class SampleData:
    """Immutable sample of nonnegative finite reals (n >= 2) with a cached sorted view."""

    def __init__(self, values: Sequence[float] | np.ndarray):
        arr = np.array(values, dtype=float).ravel()
        if arr.size < 2:
            raise ValueError(f"a sample needs at least 2 values, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sample contains non-finite values")
        if np.any(arr < 0):
            raise ValueError("sample values must be nonnegative")
        arr.setflags(write=False)
        self.values = arr

    def __len__(self):
        return self.values.size

    def __repr__(self):
        return f"SampleData(n={len(self)})"

    @cached_property
    def sorted(self) -> np.ndarray:
        out = np.sort(self.values)
        out.setflags(write=False)
        return out

    def scaled(self, a: float) -> "SampleData":
        if not a > 0:
            raise ValueError("scale factor must be positive")
        return SampleData(self.values * a)

    def shifted(self, b: float) -> "SampleData":
        return SampleData(self.values + b)


def sample(dist: ParametricDistribution, n: int, seed: int) -> SampleData:
    """Draw ``n`` exact i.i.d. variates; identical (dist, n, seed) give identical arrays."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    rng = np.random.default_rng(int(seed) & _UINT64_MASK)
    return SampleData(dist.draw(int(n), rng))
