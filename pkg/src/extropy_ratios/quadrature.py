"""Vectorized adaptive Gauss-Legendre quadrature with tail truncation.

Each panel is integrated with a 15-point and a 7-point Gauss-Legendre rule;
their difference is the panel error estimate.  Panels are bisected in batches
until the summed error meets ``max(atol, rtol * |integral|)`` for every
component of a vector-valued integrand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import QuadratureError

_NODES_HI, _WEIGHTS_HI = leggauss(15)
_NODES_LO, _WEIGHTS_LO = leggauss(7)
_NODES = np.concatenate([_NODES_HI, _NODES_LO])
_N_HI = _NODES_HI.size

# Doubling search for the truncation point gives up beyond this abscissa.
_TAIL_LIMIT = 1e12


@dataclass(frozen=True)
class QuadratureConfig:
    atol: float = 1e-10
    rtol: float = 1e-8
    tail_eps: float = 1e-12
    max_subdivisions: int = 2000

    def __post_init__(self):
        for name in ("atol", "rtol", "tail_eps"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive, got {value}")
        if int(self.max_subdivisions) < 10:
            raise ValueError("max_subdivisions must be >= 10")


DEFAULT_QUADRATURE = QuadratureConfig()


def integrate(
    func: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    breakpoints: Iterable[float] = (),
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> np.ndarray:
    """Integrate ``func`` over the finite interval ``[a, b]``.

    ``func`` maps a 1-D array of abscissae to either a 1-D array (scalar
    integrand) or a ``(k, len(x))`` array (k integrands sharing evaluations).
    Returns an array of shape ``(k,)`` (or a 0-d array for scalar integrands).
    """
    if not (math.isfinite(a) and math.isfinite(b)) or b < a:
        raise ValueError(f"need a finite interval, got [{a}, {b}]")
    if b == a:
        probe = np.asarray(func(np.array([a])), dtype=float)
        return np.zeros(probe.shape[:-1])
    edges = np.unique(np.clip([a, b, *[p for p in breakpoints if a < p < b]], a, b))
    left, right = edges[:-1], edges[1:]
    q, err = _panel_rules(func, left, right)
    while True:
        total = q.sum(axis=-1)
        toterr = err.sum(axis=-1)
        tol = np.maximum(config.atol, config.rtol * np.abs(total))
        if not np.all(np.isfinite(total)):
            raise QuadratureError("integrand produced non-finite values")
        if np.all(toterr <= tol):
            return total
        npanels = left.size
        # panel error relative to each component's share of the tolerance
        share = np.max(np.atleast_2d(err) / np.reshape(tol, (-1, 1)), axis=0)
        split = share > 0.5 / npanels
        if not np.any(split):
            split = share >= share.max()
        if npanels + int(split.sum()) > config.max_subdivisions:
            raise QuadratureError(
                f"no convergence within {config.max_subdivisions} subdivisions "
                f"(error estimate {np.max(toterr):.3g}, tolerance {np.min(tol):.3g})"
            )
        mid = 0.5 * (left[split] + right[split])
        new_left = np.concatenate([left[split], mid])
        new_right = np.concatenate([mid, right[split]])
        nq, nerr = _panel_rules(func, new_left, new_right)
        keep = ~split
        left = np.concatenate([left[keep], new_left])
        right = np.concatenate([right[keep], new_right])
        q = np.concatenate([q[..., keep], nq], axis=-1)
        err = np.concatenate([err[..., keep], nerr], axis=-1)


def _panel_rules(func, left: np.ndarray, right: np.ndarray):
    half = 0.5 * (right - left)
    centre = 0.5 * (right + left)
    x = centre[:, None] + half[:, None] * _NODES[None, :]
    values = np.asarray(func(x.ravel()), dtype=float)
    values = values.reshape(values.shape[:-1] + x.shape)
    hi = np.einsum("...pn,n->...p", values[..., :_N_HI], _WEIGHTS_HI) * half
    lo = np.einsum("...pn,n->...p", values[..., _N_HI:], _WEIGHTS_LO) * half
    return hi, np.abs(hi - lo)


def truncation_point(
    tail: Callable[[np.ndarray], np.ndarray], start: float, threshold: float
) -> float:
    """Smallest doubling of ``start`` at which ``tail`` falls below ``threshold``."""
    x = max(float(start), 1.0)
    while float(np.asarray(tail(np.array([x])))[0]) >= threshold:
        x *= 2.0
        if x > _TAIL_LIMIT:
            raise QuadratureError("tail does not decay; cannot truncate the integral")
    return x
