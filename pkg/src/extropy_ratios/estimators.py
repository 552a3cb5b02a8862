"""Nonparametric estimators of the similarity and divergence ratios.

* ``density`` kind: Gaussian kernel density estimates of both samples on one
  shared grid, integrated with the trapezoid rule.
* ``survival`` / ``cumulative`` kinds: empirical step functions summed as
  left-endpoint Riemann sums over the pooled sorted sample
  ``z_1 <= ... <= z_N`` with gaps ``z_{k+1} - z_k`` (the last point carries no
  gap, ties give zero-width panels).

By default all three sums share the pooled grid ("pooled" convention), which
keeps every estimate inside (0, 1] by the discrete Cauchy-Schwarz inequality.
The "own" convention sums each marginal extropy over that sample's own points
only; it is kept for comparison and may exceed 1 on small samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .distributions import SampleData
from .errors import DegenerateInputError
from .functions import Kind, ProbabilityFunction

__all__ = [
    "KDEConfig",
    "GriddedDensity",
    "EmpiricalEstimate",
    "silverman_bandwidth",
    "kde_density",
    "kde_pair",
    "estimate_kernel",
    "estimate_similarity_E",
    "empirical_sf",
    "empirical_cdf",
    "estimate_similarity_SE",
    "estimate_similarity_CE",
    "estimate_empirical",
    "estimate_divergence_ratios",
    "estimate_similarity",
]

CONVENTIONS = ("pooled", "own")

# Evaluate the kernel sum in blocks of this many sample points.
_KDE_CHUNK = 2048
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _as_sample(s) -> SampleData:
    return s if isinstance(s, SampleData) else SampleData(s)


@dataclass(frozen=True)
class KDEConfig:
    """Gaussian KDE settings.

    ``bandwidth`` is ``"silverman"`` or a fixed positive float.  The grid spans
    the sample range extended by ``extension`` bandwidths on each side, clipped
    below at 0.
    """

    bandwidth: Union[str, float] = "silverman"
    grid_points: int = 512
    extension: float = 3.0

    def __post_init__(self):
        if isinstance(self.bandwidth, str):
            if self.bandwidth != "silverman":
                raise ValueError(f"unknown bandwidth rule {self.bandwidth!r}")
        elif not (math.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise ValueError("fixed bandwidth must be positive")
        if int(self.grid_points) < 64:
            raise ValueError("grid_points must be >= 64")
        if not self.extension >= 0:
            raise ValueError("extension must be nonnegative")

    def bandwidth_for(self, s: SampleData) -> float:
        if self.bandwidth == "silverman":
            return silverman_bandwidth(s)
        return float(self.bandwidth)


def silverman_bandwidth(s) -> float:
    """0.9 * min(sd, IQR / 1.34) * n^(-1/5).

    ``sd`` uses ddof=1; quartiles interpolate linearly between order
    statistics (numpy's default "linear" method).  When the IQR is zero
    (heavy ties) the standard deviation alone is used.
    """
    values = _as_sample(s).values
    n = values.size
    sd = float(np.std(values, ddof=1))
    q25, q75 = np.percentile(values, [25, 75])
    iqr = float(q75 - q25)
    spread = min(sd, iqr / 1.34) if iqr > 0 else sd
    if not spread > 0:
        raise DegenerateInputError("sample has zero spread; bandwidth undefined")
    return 0.9 * spread * n ** (-0.2)


@dataclass(frozen=True)
class GriddedDensity:
    """Kernel density estimate tabulated on a uniform grid."""

    grid: np.ndarray
    values: np.ndarray
    bandwidth: float

    def __call__(self, x) -> np.ndarray:
        return np.interp(np.asarray(x, dtype=float), self.grid, self.values, left=0.0, right=0.0)

    def integral(self) -> float:
        return float(np.trapezoid(self.values, self.grid))

    def as_function(self) -> ProbabilityFunction:
        return ProbabilityFunction(self, Kind.DENSITY, (float(self.grid[0]), float(self.grid[-1])))


def _kde_on_grid(values: np.ndarray, h: float, grid: np.ndarray) -> np.ndarray:
    out = np.zeros_like(grid)
    for start in range(0, values.size, _KDE_CHUNK):
        block = values[start:start + _KDE_CHUNK]
        u = (grid[:, None] - block[None, :]) / h
        out += np.exp(-0.5 * u * u).sum(axis=1)
    return out * (_INV_SQRT_2PI / (values.size * h))


def _grid_for(samples, bandwidths, cfg: KDEConfig) -> np.ndarray:
    reach = cfg.extension * max(bandwidths)
    lo = max(0.0, min(float(s.sorted[0]) for s in samples) - reach)
    hi = max(float(s.sorted[-1]) for s in samples) + reach
    return np.linspace(lo, hi, int(cfg.grid_points))


def kde_density(s, cfg: KDEConfig = KDEConfig(), grid: np.ndarray | None = None) -> GriddedDensity:
    s = _as_sample(s)
    if s.sorted[0] == s.sorted[-1]:
        raise DegenerateInputError("all sample values are equal")
    h = cfg.bandwidth_for(s)
    if grid is None:
        grid = _grid_for([s], [h], cfg)
    return GriddedDensity(np.asarray(grid, dtype=float), _kde_on_grid(s.values, h, grid), h)


def kde_pair(x, y, cfg: KDEConfig = KDEConfig()) -> tuple[GriddedDensity, GriddedDensity]:
    """Both KDEs on one grid covering both samples (per-sample bandwidths)."""
    x, y = _as_sample(x), _as_sample(y)
    for s in (x, y):
        if s.sorted[0] == s.sorted[-1]:
            raise DegenerateInputError("all sample values are equal")
    hx, hy = cfg.bandwidth_for(x), cfg.bandwidth_for(y)
    grid = _grid_for([x, y], [hx, hy], cfg)
    return kde_density(x, cfg, grid), kde_density(y, cfg, grid)


@dataclass(frozen=True)
class EmpiricalEstimate:
    """Estimated extropy terms for one sample pair and one measure kind.

    ``j_x``, ``j_y`` are the marginal (survival / cumulative / kernel)
    extropies, ``inaccuracy`` the cross term.  ``grid`` and ``gaps`` hold the
    pooled grid and its panel widths (for the density kind: the KDE grid and
    trapezoid weights).
    """

    kind: Kind
    j_x: float
    j_y: float
    inaccuracy: float
    grid: np.ndarray
    gaps: np.ndarray
    convention: str = "pooled"

    @property
    def n_points(self) -> int:
        return int(self.grid.size)

    @property
    def similarity(self) -> float:
        c, jx, jy = self.inaccuracy, self.j_x, self.j_y
        if max(abs(c), abs(jx), abs(jy)) < 1e150:
            s = c * c / (jx * jy)
        else:
            # tiny bandwidths give huge kernel sums; avoid overflow in c^2
            s = (c / jx) * (c / jy)
        # discrete Cauchy-Schwarz holds exactly for the shared grid; only rounding can exceed 1
        if self.convention == "pooled" and 1.0 < s <= 1.0 + 1e-9:
            s = 1.0
        return s

    @property
    def i_xy(self) -> float:
        return self.inaccuracy / self.j_x

    @property
    def i_yx(self) -> float:
        return self.inaccuracy / self.j_y


def _step_function(s: SampleData, survival: bool) -> Callable[[np.ndarray], np.ndarray]:
    ordered = s.sorted
    n = ordered.size

    def step(x):
        x = np.asarray(x, dtype=float)
        at_or_below = np.searchsorted(ordered, x, side="right")
        return (n - at_or_below) / n if survival else at_or_below / n

    return step


def empirical_sf(s) -> Callable[[np.ndarray], np.ndarray]:
    """x -> #{X_i > x} / n (right-continuous)."""
    return _step_function(_as_sample(s), survival=True)


def empirical_cdf(s) -> Callable[[np.ndarray], np.ndarray]:
    """x -> #{X_i <= x} / n (right-continuous)."""
    return _step_function(_as_sample(s), survival=False)


def _riemann(values: np.ndarray, gaps: np.ndarray) -> float:
    return -0.5 * float(np.dot(values[:-1], gaps))


def estimate_empirical(x, y, kind, convention: str = "pooled") -> EmpiricalEstimate:
    kind = Kind.parse(kind)
    if kind is Kind.DENSITY:
        raise ValueError("use estimate_similarity_E / kernel path for the density kind")
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    x, y = _as_sample(x), _as_sample(y)
    survival = kind is Kind.SURVIVAL
    fx, fy = _step_function(x, survival), _step_function(y, survival)
    z = np.sort(np.concatenate([x.values, y.values]))
    gaps = np.diff(z)
    if not z[-1] > z[0]:
        raise DegenerateInputError("pooled sample has zero length; all values identical")
    phi_x, phi_y = fx(z), fy(z)
    cross = _riemann(phi_x * phi_y, gaps)
    if convention == "pooled":
        j_x = _riemann(phi_x * phi_x, gaps)
        j_y = _riemann(phi_y * phi_y, gaps)
    else:
        j_x = _riemann(fx(x.sorted) ** 2, np.diff(x.sorted))
        j_y = _riemann(fy(y.sorted) ** 2, np.diff(y.sorted))
    if not (j_x < 0 and j_y < 0 and cross < 0):
        raise DegenerateInputError(
            f"estimated {kind.value} extropy terms vanish (j_x={j_x}, j_y={j_y}, cross={cross})"
        )
    return EmpiricalEstimate(kind, j_x, j_y, cross, z, gaps, convention)


def estimate_similarity_SE(x, y, convention: str = "pooled") -> EmpiricalEstimate:
    return estimate_empirical(x, y, Kind.SURVIVAL, convention)


def estimate_similarity_CE(x, y, convention: str = "pooled") -> EmpiricalEstimate:
    return estimate_empirical(x, y, Kind.CUMULATIVE, convention)


def estimate_kernel(x, y, cfg: KDEConfig = KDEConfig()) -> EmpiricalEstimate:
    fx, fy = kde_pair(x, y, cfg)
    grid = fx.grid
    weights = np.full(grid.size, grid[1] - grid[0])
    weights[[0, -1]] *= 0.5

    def term(a, b):
        return -0.5 * float(np.dot(a * b, weights))

    j_x, j_y = term(fx.values, fx.values), term(fy.values, fy.values)
    cross = term(fx.values, fy.values)
    if not (j_x < 0 and j_y < 0 and cross < 0):
        raise DegenerateInputError("kernel density estimates do not overlap")
    return EmpiricalEstimate(Kind.DENSITY, j_x, j_y, cross, grid, weights)


def estimate_similarity_E(x, y, cfg: KDEConfig = KDEConfig()) -> float:
    return estimate_kernel(x, y, cfg).similarity


def estimate_similarity(x, y, kind, convention: str = "pooled", cfg: KDEConfig = KDEConfig()) -> EmpiricalEstimate:
    """Dispatch on kind: kernel path for density, empirical path otherwise."""
    kind = Kind.parse(kind)
    if kind is Kind.DENSITY:
        return estimate_kernel(x, y, cfg)
    return estimate_empirical(x, y, kind, convention)


def estimate_divergence_ratios(
    x, y, kind, convention: str = "pooled", cfg: KDEConfig = KDEConfig()
) -> tuple[float, float]:
    est = estimate_similarity(x, y, kind, convention, cfg)
    return est.i_xy, est.i_yx
