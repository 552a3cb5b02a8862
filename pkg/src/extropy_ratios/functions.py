"""Evaluable probability functions (density, survival or cumulative) on [0, inf)."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


class Kind(str, enum.Enum):
    DENSITY = "density"
    SURVIVAL = "survival"
    CUMULATIVE = "cumulative"

    @classmethod
    def parse(cls, value: "Kind | str") -> "Kind":
        if isinstance(value, cls):
            return value
        aliases = {
            "e": cls.DENSITY, "pdf": cls.DENSITY, "density": cls.DENSITY,
            "se": cls.SURVIVAL, "sf": cls.SURVIVAL, "survival": cls.SURVIVAL,
            "ce": cls.CUMULATIVE, "cdf": cls.CUMULATIVE, "cumulative": cls.CUMULATIVE,
        }
        try:
            return aliases[str(value).strip().lower()]
        except KeyError:
            raise ValueError(f"unknown measure kind {value!r}") from None


_CHECK_POINTS = 65
_MONOTONE_SLACK = 1e-12


@dataclass(frozen=True)
class ProbabilityFunction:
    """A density, survival or distribution function treated as a vector in L2[0, inf).

    ``evaluator`` must accept a float ndarray and return an array of the same
    shape; scalar-only callables are vectorized automatically.  ``tail`` is the
    survival function of the underlying variable and is only used to locate a
    truncation point when ``support`` is unbounded above.  For survival kind
    the evaluator itself serves when ``tail`` is omitted.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    kind: Kind
    support: tuple[float, float] = (0.0, math.inf)
    tail: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        lo, hi = float(self.support[0]), float(self.support[1])
        if not (math.isfinite(lo) and lo >= 0.0 and hi > lo):
            raise ValueError(f"invalid support {self.support!r}")
        object.__setattr__(self, "support", (lo, hi))
        self._spot_check()

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.asarray(self.evaluator(x), dtype=float)
        if out.shape != x.shape:
            out = np.vectorize(lambda t: float(self.evaluator(t)), otypes=[float])(x)
        return out

    def tail_function(self) -> Optional[Callable[[np.ndarray], np.ndarray]]:
        if self.tail is not None:
            return self.tail
        if self.kind is Kind.SURVIVAL:
            return self
        return None

    def rescaled(self, a: float) -> "ProbabilityFunction":
        """The composition x -> phi(a x); support and tail are mapped accordingly."""
        if not a > 0:
            raise ValueError("scale factor must be positive")
        lo, hi = self.support
        tail = self.tail
        return ProbabilityFunction(
            lambda x: self(a * np.asarray(x, dtype=float)),
            self.kind,
            (lo / a, hi / a),
            None if tail is None else (lambda x: tail(a * np.asarray(x, dtype=float))),
        )

    def _spot_check(self):
        lo, hi = self.support
        top = hi if math.isfinite(hi) else lo + 10.0
        grid = np.linspace(lo, top, _CHECK_POINTS)
        if self.kind is Kind.DENSITY:
            # density may be singular at an endpoint
            grid = grid[1:-1]
        values = self(grid)
        if np.any(np.isnan(values)):
            raise ValueError("probability function returned NaN on its support")
        if np.any(values < 0):
            raise ValueError(f"{self.kind.value} function takes negative values")
        if self.kind is Kind.DENSITY:
            return
        if np.any(values > 1 + _MONOTONE_SLACK):
            raise ValueError(f"{self.kind.value} function exceeds 1")
        steps = np.diff(values)
        if self.kind is Kind.SURVIVAL and np.any(steps > _MONOTONE_SLACK):
            raise ValueError("survival function is not nonincreasing")
        if self.kind is Kind.CUMULATIVE and np.any(steps < -_MONOTONE_SLACK):
            raise ValueError("cumulative function is not nondecreasing")
