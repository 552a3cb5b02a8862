"""Shared generators for randomized tests."""

import numpy as np

from extropy_ratios import Beta, Exponential, Kind, Power, Uniform


def random_distribution(rng: np.random.Generator, kind: Kind):
    """A random parametric distribution whose ``kind`` function is square integrable.

    Every draw overlaps [0.4, 0.6], so any two draws have a nonzero cross term.
    Shapes are kept >= 1 so densities stay bounded.
    """
    families = ["beta", "uniform", "power"]
    if kind is not Kind.CUMULATIVE:
        families.append("exponential")
    family = families[rng.integers(len(families))]
    if family == "exponential":
        return Exponential(float(rng.uniform(0.2, 5.0)))
    if family == "beta":
        return Beta(float(rng.uniform(1.0, 6.0)), float(rng.uniform(1.0, 6.0)))
    if family == "uniform":
        return Uniform(float(rng.uniform(0.0, 0.4)), float(rng.uniform(0.6, 3.0)))
    return Power(float(rng.uniform(1.0, 6.0)))


def random_pairs(kind: Kind, count: int, seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield random_distribution(rng, kind), random_distribution(rng, kind)
