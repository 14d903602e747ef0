"""Shared fixtures: the family zoo and a dyadic discrete-law generator."""

import numpy as np
import pytest

from pricebound import (
    Empirical,
    EqualRevenue,
    Exponential,
    LogNormal,
    Mixture,
    Pareto,
    PointMass,
    Uniform,
    build,
)

# families with continuous CDFs (the uniformity transform needs these)
ATOMLESS_ZOO = [
    ("uniform(0,1)", Uniform(0.0, 1.0)),
    ("uniform(0.9,1.1)", Uniform(0.9, 1.1)),
    ("exponential(1)", Exponential(1.0)),
    ("pareto(1.5,1)", Pareto(1.5, 1.0)),
    ("lognormal(0,1)", LogNormal(0.0, 1.0)),
    ("equalrev(1)", EqualRevenue(1.0)),
]

# adds atomic and mixed laws; every entry has a finite geometric mean
FULL_ZOO = ATOMLESS_ZOO + [
    ("pointmass(3)", PointMass(3.0)),
    ("empirical-ish", Empirical([0.5, 1.0, 1.0, 2.5])),
    ("atom+uniform", Mixture([(0.5, PointMass(2.0)), (0.5, Uniform(0.0, 1.0))])),
    ("three-part mix", build("mix(0.25*pointmass(1), 0.5*uniform(0.5,1.5), 0.25*pareto(2,1))")),
]

FINITE_MEAN_ZOO = [(n, d) for n, d in FULL_ZOO if n != "equalrev(1)"]


def zoo_params(zoo):
    return pytest.mark.parametrize("d", [d for _, d in zoo], ids=[n for n, _ in zoo])


def random_dyadic_atoms(rng: np.random.Generator, max_atoms: int = 12):
    """Random discrete law with dyadic masses and locations.

    Masses are multiples of 1/64 and locations multiples of 1/64, so
    every partial sum and product is exact in binary floating point and
    revenue enumeration admits a zero-tolerance comparison.
    """
    n = int(rng.integers(1, max_atoms + 1))
    locs = np.sort(rng.choice(np.arange(1, 2049), size=n, replace=False)) / 64.0
    if n > 1:
        cuts = np.sort(rng.choice(np.arange(1, 64), size=n - 1, replace=False))
    else:
        cuts = np.array([], dtype=int)
    parts = np.diff(np.concatenate([[0], cuts, [64]])) / 64.0
    return list(zip(locs.tolist(), parts.tolist()))


def atoms_to_mixture(atoms) -> Mixture:
    return Mixture([(m, PointMass(a)) for a, m in atoms])
