"""Seeded instance generators for the ratio experiments.

Every generator takes a numpy Generator plus (dims, level) and returns a
nonnegative grid floored at ``eps`` so the weights stay usable for the
reciprocal-power constants.  The adversarial shapes (clustered masses,
separable power profiles) are included because uniform noise barely stresses
the rectangle inequalities.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .grids import Grid

__all__ = ["GENERATORS", "generate", "DEFAULT_EPS"]

DEFAULT_EPS = 1e-6


def _uniform_constant(rng, dims, level, eps):
    return np.ones((1 << level,) * dims)


def _uniform(rng, dims, level, eps):
    return np.maximum(rng.random((1 << level,) * dims), eps)


def _point_mass(rng, dims, level, eps):
    n = 1 << level
    v = np.full((n,) * dims, eps)
    v[tuple(rng.integers(0, n, size=dims))] = 1.0
    return v


def _few_point_masses(rng, dims, level, eps):
    # a handful of unit masses clustered inside one quarter-scale box
    n = 1 << level
    v = np.full((n,) * dims, eps)
    count = int(rng.integers(2, 6))
    radius = max(1, n // 4)
    anchor = rng.integers(0, n, size=dims)
    for _ in range(count):
        cell = tuple(
            int((anchor[i] + rng.integers(0, radius)) % n) for i in range(dims)
        )
        v[cell] = 1.0
    return v


def _checkerboard(rng, dims, level, eps):
    n = 1 << level
    hi = float(np.exp(rng.uniform(np.log(2.0), np.log(64.0))))
    offset = int(rng.integers(0, 2))
    idx = np.indices((n,) * dims).sum(axis=0)
    return np.where((idx + offset) % 2 == 0, 1.0, hi)


def _power_law_profile(rng, dims, level, eps):
    n = 1 << level
    exponents = rng.uniform(0.4, 2.0, size=dims)
    v = np.ones((n,) * dims)
    for axis in range(dims):
        coord = (np.arange(n, dtype=np.float64) + 1.0) ** (-exponents[axis])
        shape = [1] * dims
        shape[axis] = n
        v = v * coord.reshape(shape)
    return np.maximum(v / v.max(), eps)


GENERATORS = {
    "uniform-constant": _uniform_constant,
    "uniform": _uniform,
    "point-mass": _point_mass,
    "few-point-masses": _few_point_masses,
    "checkerboard": _checkerboard,
    "power-law-profile": _power_law_profile,
}


def generate(
    name: str,
    dims: int,
    level: int,
    rng: np.random.Generator,
    eps: float = DEFAULT_EPS,
) -> Grid:
    try:
        fn = GENERATORS[name]
    except KeyError:
        raise InputError(
            f"unknown generator {name!r}; choose from {sorted(GENERATORS)}"
        ) from None
    return Grid(fn(rng, dims, level, eps))
