"""Complexity-bounded maximal operators over the dyadic rectangle basis.

``maximal(f, c)`` returns, per cell, the largest average of ``|f|`` over any
dyadic rectangle containing that cell whose sidelengths take at most ``c``
distinct values.  ``c = 1`` restricts to cubes, ``c = d`` allows every dyadic
rectangle.  A direct-enumeration oracle and the composed weights
``M_c M_{c-1} ... M_1 w`` live here too.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InputError, ResourceLimitError
from .grids import DyadicInterval, DyadicRect, Grid, iter_block_means

__all__ = [
    "maximal",
    "maximal_bruteforce",
    "compose",
    "compose_2d",
    "MaximalField",
    "BRUTEFORCE_MAX_DIMS",
    "BRUTEFORCE_MAX_LEVEL",
    "ALL_DISCRETE_MAX_BOXES",
]

BRUTEFORCE_MAX_DIMS = 3
BRUTEFORCE_MAX_LEVEL = 4
ALL_DISCRETE_MAX_BOXES = 200_000


def maximal(f: Grid, c: int) -> Grid:
    """Pointwise supremum of dyadic-rectangle averages of |f| at complexity c.

    One pass per shape: block means are formed by pairwise halving (exact for
    constant input), broadcast back to cell resolution and folded with a
    pointwise max.  Seeding the accumulator with |f| makes the domination
    ``maximal(f, c) >= |f|`` exact.
    """
    d = f.dims
    if not 1 <= c <= d:
        raise InputError(f"complexity must satisfy 1 <= c <= d, got c={c}, d={d}")
    L = f.level
    absv = np.abs(f.values)
    result = absv.copy()
    finest = (L,) * d
    for levels, means in iter_block_means(absv, L):
        if levels == finest or len(set(levels)) > c:
            continue
        up = means
        for axis in range(d):
            reps = 1 << (L - levels[axis])
            if reps > 1:
                up = np.repeat(up, reps, axis=axis)
        np.maximum(result, up, out=result)
    return Grid(result)


def _dyadic_intervals(level: int) -> list[DyadicInterval]:
    return [
        DyadicInterval(k, j) for k in range(level + 1) for j in range(1 << k)
    ]


def maximal_bruteforce(f: Grid, c: int, basis: str = "dyadic") -> Grid:
    """Direct enumeration oracle for :func:`maximal`.

    ``basis="dyadic"`` walks every dyadic rectangle; ``basis="all-discrete"``
    walks every integer-aligned cell box, with complexity counted on the cell
    extents.  Each rectangle is averaged by direct summation; nothing is
    shared between rectangles.
    """
    d, L, n = f.dims, f.level, f.extent
    if not 1 <= c <= d:
        raise InputError(f"complexity must satisfy 1 <= c <= d, got c={c}, d={d}")
    if basis not in ("dyadic", "all-discrete"):
        raise InputError(f"unknown basis {basis!r}")
    if d > BRUTEFORCE_MAX_DIMS or L > BRUTEFORCE_MAX_LEVEL:
        raise ResourceLimitError(
            f"brute force limited to d <= {BRUTEFORCE_MAX_DIMS}, "
            f"L <= {BRUTEFORCE_MAX_LEVEL}; got d={d}, L={L}"
        )
    absv = np.abs(f.values)
    result = absv.copy()

    if basis == "dyadic":
        per_axis = _dyadic_intervals(L)
        for combo in itertools.product(per_axis, repeat=d):
            rect = DyadicRect(combo)
            if len(set(rect.sidelengths(L))) > c:
                continue
            sl = rect.slices(L)
            avg = float(absv[sl].sum()) / rect.size(L)
            np.maximum(result[sl], avg, out=result[sl])
        return Grid(result)

    spans = [(a, b) for a in range(n) for b in range(a + 1, n + 1)]
    if len(spans) ** d > ALL_DISCRETE_MAX_BOXES:
        raise ResourceLimitError(
            f"all-discrete basis would enumerate {len(spans) ** d} boxes, "
            f"limit is {ALL_DISCRETE_MAX_BOXES}"
        )
    for combo in itertools.product(spans, repeat=d):
        if len(set(b - a for a, b in combo)) > c:
            continue
        sl = tuple(slice(a, b) for a, b in combo)
        size = 1
        for a, b in combo:
            size *= b - a
        avg = float(absv[sl].sum()) / size
        np.maximum(result[sl], avg, out=result[sl])
    return Grid(result)


def compose(w: Grid, c: int) -> Grid:
    """Composed weight: apply the maximal operator at complexity 1, then 2,
    ..., then c (the lowest complexity acts first)."""
    w.require_nonnegative()
    if not 1 <= c <= w.dims:
        raise InputError(
            f"complexity must satisfy 1 <= c <= d, got c={c}, d={w.dims}"
        )
    out = w
    for k in range(1, c + 1):
        out = maximal(out, k)
    return out


def compose_2d(w: Grid) -> Grid:
    """The planar composed weight: full rectangle maximal applied after the
    cube maximal.  Only defined on two-dimensional grids."""
    if w.dims != 2:
        raise InputError(f"compose_2d requires d = 2, got d = {w.dims}")
    return compose(w, 2)


@dataclass(frozen=True)
class MaximalField:
    """A computed maximal function together with the parameters that made it."""

    complexity: int
    basis: str
    result: Grid

    @classmethod
    def compute(cls, f: Grid, c: int, basis: str = "dyadic") -> "MaximalField":
        if basis == "dyadic":
            res = maximal(f, c)
        else:
            res = maximal_bruteforce(f, c, basis)
        return cls(complexity=c, basis=basis, result=res)
