"""Dense isotropic grids on the dyadic lattice and O(1) rectangle sums.

A grid holds one real value per cell of ``{0,...,2^L - 1}^d``.  All measures
are counting measures: a cell has measure 1 and averages are arithmetic
means, which keeps every quantity scale-free and avoids underflow at deep
levels.  Dyadic intervals and rectangles are addressed by (level, index)
pairs, matching the on-disk formats.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import InputError

__all__ = [
    "Grid",
    "DyadicInterval",
    "DyadicRect",
    "Shape",
    "SummedAreaTable",
    "build_prefix_sum",
    "rect_average",
    "superlevel_measure",
    "lp_norm",
    "enumerate_shapes",
    "iter_block_means",
    "iter_block_mins",
    "read_grid",
    "write_grid",
]


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, order="C")
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Grid:
    """A real-valued function sampled on the lattice ``{0,...,2^L-1}^d``."""

    values: np.ndarray

    def __post_init__(self):
        v = self.values
        if not isinstance(v, np.ndarray) or v.ndim < 1:
            raise InputError("grid values must be a numpy array with >= 1 axis")
        n = v.shape[0]
        if any(s != n for s in v.shape):
            raise InputError(f"grid must be isotropic, got shape {v.shape}")
        if n < 1 or n & (n - 1):
            raise InputError(f"grid extent must be a power of two, got {n}")
        if not np.all(np.isfinite(v)):
            raise InputError("grid values must be finite")
        object.__setattr__(self, "values", _freeze(v))

    @property
    def dims(self) -> int:
        return self.values.ndim

    @property
    def level(self) -> int:
        return self.values.shape[0].bit_length() - 1

    @property
    def extent(self) -> int:
        return self.values.shape[0]

    @property
    def size(self) -> int:
        return self.values.size

    @classmethod
    def constant(cls, dims: int, level: int, value: float) -> "Grid":
        return cls(np.full((1 << level,) * dims, float(value)))

    @classmethod
    def indicator(cls, dims: int, level: int, cell: Sequence[int]) -> "Grid":
        v = np.zeros((1 << level,) * dims)
        v[tuple(cell)] = 1.0
        return cls(v)

    def require_nonnegative(self, what: str = "weight") -> "Grid":
        if np.any(self.values < 0):
            raise InputError(f"{what} grid must be nonnegative")
        return self

    def __eq__(self, other) -> bool:
        return isinstance(other, Grid) and np.array_equal(self.values, other.values)


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """One halving-subdivision interval: level k splits the axis into 2^k parts."""

    level: int
    index: int

    def __post_init__(self):
        if self.level < 0:
            raise InputError(f"negative dyadic level {self.level}")
        if not 0 <= self.index < (1 << self.level):
            raise InputError(
                f"dyadic index {self.index} out of range at level {self.level}"
            )

    def length(self, grid_level: int) -> int:
        if self.level > grid_level:
            raise InputError(
                f"interval level {self.level} exceeds grid level {grid_level}"
            )
        return 1 << (grid_level - self.level)

    def span(self, grid_level: int) -> tuple[int, int]:
        n = self.length(grid_level)
        return self.index * n, (self.index + 1) * n

    def contains(self, other: "DyadicInterval") -> bool:
        if other.level < self.level:
            return False
        return (other.index >> (other.level - self.level)) == self.index


@dataclass(frozen=True)
class DyadicRect:
    """A product of dyadic intervals, one per axis."""

    intervals: tuple[DyadicInterval, ...]

    def __post_init__(self):
        object.__setattr__(self, "intervals", tuple(self.intervals))
        if not self.intervals:
            raise InputError("rectangle needs at least one axis")

    @classmethod
    def from_levels(
        cls, levels: Sequence[int], indices: Sequence[int]
    ) -> "DyadicRect":
        if len(levels) != len(indices):
            raise InputError("levels and indices must have equal length")
        return cls(tuple(DyadicInterval(k, j) for k, j in zip(levels, indices)))

    @property
    def dims(self) -> int:
        return len(self.intervals)

    @property
    def levels(self) -> tuple[int, ...]:
        return tuple(iv.level for iv in self.intervals)

    def sidelengths(self, grid_level: int) -> tuple[int, ...]:
        return tuple(iv.length(grid_level) for iv in self.intervals)

    def size(self, grid_level: int) -> int:
        out = 1
        for iv in self.intervals:
            out *= iv.length(grid_level)
        return out

    def slices(self, grid_level: int) -> tuple[slice, ...]:
        return tuple(slice(*iv.span(grid_level)) for iv in self.intervals)

    def bounds(self, grid_level: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        spans = [iv.span(grid_level) for iv in self.intervals]
        return tuple(s[0] for s in spans), tuple(s[1] for s in spans)

    def num_max_sides(self, grid_level: int) -> int:
        """How many axes attain the maximal sidelength."""
        sides = self.sidelengths(grid_level)
        top = max(sides)
        return sum(1 for s in sides if s == top)

    def contains_cell(self, cell: Sequence[int], grid_level: int) -> bool:
        for iv, x in zip(self.intervals, cell):
            lo, hi = iv.span(grid_level)
            if not lo <= x < hi:
                return False
        return True


@dataclass(frozen=True, order=True)
class Shape:
    """Per-axis dyadic level vector of a rectangle congruence class.

    On an isotropic grid every cell lies in exactly one rectangle of each
    shape; the number of distinct levels equals the number of distinct
    sidelengths.
    """

    levels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(k) for k in self.levels))

    @property
    def dims(self) -> int:
        return len(self.levels)

    @property
    def complexity(self) -> int:
        return len(set(self.levels))

    def sidelengths(self, grid_level: int) -> tuple[int, ...]:
        return tuple(1 << (grid_level - k) for k in self.levels)

    def block_counts(self) -> tuple[int, ...]:
        return tuple(1 << k for k in self.levels)


def enumerate_shapes(level: int, dims: int, complexity: int) -> list[Shape]:
    """All level vectors in [0, level]^dims with at most ``complexity`` distinct
    sidelengths, in lexicographic order."""
    if level < 0:
        raise InputError(f"negative grid level {level}")
    if not 1 <= complexity <= dims:
        raise InputError(
            f"complexity must satisfy 1 <= c <= d, got c={complexity}, d={dims}"
        )
    out = []
    for levels in itertools.product(range(level + 1), repeat=dims):
        if len(set(levels)) <= complexity:
            out.append(Shape(levels))
    return out


@dataclass(frozen=True)
class SummedAreaTable:
    """Zero-padded cumulative sums along every axis, in fixed axis order.

    ``table[i_1,...,i_d]`` is the sum of cells ``[0,i_1) x ... x [0,i_d)``, so
    any axis-aligned box sum is an alternating sum over its 2^d corners.
    """

    table: np.ndarray

    @property
    def dims(self) -> int:
        return self.table.ndim

    @property
    def extent(self) -> int:
        return self.table.shape[0] - 1

    @property
    def level(self) -> int:
        return self.extent.bit_length() - 1

    def box_sum(self, lo: Sequence[int], hi: Sequence[int]) -> float:
        """Sum of the cells in the half-open box [lo, hi)."""
        d = self.dims
        if len(lo) != d or len(hi) != d:
            raise InputError("box bounds must match grid dimension")
        n = self.extent
        for a, b in zip(lo, hi):
            if not (0 <= a < b <= n):
                raise InputError(f"box [{lo}, {hi}) out of bounds for extent {n}")
        total = 0.0
        for picks in itertools.product((0, 1), repeat=d):
            idx = tuple(hi[i] if p else lo[i] for i, p in enumerate(picks))
            sign = 1.0 if (d - sum(picks)) % 2 == 0 else -1.0
            total += sign * self.table[idx]
        return total

    def rect_sum(self, rect: DyadicRect) -> float:
        if rect.dims != self.dims:
            raise InputError("rectangle dimension does not match table")
        lo, hi = rect.bounds(self.level)
        return self.box_sum(lo, hi)


def build_prefix_sum(g: Grid) -> SummedAreaTable:
    """Cumulative sums of ``g`` along every axis (axis 0 first), zero-padded."""
    acc = g.values.astype(np.float64)
    for axis in range(g.dims):
        acc = np.cumsum(acc, axis=axis)
    padded = np.zeros(tuple(s + 1 for s in acc.shape))
    padded[(slice(1, None),) * g.dims] = acc
    return SummedAreaTable(_freeze(padded))


def rect_average(s: SummedAreaTable, r: DyadicRect) -> float:
    """Arithmetic mean of the cells of ``r``."""
    lo, hi = r.bounds(s.level)
    size = 1
    for a, b in zip(lo, hi):
        size *= b - a
    return s.box_sum(lo, hi) / size


def superlevel_measure(g: Grid, t: float, w: Grid | None = None) -> float:
    """w-measure of the strict superlevel set {x : g(x) > t}.

    Without a weight this is the cell count of the set.
    """
    mask = g.values > t
    if w is None:
        return float(np.count_nonzero(mask))
    if w.values.shape != g.values.shape:
        raise InputError("weight grid shape does not match")
    w.require_nonnegative()
    return float(w.values[mask].sum())


def lp_norm(f: Grid, p: float, w: Grid | None = None) -> float:
    """(sum |f|^p w)^(1/p) with counting measure."""
    if p < 1:
        raise InputError(f"lp_norm requires p >= 1, got {p}")
    a = np.abs(f.values) ** p
    if w is not None:
        if w.values.shape != f.values.shape:
            raise InputError("weight grid shape does not match")
        w.require_nonnegative()
        a = a * w.values
    return float(a.sum() ** (1.0 / p))


def _halve(a: np.ndarray, axis: int, combine) -> np.ndarray:
    even = [slice(None)] * a.ndim
    odd = [slice(None)] * a.ndim
    even[axis] = slice(0, None, 2)
    odd[axis] = slice(1, None, 2)
    return combine(a[tuple(even)], a[tuple(odd)])


def _iter_block_reduce(
    values: np.ndarray, level: int, combine
) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    d = values.ndim

    def rec(arr: np.ndarray, axis: int, prefix: tuple[int, ...]):
        if axis == d:
            yield prefix, arr
            return
        cur = arr
        for k in range(level, -1, -1):
            yield from rec(cur, axis + 1, prefix + (k,))
            if k:
                cur = _halve(cur, axis, combine)

    yield from rec(values, 0, ())


def iter_block_means(
    values: np.ndarray, level: int
) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    """Yield (levels, means) for every shape, where ``means`` holds the average
    over each grid-aligned block of that shape.

    Means are built by repeated pairwise averaging, so blocks of a constant
    grid average to exactly that constant and indicator grids produce exact
    dyadic rationals.
    """
    yield from _iter_block_reduce(values, level, lambda a, b: 0.5 * (a + b))


def iter_block_mins(
    values: np.ndarray, level: int
) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    """Like :func:`iter_block_means` but with per-block minima."""
    yield from _iter_block_reduce(values, level, np.minimum)


# -- grid text format ---------------------------------------------------------
#
# line 1: d
# line 2: d space-separated extents, all equal to 2^L
# then:   2^(dL) row-major values, whitespace separated


def read_grid(path) -> Grid:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            tokens = fh.read().split()
    except OSError as exc:
        raise InputError(f"cannot read grid file {path}: {exc}") from exc
    return parse_grid(tokens)


def parse_grid(tokens: list[str]) -> Grid:
    if not tokens:
        raise InputError("empty grid file")
    try:
        d = int(tokens[0])
    except ValueError as exc:
        raise InputError(f"bad dimension field {tokens[0]!r}") from exc
    if d < 1:
        raise InputError(f"grid dimension must be >= 1, got {d}")
    if len(tokens) < 1 + d:
        raise InputError("grid file truncated before extents")
    try:
        extents = [int(t) for t in tokens[1 : 1 + d]]
    except ValueError as exc:
        raise InputError("bad extent field") from exc
    n = extents[0]
    if any(e != n for e in extents):
        raise InputError(f"grid extents must all be equal, got {extents}")
    if n < 1 or n & (n - 1):
        raise InputError(f"grid extent must be a power of two, got {n}")
    expected = n**d
    raw = tokens[1 + d :]
    if len(raw) != expected:
        raise InputError(f"expected {expected} values, got {len(raw)}")
    try:
        vals = np.array([float(t) for t in raw], dtype=np.float64)
    except ValueError as exc:
        raise InputError("bad value field in grid file") from exc
    if not np.all(np.isfinite(vals)):
        raise InputError("grid values must be finite")
    return Grid(vals.reshape((n,) * d))


def write_grid(path, g: Grid) -> None:
    n = g.extent
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{g.dims}\n")
        fh.write(" ".join([str(n)] * g.dims) + "\n")
        flat = g.values.reshape(-1, n)
        for row in flat:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")
