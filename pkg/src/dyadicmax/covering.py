"""Greedy rectangle selection with sparseness and covering verification.

Two selection rules over a canonically ordered rectangle family:

* ``select_half``: keep a rectangle unless the already-selected union covers
  at least half of it (cell counts, strict ``< 1/2``).
* ``select_exp``: keep a rectangle while the exponential overlap integral
  ``sum_y exp(count(y)^(1/(m-1))) - 1`` stays strictly below ``e`` times its
  size, where ``count`` is how many selected rectangles cover the cell.

Canonical order means: a common axis permutation makes every member's
sidelengths nonincreasing, and members are sorted by longest side descending
(stable).  ``partition_by_order`` produces such subfamilies, one per
permutation; selection is then run independently on each.

The post-hoc verifiers ``check_covering_half`` / ``check_covering_exp``
confirm that the union of the *whole* family sits inside a superlevel set of
a lower-complexity maximal function applied to the selected union.  That
covering statement is a theorem when the run complexity m equals the grid
dimension, or when all members attain their maximal sidelength on the same
number of axes (see ``split_by_max_block``); outside that domain mixed
leading blocks can genuinely break it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, InvariantViolation
from .grids import DyadicRect, Grid
from .maximal import maximal

__all__ = [
    "RectFamily",
    "SelectionResult",
    "partition_by_order",
    "split_by_max_block",
    "make_canonical",
    "select_half",
    "select_exp",
    "overlap_integral",
    "check_covering_half",
    "check_covering_exp",
    "sparseness_report",
    "replay_half_criterion",
    "replay_exp_criterion",
    "rects_union",
    "read_rect_family",
    "write_rect_family",
]


@dataclass(frozen=True)
class RectFamily:
    """An ordered family of dyadic rectangles in one (dims, level) context."""

    rects: tuple[DyadicRect, ...]
    dims: int
    level: int
    canonical: bool = False
    axis_order: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "rects", tuple(self.rects))
        for r in self.rects:
            if r.dims != self.dims:
                raise InputError("family members must share the grid dimension")
            for iv in r.intervals:
                if iv.level > self.level:
                    raise InputError(
                        f"rectangle level {iv.level} exceeds grid level {self.level}"
                    )

    def __len__(self) -> int:
        return len(self.rects)

    def grid_shape(self) -> tuple[int, ...]:
        return (1 << self.level,) * self.dims


@dataclass(frozen=True)
class SelectionResult:
    """Selected subfamily plus the residual cells each member added."""

    selected: tuple[DyadicRect, ...]
    residuals: tuple[np.ndarray, ...]
    procedure: str
    m: int | None
    dims: int
    level: int

    def selected_union(self) -> np.ndarray:
        out = np.zeros((1 << self.level,) * self.dims, dtype=bool)
        for r in self.selected:
            out[r.slices(self.level)] = True
        return out

    def coverage_counts(self) -> np.ndarray:
        out = np.zeros((1 << self.level,) * self.dims, dtype=np.int64)
        for r in self.selected:
            out[r.slices(self.level)] += 1
        return out


def _sort_permutation(sides: Sequence[int]) -> tuple[int, ...]:
    # stable by (-length, axis): ties fall toward the identity permutation
    return tuple(sorted(range(len(sides)), key=lambda i: (-sides[i], i)))


def partition_by_order(
    rects: Iterable[DyadicRect], level: int
) -> dict[tuple[int, ...], RectFamily]:
    """Group rectangles by the axis permutation sorting their sidelengths
    nonincreasingly, then order each group by longest side descending (stable).
    """
    rects = list(rects)
    if not rects:
        return {}
    dims = rects[0].dims
    groups: dict[tuple[int, ...], list[DyadicRect]] = {}
    for r in rects:
        if r.dims != dims:
            raise InputError("family members must share the grid dimension")
        perm = _sort_permutation(r.sidelengths(level))
        groups.setdefault(perm, []).append(r)
    out: dict[tuple[int, ...], RectFamily] = {}
    for perm in sorted(groups):
        members = sorted(
            groups[perm], key=lambda r: -max(r.sidelengths(level))
        )
        out[perm] = RectFamily(
            rects=tuple(members),
            dims=dims,
            level=level,
            canonical=True,
            axis_order=perm,
        )
    return out


def split_by_max_block(fam: RectFamily) -> list[RectFamily]:
    """Split a canonical family into subfamilies whose members all attain the
    maximal sidelength on the same number of axes.

    Needed before covering checks at complexity m strictly below the grid
    dimension: the covering statement relies on earlier rectangles dominating
    later ones on every leading axis, which only the homogeneous subfamilies
    guarantee.
    """
    if not fam.canonical:
        raise InputError("split_by_max_block expects a canonical family")
    groups: dict[int, list[DyadicRect]] = {}
    for r in fam.rects:
        groups.setdefault(r.num_max_sides(fam.level), []).append(r)
    return [
        RectFamily(
            rects=tuple(groups[k]),
            dims=fam.dims,
            level=fam.level,
            canonical=True,
            axis_order=fam.axis_order,
        )
        for k in sorted(groups)
    ]


def make_canonical(
    rects: Iterable[DyadicRect],
    level: int,
    axis_order: tuple[int, ...] | None = None,
) -> RectFamily:
    """Build a canonical family from rectangles already monotone under one
    axis order (identity by default); sorts by longest side, stable."""
    rects = list(rects)
    if not rects:
        raise InputError("cannot canonicalize an empty family")
    dims = rects[0].dims
    order = axis_order if axis_order is not None else tuple(range(dims))
    for r in rects:
        sides = r.sidelengths(level)
        permuted = [sides[a] for a in order]
        if any(permuted[i] < permuted[i + 1] for i in range(dims - 1)):
            raise InputError(
                f"rectangle sides {sides} are not nonincreasing under {order}"
            )
    members = sorted(rects, key=lambda r: -max(r.sidelengths(level)))
    return RectFamily(
        rects=tuple(members),
        dims=dims,
        level=level,
        canonical=True,
        axis_order=order,
    )


def rects_union(
    rects: Iterable[DyadicRect], dims: int, level: int
) -> np.ndarray:
    out = np.zeros((1 << level,) * dims, dtype=bool)
    for r in rects:
        out[r.slices(level)] = True
    return out


def _freeze_mask(mask: np.ndarray) -> np.ndarray:
    mask.flags.writeable = False
    return mask


def select_half(fam: RectFamily) -> SelectionResult:
    """Half-overlap greedy selection.

    The first rectangle is always kept; a later one is kept exactly when the
    union of those already kept covers strictly less than half of its cells.
    Residuals are the newly covered cells of each kept rectangle.
    """
    if fam.rects and not fam.canonical:
        raise InputError("select_half expects a canonical family")
    L = fam.level
    union = np.zeros(fam.grid_shape(), dtype=bool)
    selected: list[DyadicRect] = []
    residuals: list[np.ndarray] = []
    for rect in fam.rects:
        sl = rect.slices(L)
        size = rect.size(L)
        overlap = int(np.count_nonzero(union[sl]))
        if 2 * overlap < size:
            mask = np.zeros(fam.grid_shape(), dtype=bool)
            mask[sl] = ~union[sl]
            residuals.append(_freeze_mask(mask))
            selected.append(rect)
            union[sl] = True
    return SelectionResult(
        selected=tuple(selected),
        residuals=tuple(residuals),
        procedure="half",
        m=None,
        dims=fam.dims,
        level=L,
    )


def _exp_overlap(counts: np.ndarray, m: int) -> float:
    return float(np.expm1(counts.astype(np.float64) ** (1.0 / (m - 1))).sum())


def select_exp(fam: RectFamily, m: int) -> SelectionResult:
    """Exponential-overlap greedy selection at complexity m >= 2.

    A rectangle is kept while the overlap integral of the running coverage
    counts stays strictly below e times its size.
    """
    if m < 2:
        raise InputError(f"select_exp requires m >= 2, got m={m}")
    if fam.rects and not fam.canonical:
        raise InputError("select_exp expects a canonical family")
    L = fam.level
    counts = np.zeros(fam.grid_shape(), dtype=np.int64)
    selected: list[DyadicRect] = []
    residuals: list[np.ndarray] = []
    for rect in fam.rects:
        sl = rect.slices(L)
        size = rect.size(L)
        if _exp_overlap(counts[sl], m) < math.e * size:
            mask = np.zeros(fam.grid_shape(), dtype=bool)
            mask[sl] = counts[sl] == 0
            residuals.append(_freeze_mask(mask))
            selected.append(rect)
            counts[sl] += 1
    return SelectionResult(
        selected=tuple(selected),
        residuals=tuple(residuals),
        procedure="exp",
        m=m,
        dims=fam.dims,
        level=L,
    )


def overlap_integral(counts: Grid, r: DyadicRect, m: int) -> float:
    """sum over the cells of r of exp(count^(1/(m-1))) - 1."""
    if m < 2:
        raise InputError(f"overlap_integral requires m >= 2, got m={m}")
    if np.any(counts.values < 0):
        raise InputError("coverage counts must be nonnegative")
    return _exp_overlap(counts.values[r.slices(counts.level)], m)


_COVER_TOL = 1e-9


def _first_violation(
    union_all: np.ndarray, field: np.ndarray, need: np.ndarray
) -> tuple[int, ...] | None:
    bad = union_all & (field < need)
    if not bad.any():
        return None
    return tuple(int(i) for i in np.argwhere(bad)[0])


def check_covering_half(
    all_fam: RectFamily, sel: SelectionResult, m: int
) -> tuple[bool, tuple[int, ...] | None]:
    """Verify that every cell of the full family union sees a complexity-(m-1)
    rectangle on which the selected union averages at least 1/2.

    Returns (ok, first violating cell or None).  All quantities involved are
    dyadic rationals, so the comparison is exact.
    """
    indicator = Grid(sel.selected_union().astype(np.float64))
    field = maximal(indicator, m - 1)
    union_all = rects_union(all_fam.rects, all_fam.dims, all_fam.level)
    need = np.full(field.values.shape, 0.5)
    witness = _first_violation(union_all, field.values, need)
    return witness is None, witness


def check_covering_exp(
    all_fam: RectFamily, sel: SelectionResult, m: int
) -> tuple[bool, tuple[int, ...] | None]:
    """Exponential analogue of :func:`check_covering_half`.

    Cells inside the selected union are checked against the threshold e - 1
    (their own rectangle's average; coverage count 1 yields exactly that),
    cells covered only by rejected rectangles against e.
    """
    if m < 2:
        raise InputError(f"check_covering_exp requires m >= 2, got m={m}")
    counts = sel.coverage_counts()
    g = Grid(np.expm1(counts.astype(np.float64) ** (1.0 / (m - 1))))
    field = maximal(g, m - 1)
    union_all = rects_union(all_fam.rects, all_fam.dims, all_fam.level)
    need = np.where(counts > 0, math.e - 1.0, math.e) - _COVER_TOL
    witness = _first_violation(union_all, field.values, need)
    return witness is None, witness


def sparseness_report(
    sel: SelectionResult,
) -> list[tuple[int, int, float]]:
    """Per selected rectangle: (residual cells, total cells, ratio).

    Half-selection guarantees ratio >= 1/2; a violation raises
    InvariantViolation carrying the offending index.
    """
    if sel.procedure != "half":
        raise InputError("sparseness_report applies to half-overlap selections")
    out = []
    for i, (rect, resid) in enumerate(zip(sel.selected, sel.residuals)):
        e = int(np.count_nonzero(resid))
        r = rect.size(sel.level)
        if 2 * e < r:
            raise InvariantViolation(
                f"residual {e} below half of {r} at index {i}", index=i
            )
        out.append((e, r, e / r))
    return out


def replay_half_criterion(fam: RectFamily, sel: SelectionResult) -> list[int]:
    """Re-derive every keep/reject decision of a half-selection from scratch.

    Returns the indices (into fam.rects) whose recorded decision disagrees
    with the criterion; empty means the result is exactly reproducible.
    """
    L = fam.level
    union = np.zeros(fam.grid_shape(), dtype=bool)
    mismatches: list[int] = []
    pointer = 0
    for i, rect in enumerate(fam.rects):
        sl = rect.slices(L)
        keep = 2 * int(np.count_nonzero(union[sl])) < rect.size(L)
        recorded = pointer < len(sel.selected) and sel.selected[pointer] == rect
        if keep != recorded:
            mismatches.append(i)
        if recorded:
            pointer += 1
            union[sl] = True
    return mismatches


def replay_exp_criterion(
    fam: RectFamily, sel: SelectionResult, m: int
) -> list[int]:
    """Exponential analogue of :func:`replay_half_criterion`."""
    if m < 2:
        raise InputError(f"replay_exp_criterion requires m >= 2, got m={m}")
    L = fam.level
    counts = np.zeros(fam.grid_shape(), dtype=np.int64)
    mismatches: list[int] = []
    pointer = 0
    for i, rect in enumerate(fam.rects):
        sl = rect.slices(L)
        keep = _exp_overlap(counts[sl], m) < math.e * rect.size(L)
        recorded = pointer < len(sel.selected) and sel.selected[pointer] == rect
        if keep != recorded:
            mismatches.append(i)
        if recorded:
            pointer += 1
            counts[sl] += 1
    return mismatches


# -- rectangle family text format ---------------------------------------------
#
# line 1: d L count
# then one rectangle per line: 2d integers, level_i index_i for each axis


def read_rect_family(path) -> RectFamily:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln for ln in (raw.strip() for raw in fh) if ln]
    except OSError as exc:
        raise InputError(f"cannot read family file {path}: {exc}") from exc
    if not lines:
        raise InputError("empty rectangle family file")
    head = lines[0].split()
    if len(head) != 3:
        raise InputError("family header must be: d L count")
    try:
        d, level, count = (int(t) for t in head)
    except ValueError as exc:
        raise InputError("bad family header field") from exc
    if d < 1 or level < 0 or count < 0:
        raise InputError(f"bad family header values d={d} L={level} count={count}")
    if len(lines) - 1 != count:
        raise InputError(f"expected {count} rectangles, got {len(lines) - 1}")
    rects = []
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != 2 * d:
            raise InputError(f"rectangle line needs {2 * d} integers: {ln!r}")
        try:
            nums = [int(t) for t in toks]
        except ValueError as exc:
            raise InputError(f"bad rectangle field in {ln!r}") from exc
        levels = nums[0::2]
        indices = nums[1::2]
        if any(k > level for k in levels):
            raise InputError(f"rectangle level exceeds grid level in {ln!r}")
        rects.append(DyadicRect.from_levels(levels, indices))
    return RectFamily(rects=tuple(rects), dims=d, level=level)


def write_rect_family(path, fam: RectFamily) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{fam.dims} {fam.level} {len(fam.rects)}\n")
        for r in fam.rects:
            fields = []
            for iv in r.intervals:
                fields.append(str(iv.level))
                fields.append(str(iv.index))
            fh.write(" ".join(fields) + "\n")
