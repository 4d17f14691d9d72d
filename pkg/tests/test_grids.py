import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyadicmax import (
    DyadicInterval,
    DyadicRect,
    Grid,
    InputError,
    build_prefix_sum,
    enumerate_shapes,
    lp_norm,
    rect_average,
    superlevel_measure,
)
from dyadicmax.grids import parse_grid, read_grid, write_grid


def test_grid_rejects_non_power_of_two():
    with pytest.raises(InputError):
        Grid(np.zeros(3))


def test_grid_rejects_anisotropic():
    with pytest.raises(InputError):
        Grid(np.zeros((2, 4)))


def test_grid_rejects_non_finite():
    with pytest.raises(InputError):
        Grid(np.array([1.0, np.nan]))
    with pytest.raises(InputError):
        Grid(np.array([1.0, np.inf]))


def test_grid_values_immutable():
    g = Grid(np.ones(4))
    with pytest.raises(ValueError):
        g.values[0] = 2.0


def test_prefix_sum_1d_cumulative():
    sat = build_prefix_sum(Grid(np.array([1.0, 2.0, 3.0, 4.0])))
    assert np.array_equal(sat.table[1:], [1.0, 3.0, 6.0, 10.0])


def test_prefix_sum_2x2_ones():
    sat = build_prefix_sum(Grid(np.ones((2, 2))))
    assert np.array_equal(sat.table[1:, 1:], [[1.0, 2.0], [2.0, 4.0]])


def test_prefix_sum_random_4x4_every_box():
    rng = np.random.default_rng(7)
    vals = rng.random((4, 4))
    sat = build_prefix_sum(Grid(vals))
    spans = [(a, b) for a in range(4) for b in range(a + 1, 5)]
    boxes = list(itertools.product(spans, spans))
    assert len(boxes) == 100
    for (a0, b0), (a1, b1) in boxes:
        direct = sum(
            vals[i, j] for i in range(a0, b0) for j in range(a1, b1)
        )
        got = sat.box_sum((a0, a1), (b0, b1))
        assert got == pytest.approx(direct, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("dims,level", [(1, 3), (2, 3), (3, 2)])
def test_sat_matches_direct_summation(dims, level):
    rng = np.random.default_rng(32 * dims + level)
    vals = rng.random(((1 << level),) * dims)
    sat = build_prefix_sum(Grid(vals))
    n = 1 << level
    spans = [(a, b) for a in range(n) for b in range(a + 1, n + 1)]
    if dims < 3:
        combos = itertools.product(spans, repeat=dims)
    else:
        combos = (
            tuple(spans[rng.integers(0, len(spans))] for _ in range(3))
            for _ in range(500)
        )
    for combo in combos:
        lo = tuple(c[0] for c in combo)
        hi = tuple(c[1] for c in combo)
        sl = tuple(slice(a, b) for a, b in combo)
        assert sat.box_sum(lo, hi) == pytest.approx(
            float(vals[sl].sum()), rel=1e-9, abs=1e-12
        )


def test_rect_average_constant():
    sat = build_prefix_sum(Grid.constant(2, 2, 3.5))
    r = DyadicRect.from_levels([1, 2], [1, 0])
    assert rect_average(sat, r) == pytest.approx(3.5)


def test_rect_average_full_domain_is_global_mean():
    rng = np.random.default_rng(11)
    vals = rng.random((8, 8))
    sat = build_prefix_sum(Grid(vals))
    full = DyadicRect.from_levels([0, 0], [0, 0])
    assert rect_average(sat, full) == pytest.approx(float(vals.mean()))


def test_rect_average_two_cells():
    sat = build_prefix_sum(Grid(np.array([1.0, 0.0, 0.0, 0.0])))
    r = DyadicRect.from_levels([1], [0])  # cells [0, 2)
    assert rect_average(sat, r) == pytest.approx(0.5)


def test_rect_average_out_of_bounds():
    sat = build_prefix_sum(Grid(np.ones(4)))  # L = 2
    deep = DyadicRect.from_levels([3], [0])
    with pytest.raises(InputError):
        rect_average(sat, deep)


def test_box_sum_rejects_bad_bounds():
    sat = build_prefix_sum(Grid(np.ones((4, 4))))
    with pytest.raises(InputError):
        sat.box_sum((0, 0), (5, 1))
    with pytest.raises(InputError):
        sat.box_sum((2, 0), (2, 1))


def test_superlevel_whole_domain():
    g = Grid(np.arange(1.0, 17.0).reshape(4, 4))
    assert superlevel_measure(g, 0.5) == 16


def test_superlevel_empty():
    g = Grid(np.arange(1.0, 17.0).reshape(4, 4))
    assert superlevel_measure(g, 16.0) == 0  # strict inequality


def test_superlevel_weighted_single_cell():
    g = Grid(np.array([1.0, 0.0, 0.0, 0.0]))
    w = Grid(np.array([2.0, 3.0, 4.0, 5.0]))
    assert superlevel_measure(g, 0.5, w) == 2.0


def test_superlevel_dimension_mismatch():
    g = Grid(np.ones(4))
    with pytest.raises(InputError):
        superlevel_measure(g, 0.5, Grid(np.ones(8)))


def test_superlevel_monotone_in_t_and_additive_in_w():
    rng = np.random.default_rng(3)
    g = Grid(rng.random((8, 8)))
    w1 = Grid(rng.random((8, 8)))
    w2 = Grid(rng.random((8, 8)))
    ts = sorted(rng.random(6))
    vals = [superlevel_measure(g, t, w1) for t in ts]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    both = Grid(w1.values + w2.values)
    for t in ts:
        assert superlevel_measure(g, t, both) == pytest.approx(
            superlevel_measure(g, t, w1) + superlevel_measure(g, t, w2)
        )


def test_lp_norm_constant():
    assert lp_norm(Grid(np.ones((4, 4))), 2.0) == pytest.approx(4.0)


def test_lp_norm_single_support():
    f = Grid(np.array([3.0, 0.0, 0.0, 0.0]))
    w = Grid(np.array([2.0, 1.0, 1.0, 1.0]))
    assert lp_norm(f, 1.0, w) == pytest.approx(6.0)


def test_lp_norm_matches_direct_loop():
    rng = np.random.default_rng(17)
    vals = rng.standard_normal((4, 4))
    direct = sum(abs(v) ** 2 for v in vals.ravel()) ** 0.5
    assert lp_norm(Grid(vals), 2.0) == pytest.approx(direct, rel=1e-12)


def test_lp_norm_rejects_p_below_one():
    with pytest.raises(InputError):
        lp_norm(Grid(np.ones(4)), 0.9)


def test_lp_norm_power_additive_over_disjoint_supports():
    rng = np.random.default_rng(23)
    a = rng.random(8)
    left = np.where(np.arange(8) < 4, a, 0.0)
    right = np.where(np.arange(8) >= 4, a, 0.0)
    p = 2.5
    assert lp_norm(Grid(a), p) ** p == pytest.approx(
        lp_norm(Grid(left), p) ** p + lp_norm(Grid(right), p) ** p
    )


def test_enumerate_shapes_cubes_only():
    shapes = enumerate_shapes(2, 2, 1)
    assert [s.levels for s in shapes] == [(0, 0), (1, 1), (2, 2)]


def test_enumerate_shapes_unrestricted():
    assert len(enumerate_shapes(2, 2, 2)) == 9


def test_enumerate_shapes_l1_d3_c2():
    assert len(enumerate_shapes(1, 3, 2)) == 8


def test_enumerate_shapes_lexicographic_and_complexity():
    shapes = enumerate_shapes(3, 2, 2)
    assert shapes == sorted(shapes)
    shapes_c1 = enumerate_shapes(3, 3, 1)
    assert all(s.complexity == 1 for s in shapes_c1)


def test_enumerate_shapes_bad_complexity():
    with pytest.raises(InputError):
        enumerate_shapes(2, 2, 0)
    with pytest.raises(InputError):
        enumerate_shapes(2, 2, 3)


def test_dyadic_intervals_nested_or_disjoint():
    level = 4
    all_ivs = [
        DyadicInterval(k, j) for k in range(level + 1) for j in range(1 << k)
    ]
    for a, b in itertools.combinations(all_ivs, 2):
        sa, sb = a.span(level), b.span(level)
        overlap = max(0, min(sa[1], sb[1]) - max(sa[0], sb[0]))
        if a.level == b.level:
            assert overlap == 0 or a == b
        elif overlap:
            inner, outer = (a, b) if a.level >= b.level else (b, a)
            assert outer.contains(inner)


def test_dyadic_interval_validation():
    with pytest.raises(InputError):
        DyadicInterval(1, 2)
    with pytest.raises(InputError):
        DyadicInterval(-1, 0)


@given(
    st.lists(
        st.floats(min_value=-100, max_value=100, allow_nan=False),
        min_size=8,
        max_size=8,
    )
)
@settings(max_examples=50, deadline=None)
def test_sat_box_sums_consistent_with_slices(values):
    vals = np.array(values)
    sat = build_prefix_sum(Grid(vals))
    for a in range(8):
        for b in range(a + 1, 9):
            assert sat.box_sum((a,), (b,)) == pytest.approx(
                float(vals[a:b].sum()), rel=1e-9, abs=1e-9
            )


def test_grid_file_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    g = Grid(rng.random((4, 4)))
    path = tmp_path / "g.grid"
    write_grid(path, g)
    back = read_grid(path)
    assert np.array_equal(back.values, g.values)  # bitwise


def test_grid_file_rejects_bad_extent(tmp_path):
    path = tmp_path / "bad.grid"
    path.write_text("1\n3\n1 2 3\n")
    with pytest.raises(InputError):
        read_grid(path)


def test_grid_file_rejects_mismatched_extents():
    with pytest.raises(InputError):
        parse_grid("2 4 2".split() + ["0"] * 8)


def test_grid_file_rejects_wrong_value_count():
    with pytest.raises(InputError):
        parse_grid("1 4 1 2 3".split())


def test_grid_file_rejects_garbage():
    with pytest.raises(InputError):
        parse_grid("1 4 1 2 x 4".split())
    with pytest.raises(InputError):
        parse_grid([])
