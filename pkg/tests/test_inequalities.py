import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from dyadicmax import (
    Grid,
    InputError,
    apstar,
    elementary_ineq_gap,
    endpoint_ratio,
    llogl_ratio,
    llogl_ratio_2d,
    maximal_bruteforce,
    phi,
    strong_fs_ratio,
    weak_fs_ratio,
    young_gap,
)
from dyadicmax.grids import build_prefix_sum, lp_norm, rect_average, superlevel_measure
from dyadicmax.inequalities import report_csv_row


def brute_compose(w, c):
    out = w
    for k in range(1, c + 1):
        out = maximal_bruteforce(out, k, "dyadic")
    return out


# -- apstar ----------------------------------------------------------------------


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0])
def test_apstar_constant_weight(p):
    assert apstar(Grid.constant(2, 2, 5.0), p) == pytest.approx(1.0)


def test_apstar_two_cell_fixture():
    w = Grid(np.array([1.0, 4.0]))
    # oracle: enumerate the three dyadic intervals of a 2-cell axis
    sat_w = build_prefix_sum(w)
    sat_v = build_prefix_sum(Grid(1.0 / w.values))
    from dyadicmax import DyadicRect

    candidates = []
    for lv, idx in [(0, 0), (1, 0), (1, 1)]:
        r = DyadicRect.from_levels([lv], [idx])
        candidates.append(rect_average(sat_w, r) * rect_average(sat_v, r))
    assert max(candidates) == pytest.approx(25 / 16)
    assert apstar(w, 2.0) == pytest.approx(1.5625)


def test_apstar_nonincreasing_in_p():
    rng = np.random.default_rng(19)
    for trial in range(20):
        w = Grid(rng.uniform(0.1, 5.0, size=(8, 8)))
        vals = [apstar(w, p) for p in (1.5, 2.0, 3.0)]
        assert vals[0] >= vals[1] - 1e-12 >= vals[2] - 2e-12
        assert all(v >= 1.0 - 1e-12 for v in vals)


def test_apstar_p1_uses_min():
    w = Grid(np.array([1.0, 4.0]))
    assert apstar(w, 1.0) == pytest.approx(2.5)  # avg 2.5 over min 1


def test_apstar_validation():
    with pytest.raises(InputError):
        apstar(Grid(np.array([1.0, 0.0])), 2.0)
    with pytest.raises(InputError):
        apstar(Grid(np.array([1.0, -1.0])), 2.0)
    with pytest.raises(InputError):
        apstar(Grid(np.array([1.0, 2.0])), 0.5)


# -- weak type -------------------------------------------------------------------


def test_weak_fs_constant_fixture():
    f = Grid.constant(1, 2, 1.0)
    w = Grid.constant(1, 2, 1.0)
    rep = weak_fs_ratio(f, w, 0.5, 2.0, 1)
    assert rep.numerator == pytest.approx(2.0)
    assert rep.denominator == pytest.approx(4.0)
    assert rep.ratio == pytest.approx(0.5)


def test_weak_fs_empty_superlevel():
    f = Grid.constant(2, 2, 1.0)
    w = Grid.constant(2, 2, 1.0)
    rep = weak_fs_ratio(f, w, 1.0, 2.0, 2)  # t = max M_c f, strict >
    assert rep.ratio == 0.0


def test_weak_fs_point_mass_fixture_matches_bruteforce():
    w = Grid.indicator(2, 2, (0, 0))
    f = Grid.indicator(2, 2, (3, 3))
    rep = weak_fs_ratio(f, w, 1 / 32, 2.0, 2)
    num = superlevel_measure(maximal_bruteforce(f, 2, "dyadic"), 1 / 32, w) ** 0.5
    den = lp_norm(f, 2.0, brute_compose(w, 2)) * 32
    assert rep.ratio == pytest.approx(num / den, rel=1e-12)
    assert rep.ratio == pytest.approx(1 / math.sqrt(160), rel=1e-12)


def test_weak_fs_scaling_invariance():
    rng = np.random.default_rng(20)
    f = Grid(rng.random((8, 8)))
    w = Grid(rng.random((8, 8)))
    base = weak_fs_ratio(f, w, 0.25, 1.5, 2)
    scaled_f = weak_fs_ratio(Grid(7.5 * f.values), w, 7.5 * 0.25, 1.5, 2)
    assert scaled_f.ratio == pytest.approx(base.ratio, rel=1e-9)
    scaled_w = weak_fs_ratio(f, Grid(3.25 * w.values), 0.25, 1.5, 2)
    assert scaled_w.ratio == pytest.approx(base.ratio, rel=1e-9)


def test_weak_fs_zero_weight_is_skipped():
    f = Grid.constant(2, 2, 1.0)
    w = Grid.constant(2, 2, 0.0)
    assert weak_fs_ratio(f, w, 0.5, 2.0, 2) is None


def test_weak_fs_probe_mode_tag():
    f = Grid.constant(2, 2, 1.0)
    w = Grid.constant(2, 2, 1.0)
    rep = weak_fs_ratio(f, w, 0.5, 2.0, 2, single_maximal_weight=True)
    assert rep.inequality == "weak-fs-probe"
    assert rep.ratio == pytest.approx(0.5)


def test_weak_fs_validation():
    f = Grid.constant(2, 2, 1.0)
    with pytest.raises(InputError):
        weak_fs_ratio(f, f, 0.0, 2.0, 2)
    with pytest.raises(InputError):
        weak_fs_ratio(f, f, 0.5, 1.0, 2)


# -- strong type -----------------------------------------------------------------


def test_strong_fs_constant_is_one():
    f = Grid.constant(2, 2, 1.0)
    w = Grid.constant(2, 2, 1.0)
    assert strong_fs_ratio(f, w, 2.0, 2).ratio == pytest.approx(1.0)


def test_strong_fs_scale_invariant():
    rng = np.random.default_rng(21)
    f = Grid(rng.random((8, 8)))
    w = Grid(rng.random((8, 8)))
    base = strong_fs_ratio(f, w, 2.0, 2)
    scaled = strong_fs_ratio(Grid(11.0 * f.values), w, 2.0, 2)
    assert scaled.ratio == pytest.approx(base.ratio, rel=1e-9)


@pytest.mark.parametrize("dims,level", [(2, 2), (3, 1)])
def test_strong_fs_point_mass_matches_bruteforce(dims, level):
    f = Grid.indicator(dims, level, (0,) * dims)
    w = Grid.indicator(dims, level, ((1 << level) - 1,) * dims)
    rep = strong_fs_ratio(f, w, 1.5, dims)
    num = lp_norm(maximal_bruteforce(f, dims, "dyadic"), 1.5, w)
    den = lp_norm(f, 1.5, brute_compose(w, dims))
    assert rep.ratio == pytest.approx(num / den, rel=1e-12)


# -- endpoint --------------------------------------------------------------------


def test_endpoint_constant_fixture():
    f = Grid.constant(2, 2, 1.0)
    rep = endpoint_ratio(f, 0.5, 2)
    assert rep.numerator == 16
    assert rep.denominator == pytest.approx(32 * (1 + math.log(2)))
    assert rep.ratio == pytest.approx(16 / (32 * (1 + math.log(2))))


def test_endpoint_above_max_is_zero():
    f = Grid.constant(2, 2, 1.0)
    assert endpoint_ratio(f, 1.0, 2).ratio == 0.0


def test_endpoint_point_mass_matches_bruteforce():
    f = Grid.indicator(2, 2, (1, 2))
    t = 1 / 8
    rep = endpoint_ratio(f, t, 2)
    num = superlevel_measure(maximal_bruteforce(f, 2, "dyadic"), t)
    scaled = f.values / t
    den = float(
        np.sum(scaled * (1 + np.log(np.maximum(scaled, 1.0))))
    )
    assert rep.ratio == pytest.approx(num / den, rel=1e-12)


def test_endpoint_c1_reduces_to_mass_over_t():
    rng = np.random.default_rng(22)
    f = Grid(rng.random(16))
    t = 0.3
    rep = endpoint_ratio(f, t, 1)
    assert rep.denominator == float(np.sum(np.abs(f.values) / t))  # exact


def test_endpoint_validation():
    with pytest.raises(InputError):
        endpoint_ratio(Grid.constant(2, 2, 1.0), 0.0, 2)


def test_endpoint_zero_function_skipped():
    assert endpoint_ratio(Grid.constant(2, 2, 0.0), 0.5, 2) is None


# -- planar L log L ----------------------------------------------------------------


def test_llogl_2d_constant_fixture():
    f = Grid.constant(2, 2, 1.0)
    w = Grid.constant(2, 2, 1.0)
    rep = llogl_ratio_2d(f, w, 0.5)
    assert rep.numerator == pytest.approx(16.0)
    assert rep.denominator == pytest.approx(32 * (1 + math.log(2)))


def test_llogl_2d_above_max_is_zero():
    f = Grid.constant(2, 2, 1.0)
    w = Grid.constant(2, 2, 1.0)
    assert llogl_ratio_2d(f, w, 2.0).ratio == 0.0


def test_llogl_2d_point_mass_pair_matches_bruteforce():
    f = Grid.indicator(2, 2, (0, 0))
    w = Grid.indicator(2, 2, (3, 0))
    t = 1 / 8
    rep = llogl_ratio_2d(f, w, t)
    num = superlevel_measure(maximal_bruteforce(f, 2, "dyadic"), t, w)
    scaled = f.values / t
    big_w = brute_compose(w, 2)
    den = float(np.sum(scaled * (1 + np.log(np.maximum(scaled, 1.0))) * big_w.values))
    assert rep.ratio == pytest.approx(num / den, rel=1e-12)


def test_llogl_2d_requires_two_dims():
    with pytest.raises(InputError):
        llogl_ratio_2d(Grid(np.ones(4)), Grid(np.ones(4)), 0.5)


def test_llogl_general_matches_planar_case():
    rng = np.random.default_rng(24)
    f = Grid(rng.random((8, 8)))
    w = Grid(rng.random((8, 8)))
    a = llogl_ratio_2d(f, w, 0.25)
    b = llogl_ratio(f, w, 0.25, 2)
    assert b.ratio == pytest.approx(a.ratio, rel=1e-12)


# -- scalar inequalities ------------------------------------------------------------


def test_phi_at_zero():
    assert phi(0.0, 2) == 0.0
    assert phi(0.0, 4) == 0.0


def test_phi_m2_closed_form():
    for a in np.linspace(0.0, 5.0, 41):
        assert phi(float(a), 2) == pytest.approx(math.expm1(a), rel=1e-10)


def test_phi_one_third_is_two():
    # oracle: numeric quadrature of the defining integral
    oracle, err = quad(lambda s: math.exp(math.sqrt(s)), 0.0, 1.0)
    assert oracle == pytest.approx(2.0, abs=1e-10)
    assert phi(1.0, 3) == pytest.approx(2.0, rel=1e-10)


def test_phi_large_argument_quadrature_branch():
    assert phi(31.0, 2) == pytest.approx(math.expm1(31.0), rel=1e-9)


def test_phi_strictly_dominates_identity():
    rng = np.random.default_rng(25)
    for a in rng.uniform(1e-12, 20.0, size=50):
        for m in (2, 3, 4):
            assert phi(float(a), m) > a + 1e-15 * a


def test_phi_validation():
    with pytest.raises(InputError):
        phi(-1.0, 2)
    with pytest.raises(InputError):
        phi(1.0, 1)


def test_young_gap_zero_a():
    assert young_gap(0.0, 2.0, 3) == pytest.approx(2.0 * math.log(2.0) ** 2)


def test_young_gap_small_b():
    for a in (0.5, 1.0, 4.0):
        gap = young_gap(a, 0.8, 2)
        assert gap == pytest.approx(phi(a, 2) - 0.8 * a)
        assert gap > 0


def test_young_gap_fixture():
    assert young_gap(1.0, math.e, 2) == pytest.approx(math.e - 1, rel=1e-12)


def test_young_gap_validation():
    with pytest.raises(InputError):
        young_gap(1.0, 0.0, 2)


@given(
    a=st.floats(min_value=1e-9, max_value=10.0),
    b=st.floats(min_value=1e-9, max_value=10.0),
    m=st.sampled_from([2, 3, 4]),
)
@settings(max_examples=300, deadline=None)
def test_young_gap_nonnegative(a, b, m):
    assert young_gap(a, b, m) >= -1e-12


def test_elementary_single_term():
    for a1, s in ((2.0, 1.5), (0.3, 3.0)):
        assert elementary_ineq_gap([a1], s) == pytest.approx((s - 1) * a1**s)


def test_elementary_ones_fixture():
    assert elementary_ineq_gap([1.0, 1.0, 1.0], 2.0) == pytest.approx(3.0)


def test_elementary_empty_sequence():
    assert elementary_ineq_gap([], 2.0) == 0.0


def test_elementary_validation():
    with pytest.raises(InputError):
        elementary_ineq_gap([1.0], 1.0)
    with pytest.raises(InputError):
        elementary_ineq_gap([-1.0, 2.0], 2.0)


@given(
    seq=st.lists(st.floats(min_value=0.0, max_value=50.0), min_size=1, max_size=50),
    s=st.floats(min_value=1.000001, max_value=4.0),
)
@settings(max_examples=300, deadline=None)
def test_elementary_gap_nonnegative(seq, s):
    assert elementary_ineq_gap(seq, s) >= -1e-12


# -- shared behaviors ----------------------------------------------------------------


def test_ratios_see_absolute_value_only():
    rng = np.random.default_rng(26)
    signed = rng.standard_normal((8, 8))
    w = Grid(rng.random((8, 8)))
    f1, f2 = Grid(signed), Grid(np.abs(signed))
    assert weak_fs_ratio(f1, w, 0.25, 2.0, 2).ratio == pytest.approx(
        weak_fs_ratio(f2, w, 0.25, 2.0, 2).ratio, rel=1e-12
    )
    assert strong_fs_ratio(f1, w, 2.0, 2).ratio == pytest.approx(
        strong_fs_ratio(f2, w, 2.0, 2).ratio, rel=1e-12
    )
    assert endpoint_ratio(f1, 0.25, 2).ratio == pytest.approx(
        endpoint_ratio(f2, 0.25, 2).ratio, rel=1e-12
    )
    assert llogl_ratio_2d(f1, w, 0.25).ratio == pytest.approx(
        llogl_ratio_2d(f2, w, 0.25).ratio, rel=1e-12
    )


def test_csv_row_round_trips_floats():
    rep = weak_fs_ratio(
        Grid.constant(1, 2, 1.0), Grid.constant(1, 2, 1.0), 0.5, 2.0, 1,
        generator="uniform-constant", seed=7,
    )
    row = report_csv_row(rep)
    fields = row.split(",")
    assert fields[0] == "weak-fs"
    assert float(fields[-1]) == rep.ratio  # 17 significant digits round-trip
    assert fields[3] == "1"  # c
    probe = endpoint_ratio(Grid.constant(2, 2, 1.0), 0.5, 2)
    assert report_csv_row(probe).split(",")[4] == ""  # p absent
