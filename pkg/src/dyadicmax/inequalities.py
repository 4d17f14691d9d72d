"""Empirical constants for the weighted maximal inequalities.

Each ratio function computes numerator / denominator for one inequality
instance and returns a :class:`RatioReport` carrying the full instance
metadata, or ``None`` when the denominator vanishes (skipped instance, so
random sweeps can proceed).  ``log+`` is the natural logarithm clipped at
zero; the choice of base is absorbed by the constants and recorded in the
CSV header documentation.

The scalar inequalities used by the exponential selection argument live here
as well: the primitive ``phi``, the Young-type gap and the prefix-power gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .errors import InputError
from .grids import Grid, iter_block_means, iter_block_mins, lp_norm, superlevel_measure
from .maximal import compose, compose_2d, maximal

__all__ = [
    "RatioReport",
    "CSV_HEADER",
    "report_csv_row",
    "apstar",
    "weak_fs_ratio",
    "strong_fs_ratio",
    "endpoint_ratio",
    "llogl_ratio_2d",
    "llogl_ratio",
    "phi",
    "young_gap",
    "elementary_ineq_gap",
]


@dataclass(frozen=True)
class RatioReport:
    """One measured inequality constant with its instance metadata."""

    inequality: str
    dims: int
    level: int
    c: int | None
    p: float | None
    t: float | None
    generator: str | None
    seed: int | str | None
    numerator: float
    denominator: float
    ratio: float


CSV_HEADER = "inequality,d,L,c,p,t,generator,seed,numerator,denominator,ratio"


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def report_csv_row(r: RatioReport) -> str:
    return ",".join(
        _fmt(v)
        for v in (
            r.inequality,
            r.dims,
            r.level,
            r.c,
            r.p,
            r.t,
            r.generator,
            r.seed,
            r.numerator,
            r.denominator,
            r.ratio,
        )
    )


def _report(tag, f_or_w: Grid, c, p, t, generator, seed, num, den) -> RatioReport | None:
    if den <= 0:
        return None
    return RatioReport(
        inequality=tag,
        dims=f_or_w.dims,
        level=f_or_w.level,
        c=c,
        p=p,
        t=t,
        generator=generator,
        seed=seed,
        numerator=float(num),
        denominator=float(den),
        ratio=float(num) / float(den),
    )


def logplus(x):
    """max(0, ln x), elementwise, without log-of-zero warnings."""
    return np.log(np.maximum(x, 1.0))


def apstar(w: Grid, p: float) -> float:
    """Rectangle Muckenhoupt-type constant over every dyadic rectangle.

    For p > 1: sup over rectangles of avg(w) * avg(w^(-1/(p-1)))^(p-1).
    For p = 1: sup of avg(w) / min(w).  Requires a strictly positive weight;
    a zero cell would make the reciprocal power undefined.
    """
    if p < 1:
        raise InputError(f"apstar requires p >= 1, got {p}")
    if np.any(w.values <= 0):
        raise InputError("apstar requires a strictly positive weight")
    L = w.level
    best = 0.0
    if p == 1:
        for (_, means), (_, mins) in zip(
            iter_block_means(w.values, L), iter_block_mins(w.values, L)
        ):
            best = max(best, float((means / mins).max()))
        return best
    dual = w.values ** (-1.0 / (p - 1.0))
    for (_, means), (_, dual_means) in zip(
        iter_block_means(w.values, L), iter_block_means(dual, L)
    ):
        best = max(best, float((means * dual_means ** (p - 1.0)).max()))
    return best


def weak_fs_ratio(
    f: Grid,
    w: Grid,
    t: float,
    p: float,
    c: int,
    generator: str | None = None,
    seed: int | None = None,
    single_maximal_weight: bool = False,
) -> RatioReport | None:
    """Weak-type ratio: w({M_c f > t})^(1/p) against (1/t) ||f||_{L^p(W)}
    where W is the composed weight of complexity c.

    ``single_maximal_weight`` replaces W by one maximal application only; an
    exploratory probe of the open one-operator variant, with no boundedness
    claim attached.
    """
    if t <= 0:
        raise InputError(f"weak_fs_ratio requires t > 0, got {t}")
    if p <= 1:
        raise InputError(f"weak_fs_ratio requires p > 1, got {p}")
    w.require_nonnegative()
    big_w = maximal(w, c) if single_maximal_weight else compose(w, c)
    num = superlevel_measure(maximal(f, c), t, w) ** (1.0 / p)
    den = lp_norm(f, p, big_w) / t
    tag = "weak-fs-probe" if single_maximal_weight else "weak-fs"
    return _report(tag, f, c, p, t, generator, seed, num, den)


def strong_fs_ratio(
    f: Grid,
    w: Grid,
    p: float,
    c: int,
    generator: str | None = None,
    seed: int | None = None,
) -> RatioReport | None:
    """Strong-type ratio: ||M_c f||_{L^p(w)} against ||f||_{L^p(W)}."""
    if p <= 1:
        raise InputError(f"strong_fs_ratio requires p > 1, got {p}")
    w.require_nonnegative()
    num = lp_norm(maximal(f, c), p, w)
    den = lp_norm(f, p, compose(w, c))
    return _report("strong-fs", f, c, p, None, generator, seed, num, den)


def endpoint_ratio(
    f: Grid,
    t: float,
    c: int,
    generator: str | None = None,
    seed: int | None = None,
) -> RatioReport | None:
    """Endpoint ratio: |{M_c f > t}| against the Orlicz-type sum
    sum (|f|/t) (1 + log+(|f|/t))^(c-1)."""
    if t <= 0:
        raise InputError(f"endpoint_ratio requires t > 0, got {t}")
    num = superlevel_measure(maximal(f, c), t)
    scaled = np.abs(f.values) / t
    den = float(np.sum(scaled * (1.0 + logplus(scaled)) ** (c - 1)))
    return _report("endpoint", f, c, None, t, generator, seed, num, den)


def llogl_ratio_2d(
    f: Grid,
    w: Grid,
    t: float,
    generator: str | None = None,
    seed: int | None = None,
) -> RatioReport | None:
    """Planar L log L ratio: w({M_2 f > t}) against
    sum (|f|/t)(1 + log+(|f|/t)) W with the planar composed weight."""
    if f.dims != 2:
        raise InputError(f"llogl_ratio_2d requires d = 2, got d = {f.dims}")
    if t <= 0:
        raise InputError(f"llogl_ratio_2d requires t > 0, got {t}")
    w.require_nonnegative()
    num = superlevel_measure(maximal(f, 2), t, w)
    scaled = np.abs(f.values) / t
    den = float(
        np.sum(scaled * (1.0 + logplus(scaled)) * compose_2d(w).values)
    )
    return _report("llogl-2d", f, 2, None, t, generator, seed, num, den)


def llogl_ratio(
    f: Grid,
    w: Grid,
    t: float,
    c: int,
    generator: str | None = None,
    seed: int | None = None,
) -> RatioReport | None:
    """Exploratory weighted L (log L)^(c-1) ratio in any dimension.

    Generalizes the planar case; observational only, there is no boundedness
    theorem backing it beyond d = 2.
    """
    if t <= 0:
        raise InputError(f"llogl_ratio requires t > 0, got {t}")
    w.require_nonnegative()
    num = superlevel_measure(maximal(f, c), t, w)
    scaled = np.abs(f.values) / t
    den = float(
        np.sum(scaled * (1.0 + logplus(scaled)) ** (c - 1) * compose(w, c).values)
    )
    return _report("llogl", f, c, None, t, generator, seed, num, den)


_PHI_SERIES_CUTOFF = 30.0
_PHI_REL_TOL = 1e-15


def phi(a: float, m: int) -> float:
    """Integral of exp(s^(1/(m-1))) over [0, a].

    Evaluated through the expansion
    a + sum_{k>=1} (m-1) / ((k+m-1) k!) * a^((k+m-1)/(m-1)),
    truncated once a term drops below 1e-15 of the running sum; large
    arguments fall back to numeric quadrature to avoid overflowing powers.
    """
    if a < 0:
        raise InputError(f"phi requires a >= 0, got {a}")
    if m < 2:
        raise InputError(f"phi requires m >= 2, got m={m}")
    if a == 0:
        return 0.0
    if a > _PHI_SERIES_CUTOFF:
        val, _ = quad(lambda s: math.exp(s ** (1.0 / (m - 1))), 0.0, a, limit=200)
        return float(val)
    total = a
    root = a ** (1.0 / (m - 1))
    term = (m - 1) / m * a * root  # k = 1
    k = 1
    while term > _PHI_REL_TOL * total:
        total += term
        term *= root * (k + m - 1) / ((k + m) * (k + 1))
        k += 1
    return total


def young_gap(a: float, b: float, m: int) -> float:
    """Slack in the Young-type bound a*b <= phi(a) + b (log+ b)^(m-1)."""
    if b <= 0:
        raise InputError(f"young_gap requires b > 0, got {b}")
    lp = math.log(b) if b > 1 else 0.0
    return phi(a, m) + b * lp ** (m - 1) - a * b


def elementary_ineq_gap(a: Sequence[float], s: float) -> float:
    """Slack in (sum a_i)^s <= s * sum a_i (prefix sum_i)^(s-1) for s > 1."""
    if s <= 1:
        raise InputError(f"elementary_ineq_gap requires s > 1, got {s}")
    arr = np.asarray(list(a), dtype=np.float64)
    if arr.size == 0:
        return 0.0
    if np.any(arr < 0):
        raise InputError("sequence terms must be nonnegative")
    prefix = np.cumsum(arr)
    lhs = s * float(np.sum(arr * prefix ** (s - 1.0)))
    return lhs - float(prefix[-1] ** s)
