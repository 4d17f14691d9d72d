"""Command-line front end.

Subcommands: maximal, select, ratios, sweep, oracle-diff.  Flags may also be
supplied through ``--config FILE`` holding ``key=value`` lines (one per line,
``#`` comments allowed); explicit flags win over the file.  Exit codes:
0 success, 1 invariant or acceptance violation, 2 bad input or resource
bound.
"""

from __future__ import annotations

import argparse
import io
import sys

from .covering import (
    check_covering_exp,
    check_covering_half,
    partition_by_order,
    read_rect_family,
    select_exp,
    select_half,
    sparseness_report,
    split_by_max_block,
    RectFamily,
    write_rect_family,
)
from .errors import InputError, InvariantViolation, ResourceLimitError
from .generators import DEFAULT_EPS
from .grids import read_grid, write_grid
from .inequalities import (
    CSV_HEADER,
    apstar,
    endpoint_ratio,
    llogl_ratio_2d,
    report_csv_row,
    strong_fs_ratio,
    weak_fs_ratio,
    RatioReport,
)
from .maximal import maximal
from .sweep import SweepConfig, run_oracle_diff, run_sweep, write_csv


def _parse_config_file(path) -> dict[str, str]:
    out: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise InputError(f"config line must be key=value: {raw!r}")
                key, value = line.split("=", 1)
                out[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise InputError(f"cannot read config file {path}: {exc}") from exc
    return out


def _merge(ns: argparse.Namespace, config: dict[str, str]) -> None:
    for key, raw in config.items():
        if not hasattr(ns, key):
            raise InputError(f"unknown config key {key!r}")
        if getattr(ns, key) is None:
            setattr(ns, key, raw)


def _req(ns, key: str):
    val = getattr(ns, key)
    if val is None:
        raise InputError(f"missing required option --{key.replace('_', '-')}")
    return val


def _as_int(val) -> int:
    try:
        return int(val)
    except (TypeError, ValueError):
        raise InputError(f"expected an integer, got {val!r}") from None


def _as_float(val) -> float:
    try:
        return float(val)
    except (TypeError, ValueError):
        raise InputError(f"expected a number, got {val!r}") from None


def _as_float_list(val) -> tuple[float, ...]:
    if isinstance(val, (list, tuple)):
        return tuple(float(v) for v in val)
    return tuple(_as_float(tok) for tok in str(val).split(",") if tok)


def _as_int_list(val) -> tuple[int, ...]:
    return tuple(_as_int(tok) for tok in str(val).split(",") if tok)


def _as_str_list(val) -> tuple[str, ...]:
    return tuple(tok.strip() for tok in str(val).split(",") if tok.strip())


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def _emit_rows(path, rows: list[RatioReport]) -> None:
    fh, close = _open_out(path)
    try:
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            fh.write(report_csv_row(r) + "\n")
    finally:
        if close:
            fh.close()


def cmd_maximal(ns) -> int:
    f = read_grid(_req(ns, "input"))
    c = _as_int(_req(ns, "complexity"))
    out = maximal(f, c)
    if ns.output is None or ns.output == "-":
        buf = io.StringIO()
        buf.write(f"{out.dims}\n")
        buf.write(" ".join([str(out.extent)] * out.dims) + "\n")
        for row in out.values.reshape(-1, out.extent):
            buf.write(" ".join(repr(float(v)) for v in row) + "\n")
        sys.stdout.write(buf.getvalue())
    else:
        write_grid(ns.output, out)
    return 0


def cmd_select(ns) -> int:
    fam = read_rect_family(_req(ns, "input"))
    procedure = ns.procedure or "half"
    if procedure not in ("half", "exp"):
        raise InputError(f"procedure must be half or exp, got {procedure!r}")
    m = _as_int(ns.complexity) if ns.complexity is not None else fam.dims
    subfamilies = partition_by_order(fam.rects, fam.level)
    all_selected = []
    failures = 0
    for perm, sub in subfamilies.items():
        # covering soundness below full complexity needs homogeneous leading
        # blocks, so split when m < d
        parts = split_by_max_block(sub) if m < fam.dims else [sub]
        for part in parts:
            if procedure == "half":
                sel = select_half(part)
                report = sparseness_report(sel)
                min_ratio = min((r for _, _, r in report), default=1.0)
            else:
                if m < 2:
                    raise InputError("exp selection requires complexity m >= 2")
                sel = select_exp(part, m)
                min_ratio = float("nan")
            all_selected.extend(sel.selected)
            cover = ""
            if fam.dims >= 2 and m >= 2:
                check = (
                    check_covering_half if procedure == "half" else check_covering_exp
                )
                ok, witness = check(part, sel, m)
                cover = "covering=ok" if ok else f"covering=FAIL at {witness}"
                failures += 0 if ok else 1
            print(
                f"order={perm} members={len(part)} selected={len(sel.selected)}"
                + (f" min_residual_ratio={min_ratio:.4f}" if procedure == "half" else "")
                + (f" {cover}" if cover else "")
            )
    out_fam = RectFamily(
        rects=tuple(all_selected), dims=fam.dims, level=fam.level
    )
    if ns.output is not None and ns.output != "-":
        write_rect_family(ns.output, out_fam)
    else:
        print(f"{out_fam.dims} {out_fam.level} {len(out_fam.rects)}")
        for r in out_fam.rects:
            print(" ".join(f"{iv.level} {iv.index}" for iv in r.intervals))
    return 1 if failures else 0


_INEQ_ALIASES = {
    "weak": "weak",
    "strong": "strong",
    "endpoint": "endpoint",
    "llogl2d": "llogl2d",
    "apstar": "apstar",
}


def cmd_ratios(ns) -> int:
    ineq = _req(ns, "inequality")
    if ineq not in _INEQ_ALIASES:
        raise InputError(
            f"inequality must be one of {sorted(_INEQ_ALIASES)}, got {ineq!r}"
        )
    c = _as_int(ns.complexity) if ns.complexity is not None else None
    ps = _as_float_list(ns.p) if ns.p is not None else ()
    ts = _as_float_list(ns.t) if ns.t is not None else ()
    rows: list[RatioReport] = []

    if ineq == "apstar":
        w = read_grid(_req(ns, "weight"))
        if not ps:
            raise InputError("apstar needs --p")
        for p in ps:
            val = apstar(w, p)
            rows.append(
                RatioReport(
                    inequality="apstar",
                    dims=w.dims,
                    level=w.level,
                    c=None,
                    p=p,
                    t=None,
                    generator=None,
                    seed=None,
                    numerator=val,
                    denominator=1.0,
                    ratio=val,
                )
            )
    elif ineq == "endpoint":
        f = read_grid(_req(ns, "input"))
        if c is None or not ts:
            raise InputError("endpoint needs --complexity and --t")
        for t in ts:
            rep = endpoint_ratio(f, t, c)
            if rep is not None:
                rows.append(rep)
    else:
        f = read_grid(_req(ns, "input"))
        w = read_grid(_req(ns, "weight"))
        if ineq == "weak":
            if c is None or not ps or not ts:
                raise InputError("weak needs --complexity, --p and --t")
            for p in ps:
                for t in ts:
                    rep = weak_fs_ratio(f, w, t, p, c)
                    if rep is not None:
                        rows.append(rep)
        elif ineq == "strong":
            if c is None or not ps:
                raise InputError("strong needs --complexity and --p")
            for p in ps:
                rep = strong_fs_ratio(f, w, p, c)
                if rep is not None:
                    rows.append(rep)
        else:  # llogl2d
            if not ts:
                raise InputError("llogl2d needs --t")
            for t in ts:
                rep = llogl_ratio_2d(f, w, t)
                if rep is not None:
                    rows.append(rep)
    _emit_rows(ns.output, rows)
    return 0


def cmd_sweep(ns) -> int:
    levels = (
        _as_int_list(ns.levels)
        if ns.levels is not None
        else ((_as_int(ns.level),) if ns.level is not None else None)
    )
    if levels is None:
        raise InputError("sweep needs --levels (or --level)")
    cfg = SweepConfig(
        dims=_as_int(_req(ns, "dim")),
        levels=levels,
        complexity=_as_int(_req(ns, "complexity")),
        p_values=_as_float_list(ns.p) if ns.p is not None else (2.0,),
        t_values=_as_float_list(ns.t) if ns.t is not None else (0.5,),
        trials=_as_int(_req(ns, "trials")),
        seed=_as_int(ns.seed) if ns.seed is not None else 0,
        generator=_req(ns, "generator"),
        inequalities=(
            _as_str_list(ns.inequality) if ns.inequality is not None else ("weak",)
        ),
        t_mode=ns.t_mode or "absolute",
        eps=_as_float(ns.eps) if ns.eps is not None else DEFAULT_EPS,
        jobs=_as_int(ns.jobs) if ns.jobs is not None else 1,
    )
    rows = run_sweep(cfg)
    if ns.output is None or ns.output == "-":
        _emit_rows(None, rows)
    else:
        write_csv(ns.output, rows)
    return 0


def cmd_oracle_diff(ns) -> int:
    trials = _as_int(ns.trials) if ns.trials is not None else 0
    if trials == 0:
        print("no trials requested; nothing to compare")
        return 0
    report = run_oracle_diff(
        dims=_as_int(_req(ns, "dim")),
        level=_as_int(_req(ns, "level")),
        trials=trials,
        seed=_as_int(ns.seed) if ns.seed is not None else 0,
    )
    print(
        f"grids={report.grids_checked} families={report.families_checked} "
        f"max_deviation={report.max_deviation:.3e} "
        f"criterion_mismatches={report.criterion_mismatches} "
        f"covering_failures={report.covering_failures}"
    )
    return 0 if report.ok else 1


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="key=value config file; flags override")
    sub.add_argument("--dim", help="grid dimension d")
    sub.add_argument("--level", help="grid level L (extent 2^L per axis)")
    sub.add_argument("--levels", help="comma list of grid levels")
    sub.add_argument("--complexity", help="number of distinct sidelengths c")
    sub.add_argument("--p", help="comma list of exponents p")
    sub.add_argument("--t", help="comma list of thresholds t")
    sub.add_argument("--trials", help="number of random trials")
    sub.add_argument("--seed", help="base seed; trial i uses seed XOR i")
    sub.add_argument("--generator", help="instance generator name")
    sub.add_argument("--input", help="input grid or rectangle-family file")
    sub.add_argument("--weight", help="weight grid file")
    sub.add_argument("--output", help="output file; '-' or absent = stdout")
    sub.add_argument("--procedure", help="selection rule: half or exp")
    sub.add_argument(
        "--inequality",
        help="weak | strong | endpoint | llogl2d | apstar (comma list for sweep)",
    )
    sub.add_argument("--t-mode", dest="t_mode", help="absolute or relative-max")
    sub.add_argument("--eps", help="floor applied by generators (default 1e-6)")
    sub.add_argument("--jobs", help="worker threads for sweep trials")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dyadicmax",
        description="dyadic maximal operators, covering selection, inequality sweeps",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("maximal", cmd_maximal),
        ("select", cmd_select),
        ("ratios", cmd_ratios),
        ("sweep", cmd_sweep),
        ("oracle-diff", cmd_oracle_diff),
    ):
        sub = subs.add_parser(name)
        _add_common(sub)
        sub.set_defaults(handler=fn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.config is not None:
            _merge(ns, _parse_config_file(ns.config))
        return ns.handler(ns)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
