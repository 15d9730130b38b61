"""Command line front end: check, simulate, table, stats, demo.

Exit codes: 0/1/2 for Semimartingale/NotSemimartingale/Inconclusive
(``check``), 64 for usage or config errors, 65 for domain errors and 66 for
I/O errors.
"""
from __future__ import annotations

import argparse
import itertools
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import config as cfgmod
from . import counterexamples as cx
from . import criteria
from . import csvio
from . import path_stats as ps
from . import series_sim as ss
from .errors import ConfigError, SimmaError

EXIT_USAGE = 64
EXIT_DOMAIN = 65
EXIT_IO = 66

TABLE_COLUMNS = [
    "alpha", "gamma", "lam", "verdict", "basis", "drift", "gaussian", "jump_integral",
    "truncated_jump_integral", "per_mark_jump_integral", "reason",
]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p, config_required=True):
    p.add_argument("--config", required=config_required, help="TOML instance file")
    p.add_argument("--out", help="output directory (default: standard output)")
    p.add_argument("--seed", type=int, help="override simulation.seed")
    p.add_argument("--paths", type=int, help="override simulation.paths")
    p.add_argument("--grid", type=int, help="override simulation.n_grid")
    p.add_argument("--threads", type=int, default=1, help="worker threads (output order is fixed)")
    p.add_argument("--quiet", action="store_true", help="suppress messages on standard error")


def build_parser():
    parser = _Parser(prog="simma", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _common(sub.add_parser("check", help="decide the semimartingale property"))
    _common(sub.add_parser("simulate", help="write path and ensemble CSVs"))
    _common(sub.add_parser("table", help="verdict table over the [sweep] ranges"))
    p = sub.add_parser("stats", help="path statistics from a path CSV or a config")
    _common(p, config_required=False)
    p.add_argument("--input", help="path CSV written by 'simulate'")
    _common(sub.add_parser("demo", help="counterexample tables"), config_required=False)
    return parser


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _load(args):
    cfg = cfgmod.load(args.config)
    return cfgmod.with_overrides(cfg, seed=args.seed, paths=args.paths, n_grid=args.grid)


def _emit(args, name, text):
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, name), "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _say(args, msg):
    if not args.quiet:
        print(msg, file=sys.stderr)


def _map(fn, items, threads):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_check(args):
    cfg = _load(args)
    spec = cfgmod.build_spec(cfg)
    kernel = cfgmod.build_kernel(cfg.kernel)
    report = criteria.verdict(spec, kernel)
    rec = report.to_record()
    _emit(args, "report.csv", csvio.render(list(rec), [list(rec.values())], [cfg.echo()]))
    _say(args, f"{report.verdict} ({report.basis}): {report.reason}")
    return report.exit_code


def _simulate_one(cfg, scfg, spec, kernel, i):
    ens = ss.sample_ensemble(scfg, spec, i)
    bundle = ss.build_bundle(ens, scfg, spec, kernel)
    meta = [cfg.echo(), f"# seed: {scfg.seed}", f"# path: {i}", f"# gamma_level: {csvio.fmt(ens.gamma_level)}"]
    path_txt = csvio.render(["t", "x", "m", "a"], zip(bundle.grid, bundle.x, bundle.m, bundle.a), meta)
    ens_rows = zip(range(1, len(ens) + 1), ens.gamma, ens.eps, ens.t1, ens.t2, ens.r)
    ens_txt = csvio.render(["i", "gamma", "eps", "t1", "t2", "r"], ens_rows, meta)
    return path_txt, ens_txt


def cmd_simulate(args):
    cfg = _load(args)
    spec = cfgmod.build_spec(cfg)
    kernel = cfgmod.build_kernel(cfg.kernel)
    scfg = cfgmod.build_series(cfg)
    n = cfg.simulation.paths
    outputs = _map(lambda i: _simulate_one(cfg, scfg, spec, kernel, i), range(n), args.threads)
    for i, (path_txt, ens_txt) in enumerate(outputs):
        if args.out:
            _emit(args, f"path_{i:05d}.csv", path_txt)
            _emit(args, f"ensemble_{i:05d}.csv", ens_txt)
        else:
            sys.stdout.write(path_txt)
    _say(args, f"simulated {n} path(s)")
    return 0


def _sweep_points(cfg):
    sw = cfg.sweep or cfgmod.SweepConfig()
    d = cfg.driver
    alphas = sw.alpha or ([d.alpha] if d.alpha is not None else [None])
    gammas = sw.gamma or ([cfg.kernel.gamma] if cfg.kernel.gamma is not None else [None])
    lams = sw.lam or ([d.lam] if d.lam is not None else [None])
    if cfg.sweep is not None and (
        (not sw.alpha and "alpha" in cfg.sweep.model_fields_set)
        or (not sw.gamma and "gamma" in cfg.sweep.model_fields_set)
        or (not sw.lam and "lam" in cfg.sweep.model_fields_set)
    ):
        return []
    return list(itertools.product(alphas, gammas, lams))


def _table_row(cfg, point):
    alpha, gamma, lam = point
    spec = cfgmod.build_spec(cfg, alpha=alpha, lam=lam)
    kernel = cfgmod.build_kernel(cfg.kernel, gamma=gamma)
    rep = criteria.verdict(spec, kernel)
    val = lambda name: rep.integrals[name].value if name in rep.integrals else ""
    return [
        "" if alpha is None else alpha, "" if gamma is None else gamma, "" if lam is None else lam,
        rep.verdict, rep.basis, val("drift"), val("gaussian"), val("jump_integral"),
        val("truncated_jump_integral"), val("per_mark_jump_integral"), rep.reason,
    ]


def cmd_table(args):
    cfg = _load(args)
    points = _sweep_points(cfg)
    rows = _map(lambda p: _table_row(cfg, p), points, args.threads)
    _emit(args, "table.csv", csvio.render(TABLE_COLUMNS, rows, [cfg.echo()]))
    _say(args, f"{len(rows)} row(s)")
    return 0


def _stats_rows(instance, grid, series):
    rows = []
    for name, path in series.items():
        rows.append((instance, len(grid), f"qv_{name}", ps.quadratic_variation(path)))
        rows.append((instance, len(grid), f"tv_{name}", ps.total_variation(path)))
    return rows


def _levels_for(n, wanted):
    levels = wanted
    while levels > 1 and (n - 1) % 2 ** (levels - 1):
        levels -= 1
    return levels


def _variation_rows(instance, series, wanted):
    rows = []
    for name, path in series.items():
        levels = _levels_for(len(path), wanted)
        rep = ps.variation_report(path, levels)
        for size, q, t in zip(rep.grid_sizes, rep.qv, rep.tv):
            rows.append((instance, int(size), f"qv_{name}", q))
            rows.append((instance, int(size), f"tv_{name}", t))
        rows.append((instance, int(rep.grid_sizes[-1]), f"verdict_fv_{name}", rep.verdict_fv))
    return rows


def cmd_stats(args):
    if args.input:
        meta, cols = csvio.read_columns(args.input)
        levels = 4
        echo = next((m for m in meta if m.startswith(cfgmod.ECHO_PREFIX)), None)
        if echo:
            levels = cfgmod.parse_echo(echo).analysis.levels
        series = {k: cols[k] for k in ("x", "m", "a") if k in cols}
        rows = _variation_rows(os.path.basename(args.input), series, levels)
        _emit(args, "stats.csv", csvio.render(["instance", "grid", "statistic", "value"], rows, meta[:1]))
        return 0
    if not args.config:
        raise UsageError("stats needs --input or --config")
    cfg = _load(args)
    spec = cfgmod.build_spec(cfg)
    kernel = cfgmod.build_kernel(cfg.kernel)
    scfg = cfgmod.build_series(cfg)
    n = cfg.simulation.paths
    results = _map(lambda i: (lambda e: (e, ss.build_bundle(e, scfg, spec, kernel)))(ss.sample_ensemble(scfg, spec, i)),
                   range(n), args.threads)
    rows = []
    for i, (ens, b) in enumerate(results):
        tag = f"path_{i:05d}"
        rows += _variation_rows(tag, {"x": b.x, "m": b.m, "a": b.a}, cfg.analysis.levels)
        rows.append((tag, len(b.grid), "sum_r2_in_horizon", ps.step_qv_reference(ens, scfg.horizon)))
        jm = ps.jump_match([b.x], [b.grid], ens, kernel, cfg.analysis.k_jumps)
        rows.append((tag, len(b.grid), "jump_max_abs_error", jm.max_abs_error[0]))
    if n >= ps.MIN_PATHS:
        inc = ps.increments_over(np.array([b.m for _, b in results]), scfg.times, cfg.analysis.intervals)
        keys = list(inc)
        ind = ps.independence_test(inc, list(zip(keys[:-1], keys[1:])))
        rows.append(("ensemble", len(scfg.grid), "independence_max_gap_se", ind.max_gap_se))
        rows.append(("ensemble", len(scfg.grid), "independence_pass", ind.passed))
    _emit(args, "stats.csv", csvio.render(["instance", "grid", "statistic", "value"], rows, [cfg.echo()]))
    return 0


def cmd_demo(args):
    rows = cx.demo_table()
    text = csvio.render(["y", "conditional_mean", "deficit"], rows, ["# table: conditional_mean"])
    gaps = cx.gap_surface()
    text += csvio.render(["theta", "u", "lhs", "rhs", "gap"], gaps, ["# table: factorization_gap"])
    _emit(args, "demo.csv", text)
    return 0


COMMANDS = {"check": cmd_check, "simulate": cmd_simulate, "table": cmd_table, "stats": cmd_stats, "demo": cmd_demo}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SimmaError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
