"""Command-line interface.

Each subcommand writes one table (CSV or JSON) preceded by ``#`` lines that
echo the full configuration.  Wall-clock timings go to standard error so that
the table itself is byte-identical for identical configurations, whatever
the number of workers.

Exit status: 0 on success, 1 when a self-check fails, 2 on a configuration
error, 3 on a domain error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import secrets
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import checks, combinatorics, estimators, exact
from .dist import Dirac, parse_dist
from .env import Environment
from .errors import ConfigError, DomainError, FPPError

COLUMNS = {
    "lambda": "v,n,m,model,mean,stderr,lower_bound,seed,replica_first,replica_last",
    "shape": "theta,radius,radius_stderr,x,y,chord_slack,chord_slack_stderr,seed,replica_first,replica_last",
    "turns": "v,n,x,upper_stat,upper_stderr,lower_stat,lower_stderr,fd_plus,fd_plus_stderr,fd_minus,"
             "fd_minus_stderr,up_minus_down,up_minus_down_stderr,upper_holds,lower_holds,seed,replica_first,replica_last",
    "shear": "v,x,sign,n,mean_B,stderr_B,target,stderr_target,combined_stderr,agrees,seed,replica_first,replica_last",
    "exact-dir": "lambda0,kappa,p,v,lambda",
    "flat-edge": "has_atom,onset_v,test_v,n,excess,excess_stderr,verdict,seed,replica_first,replica_last",
    "tails": "kind,n,k,right,left,length,lambda_ref,seed,replica_first,replica_last",
    "count": "M,k,exact_sum,at_most,alt_closed_form",
    "count-paths": "n,C,bound,enumerated",
    "oracle-check": "battery,instances,matched,seed",
}

HELP = {
    "lambda": "time-constant estimates over v x n (common random numbers across v)",
    "shape": "limit-shape boundary samples in the first quadrant",
    "turns": "turn ratios of geodesics against finite-difference slopes",
    "shear": "sheared passage times against direct estimates",
    "exact-dir": "closed-form time constant of the directed two-point model",
    "flat-edge": "statistical flat-edge classification",
    "tails": "exceedance frequencies and log-rate slopes",
    "count": "jump-tuple counts (or path-count bounds with --paths)",
    "oracle-check": "solver and shear identities against exhaustive search",
}


def _floats(text: str) -> tuple:
    try:
        return tuple(float(a) for a in text.split(",") if a.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc


def _ints(text: str) -> tuple:
    try:
        return tuple(int(a) for a in text.split(",") if a.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from exc


def _fmt_list(xs) -> str:
    return ",".join(repr(x) if isinstance(x, float) else str(x) for x in xs)


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    dist: str = "twopoint:1,3,0.5"
    v: tuple = (0.0,)
    n: tuple = (1000,)
    replicas: int = 50
    seed: int | None = None
    workers: int = 1
    format: str = "csv"
    out: str | None = None
    significance_k: float = 3.0
    model: str = "semidirected"
    x: float = 0.2
    sign: int = 1
    eps: float = 0.3
    thetas: int = 9
    margin: float = 1.0
    lambda0: float = 0.0
    kappa: float = 1.0
    p: float = 0.5
    M: int = 8
    k: int = 8
    paths: bool = False
    C: float = 1.0
    instances: int = 1000

    def to_argv(self) -> list:
        """Arguments that parse back to this configuration."""
        argv = [self.command]
        for f in dataclasses.fields(self):
            if f.name in ("command", "workers"):
                continue
            val = getattr(self, f.name)
            if val is None:
                continue
            flag = "--" + f.name.replace("_", "-")
            if isinstance(val, bool):
                if val:
                    argv.append(flag)
            elif isinstance(val, tuple):
                argv += [flag, _fmt_list(val)]
            else:
                argv += [flag, repr(val) if isinstance(val, float) else str(val)]
        argv += ["--workers", str(self.workers)]
        return argv

    def echo(self) -> list:
        """Configuration lines for the output header (worker count excluded)."""
        return [f"{f.name}={getattr(self, f.name)!r}" for f in dataclasses.fields(self) if f.name != "workers"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="unitfpp", description="First passage percolation with unit vertical weights.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    d = ExperimentConfig
    for name, text in HELP.items():
        cols = COLUMNS[name] + (f"; with --paths: {COLUMNS['count-paths']}" if name == "count" else "")
        sp = sub.add_parser(name, help=text, description=f"{text}. CSV columns: {cols}")
        sp.add_argument("--dist", default=d.dist, help="law spec, e.g. dirac:1, twopoint:1,3,0.5, uniform:1,2, "
                                                       "exp:1, empirical:FILE.csv")
        sp.add_argument("--v", type=_floats, default=d.v, help="comma-separated slopes")
        sp.add_argument("--n", type=_ints, default=d.n, help="comma-separated column counts")
        sp.add_argument("--replicas", type=int, default=d.replicas)
        sp.add_argument("--seed", type=int, default=None, help="master seed; generated and echoed if omitted")
        sp.add_argument("--workers", type=int, default=d.workers)
        sp.add_argument("--format", choices=("csv", "json"), default=d.format)
        sp.add_argument("--out", default=None, help="output path (default: stdout)")
        sp.add_argument("--significance-k", type=float, default=d.significance_k)
        sp.add_argument("--model", choices=estimators.MODELS, default=d.model)
        sp.add_argument("--x", type=float, default=d.x, help="finite-difference step or shear intensity")
        sp.add_argument("--sign", type=int, choices=(1, -1), default=d.sign)
        sp.add_argument("--eps", type=float, default=d.eps)
        sp.add_argument("--thetas", type=int, default=d.thetas, help="number of angles in [0, pi/2)")
        sp.add_argument("--margin", type=float, default=d.margin, help="flat-edge test offset past the onset")
        sp.add_argument("--lambda0", type=float, default=d.lambda0)
        sp.add_argument("--kappa", type=float, default=d.kappa)
        sp.add_argument("--p", type=float, default=d.p)
        sp.add_argument("--M", type=int, default=d.M)
        sp.add_argument("--k", type=int, default=d.k)
        sp.add_argument("--paths", action="store_true", help="count: path-count bound instead of tuples")
        sp.add_argument("--C", type=float, default=d.C)
        sp.add_argument("--instances", type=int, default=d.instances)
    return parser


def parse_config(argv) -> ExperimentConfig:
    ns = build_parser().parse_args(argv)
    kwargs = {f.name: getattr(ns, f.name) for f in dataclasses.fields(ExperimentConfig)}
    cfg = ExperimentConfig(**kwargs)
    if cfg.replicas < 1 or cfg.workers < 1 or cfg.instances < 0:
        raise ConfigError("replicas and workers must be positive")
    return cfg


# --------------------------------------------------------------- subcommands

def _rep_cols(cfg):
    return [cfg.seed, 0, cfg.replicas - 1]


def _cmd_lambda(cfg, dist):
    rows = []
    for n in cfg.n:
        for e in estimators.estimate_lambda_sweep(dist, cfg.v, n, cfg.replicas, cfg.seed, cfg.model, cfg.workers):
            rows.append([e.v, n, e.m, e.model, e.mean, e.stderr, e.lower_bound_pathwise, *_rep_cols(cfg)])
    return rows, 0, ["common_random_numbers=True"]


def _cmd_shape(cfg, dist):
    grid = np.linspace(0.0, math.pi / 2, cfg.thetas + 1)[:-1]
    c = estimators.limit_shape_curve(dist, cfg.n[0], cfg.replicas, grid, cfg.seed, cfg.workers)
    rows = [[th, r, se, x, y, s, sse, *_rep_cols(cfg)]
            for (th, r, se, x, y), s, sse in zip(c.rows(), c.chord_slack, c.chord_slack_stderr)]
    return rows, 0, ["common_random_numbers=True", "closure=reflect rows through both axes"]


def _cmd_turns(cfg, dist):
    rows = []
    for v in cfg.v:
        r = estimators.derivative_bounds_report(dist, v, cfg.x, cfg.n[0], cfg.replicas, cfg.seed,
                                                cfg.significance_k, cfg.workers)
        rows.append([r.v, r.n, r.x, r.upper_stat, r.upper_stderr, r.lower_stat, r.lower_stderr, r.fd_plus,
                     r.fd_plus_stderr, r.fd_minus, r.fd_minus_stderr, r.up_minus_down, r.up_minus_down_stderr,
                     r.upper_holds, r.lower_holds, *_rep_cols(cfg)])
    return rows, 0, []


def _cmd_shear(cfg, dist):
    rows = []
    for v in cfg.v:
        s = estimators.sheared_lambda_check(dist, v, cfg.x, cfg.n[0], cfg.replicas, cfg.seed, cfg.sign,
                                            cfg.significance_k, cfg.workers)
        rows.append([s.v, s.x, s.sign, s.n, s.mean_B_over_n, s.stderr_B, s.target, s.stderr_target,
                     s.combined_stderr, s.agrees, *_rep_cols(cfg)])
    return rows, 0, []


def _cmd_exact(cfg, dist):
    rows = [[cfg.lambda0, cfg.kappa, cfg.p, v, exact.exact_lambda_directed_twopoint(cfg.lambda0, cfg.kappa, cfg.p, v)]
            for v in cfg.v]
    return rows, 0, []


def _cmd_flat(cfg, dist):
    r = estimators.classify_flat_edge(dist, cfg.margin, cfg.n[0], cfg.replicas, cfg.seed, cfg.significance_k,
                                      cfg.v, cfg.workers)
    rows = [[r.has_atom, r.onset_v, tv, cfg.n[0], e, se, r.verdict, *_rep_cols(cfg)]
            for tv, e, se in zip(r.test_v, r.excess, r.excess_stderr)]
    return rows, 0, ["verdicts are statistical consistency checks at finite n"]


def _cmd_tails(cfg, dist):
    t = estimators.tail_estimates(dist, cfg.v[0], cfg.n, cfg.eps, cfg.replicas, cfg.seed, workers=cfg.workers)
    rc = _rep_cols(cfg)
    rows = [["freq", r.n, "", r.right_freq, r.left_freq, r.length_freq, r.lambda_ref, *rc] for r in t.rows]
    rows.append(["slope", "", "", t.right_slope, t.left_slope, t.length_slope, t.rows[0].lambda_ref, *rc])
    rows += [["fixed_tail", t.fixed_target[0], k, p, "", "", "", *rc] for k, p in zip(t.fixed_ks, t.fixed_tail)]
    rows.append(["fixed_slope", t.fixed_target[0], "", t.fixed_slope, "", "", "", *rc])
    return rows, 0, [f"fixed_target={t.fixed_target}", "slopes fit log((count+1/2)/(replicas+1)) against n"]


def _cmd_count(cfg, dist):
    if cfg.paths:
        rows = []
        env = Environment(cfg.seed, 0, dist)
        for n in cfg.n:
            bound = combinatorics.count_paths_bound(n, cfg.C)
            enum = combinatorics.count_paths_within(env, n, 0, cfg.C * max(n, 1)) if n <= 6 else ""
            rows.append([n, cfg.C, bound, enum])
        return rows, 0, ["enumerated: paths from the origin to (n, 0) with time <= C max(n, 1)"]
    tab = combinatorics.jump_tuple_table(cfg.M, cfg.k)
    return tab.tolist(), 0, ["alt_closed_form: a mixed closed form that matches neither count (9 vs 8 and 13 at M = k = 2)"]


def _cmd_oracle(cfg, dist):
    reports = [checks.oracle_battery(cfg.instances, cfg.seed), checks.shear_identity_battery(cfg.instances, cfg.seed)]
    rows = [[r.name, r.total, r.matched, cfg.seed] for r in reports]
    for r in reports:
        print(str(r), file=sys.stderr)
    status = 0 if all(r.ok for r in reports) else 1
    return rows, status, [f"{reports[0].matched}/{reports[0].total} matched"]


COMMANDS = {
    "lambda": _cmd_lambda, "shape": _cmd_shape, "turns": _cmd_turns, "shear": _cmd_shear,
    "exact-dir": _cmd_exact, "flat-edge": _cmd_flat, "tails": _cmd_tails, "count": _cmd_count,
    "oracle-check": _cmd_oracle,
}


def _cell(x):
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return "" if x is None else str(x)


def render(cfg: ExperimentConfig, rows, notes) -> str:
    cols = COLUMNS["count-paths" if cfg.command == "count" and cfg.paths else cfg.command].split(",")
    buf = io.StringIO()
    if cfg.format == "csv":
        for line in cfg.echo() + notes:
            buf.write(f"# {line}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        w.writerows([[_cell(c) for c in r] for r in rows])
    else:
        def plain(x):
            if isinstance(x, (np.integer,)):
                return int(x)
            if isinstance(x, (np.floating,)):
                return float(x)
            if isinstance(x, np.bool_):
                return bool(x)
            return x
        doc = {"config": {k: v for k, v in dataclasses.asdict(cfg).items() if k != "workers"}, "notes": notes,
               "rows": [dict(zip(cols, map(plain, r))) for r in rows]}
        buf.write(json.dumps(doc, indent=2, allow_nan=True) + "\n")
    return buf.getvalue()


def run(cfg: ExperimentConfig) -> int:
    if cfg.seed is None:
        cfg = dataclasses.replace(cfg, seed=secrets.randbits(32))
    dist = Dirac(1.0) if cfg.command in ("exact-dir",) else parse_dist(cfg.dist)
    start = time.perf_counter()
    rows, status, notes = COMMANDS[cfg.command](cfg, dist)
    text = render(cfg, rows, notes)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"# wall_clock_seconds={time.perf_counter() - start:.3f} seed={cfg.seed} "
          f"replicas=0..{cfg.replicas - 1}", file=sys.stderr)
    return status


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        return run(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except FPPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
