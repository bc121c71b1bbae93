"""Command-line entry point: ``hittingtime <command> ...``.

Every command writes its primary output (CSV, or JSON with ``--json``)
plus ``manifest.json`` into ``--out``. Exit codes: 0 ok, 1 other error,
2 usage or parse error, 3 disconnected graph, 4 bad target or source,
5 solver did not converge (partial output is still written).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import detect_split, hitting_table, pairwise_distances, sorted_curve
from .errors import (
    GraphError,
    GraphNotConnected,
    HittingTimeError,
    TargetInSources,
    TargetOutOfRange,
)
from .graph import (
    clique_plus_pendant,
    planted_two_community,
    read_edge_list,
    write_edge_list,
)
from .montecarlo import DEFAULT_STEP_CAP, simulate
from .reduction import reduce
from .solver import DEFAULT_EPS, DEFAULT_MAX_ITERS

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_DISCONNECTED = 3
EXIT_BAD_TARGET = 4
EXIT_NOT_CONVERGED = 5

MANIFEST = "manifest.json"


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.17g" % x


class Run:
    """Collects outputs and per-phase wall times for one command."""

    def __init__(self, args):
        self.args = args
        self.out = Path(args.out)
        self.out.mkdir(parents=True, exist_ok=True)
        self.phases = {}
        self.outputs = []
        self.extra = {}

    @contextmanager
    def phase(self, name):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.phases[name] = time.perf_counter() - t0

    def table(self, name, header, rows):
        """Write rows as ``name.csv`` or, with ``--json``, ``name.json``."""
        rows = list(rows)
        if self.args.json:
            path = self.out / f"{name}.json"
            records = [dict(zip(header, row)) for row in rows]
            path.write_text(json.dumps(records, indent=1, default=_jsonable) + "\n")
        else:
            path = self.out / f"{name}.csv"
            lines = [",".join(header)] + [",".join(fmt(v) for v in row) for row in rows]
            path.write_text("\n".join(lines) + "\n")
        self.outputs.append(path.name)
        return path

    def manifest(self, exit_code):
        a = self.args
        params = {k: v for k, v in vars(a).items() if k not in ("func", "out")}
        doc = {
            "command": a.command,
            "params": params,
            "seed": getattr(a, "seed", None),
            "eps": getattr(a, "eps", None),
            "max_iters": getattr(a, "max_iters", None),
            "input": _digest(a.graph) if getattr(a, "graph", None) else None,
            "tool_version": __version__,
            "phases": self.phases,
            "outputs": self.outputs,
            "exit_code": exit_code,
        }
        doc.update(self.extra)
        (self.out / MANIFEST).write_text(json.dumps(doc, indent=1, default=_jsonable) + "\n")


def _jsonable(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, (set, frozenset, tuple)):
        return sorted(x)
    raise TypeError(f"not serialisable: {type(x)}")


def _digest(path) -> dict:
    data = Path(path).read_bytes()
    return {"path": str(Path(path).resolve()), "sha256": hashlib.sha256(data).hexdigest()}


def _load(args):
    return read_edge_list(args.graph)


def cmd_hit(args, run):
    g = _load(args)
    with run.phase("solve"):
        table = hitting_table(g, args.target, args.eps, args.max_iters, args.threads)
    run.table("hit", ("node", "mean", "variance"),
              zip(table.nodes, table.mean, table.variance))
    if table.solve is not None:
        run.extra["iterations_used"] = table.solve.iterations_used
        run.extra["residual"] = table.solve.residual
    run.extra["converged"] = table.converged
    return EXIT_OK if table.converged else EXIT_NOT_CONVERGED


def _sources(args, g):
    if args.sources:
        return args.sources
    return [v for v in range(g.node_count) if v != args.target]


def cmd_simulate(args, run):
    g = _load(args)
    with run.phase("montecarlo"):
        stats = simulate(g, args.target, _sources(args, g), args.walks, args.seed,
                         args.step_cap, threads=args.threads)
    run.table("simulate", ("source", "sample_mean", "sample_variance", "std_error", "walks"),
              stats.rows())
    run.extra["capped_walks"] = stats.capped_walks
    return EXIT_OK


def cmd_compare(args, run):
    g = _load(args)
    with run.phase("analytic"):
        table = hitting_table(g, args.target, args.eps, args.max_iters, args.threads)
    sources = _sources(args, g)
    with run.phase("montecarlo"):
        stats = simulate(g, args.target, sources, args.walks, args.seed,
                         args.step_cap, threads=args.threads)
    rows = []
    for i, s in enumerate(stats.sources):
        mean = table.mean_of(s)
        var = float(table.variance[table.nodes.index(s)])
        diff = stats.sample_mean[i] - mean
        se = stats.std_error[i]
        if se > 0:
            delta = diff / se
        else:
            delta = 0.0 if diff == 0 else math.copysign(math.inf, diff)
        rows.append((s, mean, var, stats.sample_mean[i], stats.sample_variance[i],
                     se, delta))
    run.table("compare", ("source", "analytic_mean", "analytic_variance", "sample_mean",
                          "sample_variance", "std_error", "delta_sigma"), rows)
    ratio = run.phases["montecarlo"] / max(run.phases["analytic"], 1e-12)
    run.extra.update(speedup=ratio, capped_walks=stats.capped_walks,
                     converged=table.converged,
                     max_abs_delta_sigma=max((abs(r[-1]) for r in rows), default=0.0))
    if table.solve is not None:
        run.extra["iterations_used"] = table.solve.iterations_used
    print(f"analytic {run.phases['analytic']:.3f}s  montecarlo "
          f"{run.phases['montecarlo']:.3f}s  ratio {ratio:.1f}")
    return EXIT_OK if table.converged else EXIT_NOT_CONVERGED


def cmd_generate(args, run):
    with run.phase("generate"):
        if args.kind == "planted":
            g = planted_two_community(args.n_per_side, args.p_in, args.p_out, args.seed)
            run.extra["final_seed"] = g.meta["seed"]
        else:
            g = clique_plus_pendant(args.clique_size, args.pendant_degree)
    path = run.out / "graph.txt"
    write_edge_list(g, path)
    run.outputs.append(path.name)
    run.extra.update(node_count=g.node_count, edge_count=g.edge_count)
    return EXIT_OK


def cmd_curve(args, run):
    g = _load(args)
    with run.phase("solve"):
        curve = sorted_curve(g, args.target, args.eps, args.max_iters, args.threads)
    run.table("curve", ("rank", "node", "mean"),
              ((k, v, m) for k, (v, m) in enumerate(curve.entries)))
    return EXIT_OK


def cmd_split(args, run):
    g = _load(args)
    with run.phase("solve"):
        curve = sorted_curve(g, args.target, args.eps, args.max_iters, args.threads)
        split = detect_split(curve, args.min_group)
    upper = split.groups[1]
    run.table("split", ("node", "group"),
              ((v, int(v in upper)) for v in sorted(curve.nodes)))
    run.extra.update(boundary_index=split.boundary_index, gap_size=split.gap_size)
    return EXIT_OK


def cmd_distances(args, run):
    g = _load(args)
    nodes = args.nodes if args.nodes else list(range(g.node_count))
    with run.phase("solve"):
        report = pairwise_distances(g, nodes, args.eps, args.max_iters, args.threads)
    run.table("distances", ("u", "v", "d_uv", "d_vu", "ratio"), report.pairs)
    return EXIT_OK


def cmd_reduce(args, run):
    g = _load(args)
    r = reduce(g, args.target)
    if args.dump:
        path = run.out / "reduction.json"
        path.write_text(r.to_json(indent=1) + "\n")
        run.outputs.append(path.name)
    print(f"target {r.target}: {r.size} sources, adherents {list(r.adherents)}")
    return EXIT_OK


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _threads(text):
    return _positive_int(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hittingtime",
        description="Exact and simulated random-walk hitting times on graphs.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, target=True, solver=True):
        p.add_argument("--graph", required=True, help="edge-list file (u v [w])")
        if target:
            p.add_argument("--target", type=int, required=True)
        if solver:
            p.add_argument("--eps", type=_positive_float, default=DEFAULT_EPS)
            p.add_argument("--max-iters", type=_positive_int, default=DEFAULT_MAX_ITERS)
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--json", action="store_true", help="write JSON instead of CSV")
        p.add_argument("--threads", type=_threads, default=os.cpu_count())

    def walks(p):
        p.add_argument("--walks", type=_positive_int, required=True,
                       help="walks per source")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--sources", type=int, nargs="+",
                       help="start nodes (default: every non-target node)")
        p.add_argument("--step-cap", type=_positive_int, default=DEFAULT_STEP_CAP)

    p = sub.add_parser("hit", help="analytic mean and variance of hitting times")
    common(p)
    p.set_defaults(func=cmd_hit)

    p = sub.add_parser("simulate", help="Monte Carlo hitting-time estimates")
    common(p, solver=False)
    walks(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="analytic vs Monte Carlo, with timings")
    common(p)
    walks(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("generate", help="write a generated graph")
    p.add_argument("kind", choices=("planted", "clique-pendant"))
    p.add_argument("--n-per-side", type=_positive_int, default=50)
    p.add_argument("--p-in", type=float, default=0.3)
    p.add_argument("--p-out", type=float, default=0.02)
    p.add_argument("--clique-size", type=_positive_int, default=10)
    p.add_argument("--pendant-degree", type=_positive_int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("curve", help="non-target nodes sorted by hitting time")
    common(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("split", help="two-group split at the widest curve gap")
    common(p)
    p.add_argument("--min-group", type=_positive_int, default=1)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("distances", help="directional pairwise distances")
    common(p, target=False)
    p.add_argument("--nodes", type=int, nargs="+",
                   help="nodes to compare (default: all)")
    p.set_defaults(func=cmd_distances)

    p = sub.add_parser("reduce", help="inspect the target-reduced system")
    common(p, solver=False)
    p.add_argument("--dump", action="store_true", help="write reduction.json")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest")
    p.add_argument("--out", required=True)
    p.set_defaults(func=None)
    return parser


def _replay_args(parser, manifest_path, out):
    doc = json.loads(Path(manifest_path).read_text())
    params = dict(doc["params"])
    params["out"] = out
    recorded = doc.get("input")
    if recorded is not None:
        now = _digest(recorded["path"])
        if now["sha256"] != recorded["sha256"]:
            raise GraphError(f"{recorded['path']} changed since the recorded run")
    args = parser.parse_args([params.pop("command")] + _to_argv(params))
    return args


def _to_argv(params):
    argv = []
    kind = params.pop("kind", None)
    if kind is not None:
        argv.append(kind)
    for key, value in params.items():
        flag = "--" + key.replace("_", "-")
        if value is None or value is False:
            continue
        if value is True:
            argv.append(flag)
        elif isinstance(value, list):
            argv += [flag] + [str(v) for v in value]
        else:
            argv += [flag, repr(value) if isinstance(value, float) else str(value)]
    return argv


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "replay":
            args = _replay_args(parser, args.manifest, args.out)
        run = Run(args)
        code = args.func(args, run)
    except (GraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GraphNotConnected as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISCONNECTED
    except (TargetOutOfRange, TargetInSources) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_TARGET
    except HittingTimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    run.manifest(code)
    if code == EXIT_NOT_CONVERGED:
        print("warning: series did not converge within --max-iters", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
