"""Command-line entry point: ``tipdecomp <command> --graph PATH [options]``."""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys
from typing import Sequence

from . import harness
from .baselines import MEASURES
from .decomp import tip_decomp, verify_decomposition
from .errors import TipDecompError
from .exact import build_seed_ip, export_lp, min_seed_bruteforce, solve_seed_ip_small
from .tipping import compute_thresholds

log = logging.getLogger("tipdecomp")


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _common(graph_required: bool = True) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--graph", action="append", required=graph_required, metavar="PATH",
                   help="edge-list file (repeat for the structure command)")
    p.add_argument("--symmetrize", action="store_true", help="add the reverse of every edge")
    th = p.add_mutually_exclusive_group()
    th.add_argument("--threshold-int", type=int, metavar="K", help="k_i = min(d_in, K)")
    th.add_argument("--threshold-frac", type=float, metavar="F", help="k_i = ceil(F * d_in)")
    th.add_argument("--int-sweep", action="store_true", help="K = 1..10")
    th.add_argument("--frac-sweep", action="store_true", help="F = 0.05..0.60 step 0.05")
    p.add_argument("--seed", type=int, default=0, help="rng seed")
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tipdecomp", description="Seed sets for the deterministic tipping model.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    sub.add_parser("decomp", parents=[common], help="run the decomposition heuristic")

    p = sub.add_parser("exact", parents=[common], help="exact minimum seed set (small graphs)")
    p.add_argument("--method", choices=("bruteforce", "ip"), default="bruteforce")
    p.add_argument("--node-limit", type=int, default=None)

    sub.add_parser("ip-export", parents=[common], help="write the integer program in LP format")

    p = sub.add_parser("sweep", parents=[common], help="seed size across threshold settings")
    p.add_argument("--algorithms", default="decomp",
                   help=f"comma list from: {', '.join(harness.ALGORITHMS)}")
    p.add_argument("--lp-dir", help="directory for ip-export LP files")

    p = sub.add_parser("removal", parents=[common], help="remove top-degree nodes, then decompose")
    p.add_argument("--fractions", type=_floats, default=list(harness.REMOVAL_FRACTIONS))

    p = sub.add_parser("speed", parents=[common], help="activation speed and critical mass")
    p.add_argument("--trace-dir", help="directory for per-setting trace CSVs")

    p = sub.add_parser("baselines", parents=[common], help="compare with centrality seeding")
    p.add_argument("--measures", default=",".join(MEASURES))
    p.add_argument("--bruteforce", action="store_true", help="also report the exact optimum")

    sub.add_parser("structure", parents=[common], help="clustering, Louvain modularity, planar fit")

    p = sub.add_parser("scaling", parents=[_common(graph_required=False)], help="runtime vs m ln n")
    p.add_argument("--sizes", type=_ints, default=[2000, 5000, 10000, 20000, 50000])
    p.add_argument("--avg-degree", type=float, default=10.0)
    p.add_argument("--repeats", type=int, default=3)
    return parser


def _threshold(args, default: str = "int-sweep") -> tuple[str, float | None]:
    if args.threshold_int is not None:
        return "int", args.threshold_int
    if args.threshold_frac is not None:
        return "frac", args.threshold_frac
    if args.int_sweep:
        return "int-sweep", None
    if args.frac_sweep:
        return "frac-sweep", None
    return default, None


def _config(args, graph_path: str | None, **extra) -> harness.TrialConfig:
    mode, value = _threshold(args, extra.pop("default_mode", "int-sweep"))
    if mode == "int" and value is None:
        value = 2  # threshold used by the removal and speed experiments
    return harness.TrialConfig(
        graph_path=graph_path,
        symmetrize=args.symmetrize,
        threshold_mode=mode,
        threshold_value=value,
        rng_seed=args.seed,
        **extra,
    )


@contextlib.contextmanager
def _sink(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _single_spec(args):
    cfg = _config(args, args.graph[0], default_mode="int")
    settings = harness.threshold_settings(cfg)
    if len(settings) != 1:
        raise ValueError(f"{args.command} takes a single threshold (--threshold-int or --threshold-frac)")
    return cfg.load_graph(), settings[0][2]


def run(args) -> int:
    cmd = args.command
    if cmd in ("decomp", "exact", "ip-export"):
        g, spec = _single_spec(args)
        if cmd == "ip-export":
            with _sink(args.out) as fh:
                export_lp(build_seed_ip(g, spec), fh)
            return 0
        ka = compute_thresholds(g, spec)
        if cmd == "decomp":
            result = tip_decomp(g, ka)
            if not verify_decomposition(g, ka, result):
                raise AssertionError("decomposition certificate failed")
            with _sink(args.out) as fh:
                if args.format == "json":
                    fh.write(result.to_json(g, indent=2) + "\n")
                else:
                    result.write_summary_csv(fh, args.graph[0], g)
            return 0
        if args.method == "bruteforce":
            seed = min_seed_bruteforce(g, ka, node_limit=args.node_limit or 20)
        else:
            seed = solve_seed_ip_small(g, spec, node_limit=args.node_limit or 12)
        with _sink(args.out) as fh:
            payload = {"method": args.method, "seed": [g.label(i) for i in sorted(seed)], "seed_size": len(seed)}
            fh.write(json.dumps(payload, indent=2) + "\n")
        return 0

    if cmd == "structure":
        summaries = [harness.structure_summary(_config(args, path)) for path in args.graph]
        out: dict = {"networks": summaries}
        if len(summaries) >= 3:
            out["fit"] = json.loads(harness.fit_structure(summaries).to_json())
        with _sink(args.out) as fh:
            fh.write(json.dumps(out, indent=2) + "\n")
        return 0

    if cmd == "scaling":
        cfg = _config(args, None, default_mode="int", scaling_sizes=args.sizes,
                      scaling_degree=args.avg_degree, scaling_repeats=args.repeats)
        records, fit = harness.run_runtime_scaling(cfg)
        with _sink(args.out) as fh:
            harness.write_records(records, fh, args.format)
        if fit is None:
            print("fit refused: at least 3 sizes are required", file=sys.stderr)
        else:
            print(f"runtime_ms = {fit.slope:.6g} * m ln n + {fit.intercept:.6g}  (R^2 = {fit.r_squared:.4f})",
                  file=sys.stderr)
        return 0

    records: list[harness.TrialRecord] = []
    for path in args.graph:
        if cmd == "sweep":
            cfg = _config(args, path, algorithms=_split(args.algorithms), lp_dir=args.lp_dir)
            records += harness.run_threshold_sweep(cfg)
        elif cmd == "removal":
            cfg = _config(args, path, default_mode="int", removal_fractions=args.fractions)
            records += harness.run_degree_removal(cfg)
        elif cmd == "speed":
            cfg = _config(args, path, default_mode="int", trace_dir=args.trace_dir)
            records += harness.run_activation_speed(cfg)
        elif cmd == "baselines":
            algos = ("decomp", "bruteforce") if args.bruteforce else ("decomp",)
            cfg = _config(args, path, measures=_split(args.measures), algorithms=algos)
            records += harness.compare_baselines(cfg)
    with _sink(args.out) as fh:
        harness.write_records(records, fh, args.format)
    return 0


def _split(text: str) -> tuple[str, ...]:
    return tuple(t.strip() for t in text.split(",") if t.strip())


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(args)
    except (TipDecompError, ValueError, OSError) as exc:
        print(f"tipdecomp {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
