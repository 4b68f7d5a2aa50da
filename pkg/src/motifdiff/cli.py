"""Command-line interface.

One executable, five subcommands: count, gen-data, sample, eval, verify.
Machine-readable JSON goes to stdout (or --out); human summaries go to
stderr. Every report embeds its resolved configuration, minus anything
(like thread counts) that does not affect the output bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from functools import partial

import numpy as np

from .counting import CountDistribution, count_subgraphs
from .dataio import read_dataset, write_dataset
from .datagen import plant_pattern_dataset
from .diffusion import NoiseSchedule, ScoreConfig, ScoreOracle
from .errors import InputError, MotifdiffError
from .evaluation import evaluate
from .graphs import Dataset, Graph
from .parallel import ordered_map
from .patterns import PATTERN_NAMES, get_pattern, resolve_patterns
from .schemas import (COUNT_REPORT, EVAL_REPORT, SUITE_REPORT,
                      TRAJECTORY_LINE, VERIFY_REPORT, validate_output)
from .verification import SUITE_NAMES, run_suite


def _default_threads() -> int:
    env = os.environ.get("MOTIFDIFF_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"MOTIFDIFF_THREADS={env!r} is not an integer") from None
    return os.cpu_count() or 1


def _emit(obj, out_path: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _split_names(raw: str) -> list[str]:
    names = [s.strip() for s in raw.split(",") if s.strip()]
    if not names:
        raise InputError("pattern list is empty")
    return names


# ---------------------------------------------------------------------------
# subcommands


def cmd_count(args) -> int:
    ds = read_dataset(args.infile)
    patterns = resolve_patterns(_split_names(args.patterns))
    report: dict = {
        "config": {"input": args.infile,
                   "patterns": ",".join(p.name for p in patterns)},
        "n_graphs": len(ds),
        "patterns": {},
    }
    for p in patterns:
        values = ordered_map(partial(count_subgraphs, p=p), ds.graphs,
                             threads=args.threads)
        dist = CountDistribution.from_counts(values)
        report["patterns"][p.name] = {
            "per_graph": [int(v) for v in values],
            "histogram": dist.to_json_dict(),
        }
    validate_output(report, COUNT_REPORT)
    _emit(report, args.out)
    print(f"counted {len(patterns)} pattern(s) over {len(ds)} graph(s)",
          file=sys.stderr)
    return 0


def cmd_gen_data(args) -> int:
    pattern = get_pattern(args.pattern)
    monitors = tuple(resolve_patterns(_split_names(args.monitor))) if args.monitor else ()
    ds = plant_pattern_dataset(pattern, args.n, args.count,
                               decoration=args.decoration, seed=args.seed,
                               monitors=monitors,
                               max_retries=args.max_retries)
    write_dataset(ds, args.out)
    print(f"wrote {len(ds)} graph(s) with one {pattern.name} each to {args.out}",
          file=sys.stderr)
    return 0


def _run_sample_chunk(payload) -> list:
    (dataset, n, cfg, sched, steps, mode, threshold, seed, indices,
     want_traj) = payload
    oracle = ScoreOracle(dataset, n, cfg=cfg, sched=sched)
    out = []
    for idx in indices:
        rng = np.random.default_rng([seed, idx])
        traj: list | None = [] if want_traj else None
        g = oracle.reverse_sample(steps, score_mode=mode, rng=rng,
                                  threshold=threshold, trajectory=traj)
        packed = None
        if want_traj:
            packed = [(float(t), W.tolist()) for t, W in traj]
        out.append((idx, g.n, g.edge_list, packed))
    return out


def cmd_sample(args) -> int:
    train = read_dataset(args.train)
    if args.num_samples < 1:
        raise InputError("--num-samples must be at least 1")
    sched = NoiseSchedule(beta_min=args.beta_min, beta_max=args.beta_max,
                          t_min=args.t_min, t_max=args.t_max)
    cfg = ScoreConfig(perm_policy=args.perm_policy,
                      mc_samples=args.mc_samples, seed=args.seed,
                      truncation_k=args.series_k,
                      series_ratio_max=args.series_ratio_max)
    n = args.n
    if n is None:
        sizes = {g.n for g in train.graphs}
        if len(sizes) != 1:
            raise InputError(
                f"training set mixes node counts {sorted(sizes)}; pass --n")
        n = sizes.pop()
    indices = list(range(args.num_samples))
    n_chunks = max(1, min(args.threads, len(indices)))
    chunks = [indices[i::n_chunks] for i in range(n_chunks)]
    want_traj = args.trajectories is not None
    payloads = [(train, n, cfg, sched, args.steps, args.score,
                 args.threshold, args.seed, tuple(chunk), want_traj)
                for chunk in chunks if chunk]
    results: list = []
    pool_size = len(payloads) if args.threads > 1 else 1
    for chunk_out in ordered_map(_run_sample_chunk, payloads, threads=pool_size):
        results.extend(chunk_out)
    results.sort(key=lambda item: item[0])
    graphs = tuple(Graph.from_edges(gn, edges) for _, gn, edges, _ in results)
    metadata = {
        "generator": "reverse-diffusion",
        "train": str(args.train),
        "n": str(n),
        "num_samples": str(args.num_samples),
        "steps": str(args.steps),
        "score": args.score,
        "seed": str(args.seed),
        "beta_min": str(args.beta_min),
        "beta_max": str(args.beta_max),
        "t_min": str(args.t_min),
        "t_max": str(args.t_max),
        "perm_policy": args.perm_policy,
        "mc_samples": str(args.mc_samples),
        "series_k": str(args.series_k),
        "threshold": str(args.threshold),
    }
    write_dataset(Dataset(graphs=graphs, metadata=metadata), args.out)
    if want_traj:
        with open(args.trajectories, "w", encoding="utf-8") as fh:
            for idx, _, _, packed in results:
                for t, W in packed:
                    line = {"sample": idx, "t": t, "W": W}
                    validate_output(line, TRAJECTORY_LINE)
                    fh.write(json.dumps(line, sort_keys=True) + "\n")
    print(f"wrote {len(graphs)} sample(s) to {args.out}", file=sys.stderr)
    return 0


def cmd_eval(args) -> int:
    train = read_dataset(args.train)
    gen = read_dataset(args.gen)
    names = _split_names(args.patterns)
    patterns = resolve_patterns(names)
    report = evaluate(train, gen, patterns, novelty_mode=args.novelty_mode,
                      threads=args.threads)
    payload = report.to_json_dict()
    payload["config"]["train"] = str(args.train)
    payload["config"]["gen"] = str(args.gen)
    validate_output(payload, EVAL_REPORT)
    _emit(payload, args.out)
    worst = max((pe["tv"] for pe in payload["patterns"].values()), default=0.0)
    print(f"evaluated {len(patterns)} pattern(s); worst tv {worst:.4f};"
          f" novelty {report.novelty:.4f}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    overrides: dict = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.tolerance is not None:
        overrides["tolerance"] = args.tolerance
    if args.trials is not None:
        overrides["trials"] = args.trials

    def with_size(suite: str) -> dict:
        extra = dict(overrides)
        if suite == "count-identity":
            extra.pop("tolerance", None)
            if args.n is not None:
                extra["n_max"] = args.n
        elif suite == "basis":
            extra.pop("trials", None)
            if args.n is not None:
                extra["n_values"] = (args.n,)
            if args.k is not None:
                extra["orders"] = tuple(range(args.k + 1))
        elif suite == "series":
            if args.k is not None:
                extra["order"] = args.k
        elif suite == "equivariance":
            if args.n is not None:
                extra["n_values"] = (args.n,)
        elif suite == "finitediff":
            extra.pop("trials", None)
        return extra

    if args.suite == "all":
        suites = [run_suite(name, **with_size(name)) for name in SUITE_NAMES]
    else:
        suites = [run_suite(args.suite, **with_size(args.suite))]
    report = {"suites": suites, "passed": all(s["passed"] for s in suites)}
    for s in suites:
        validate_output(s, SUITE_REPORT)
    validate_output(report, VERIFY_REPORT)
    _emit(report, args.out)
    for s in suites:
        status = "ok" if s["passed"] else "FAIL"
        print(f"{s['suite']}: {status} ({s['checks']} checks,"
              f" max error {s['max_error']:.3g}, tolerance {s['tolerance']:.3g})",
              file=sys.stderr)
    return 0 if report["passed"] else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="motifdiff",
        description="Subgraph-count evaluation for graph generative models,"
                    " with an exact-score graph-diffusion testbed.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_threads(p):
        p.add_argument("--threads", type=int, default=_default_threads(),
                       help="worker processes (default: MOTIFDIFF_THREADS or"
                            " all cores); never affects output bytes")

    def add_out(p, required=False):
        p.add_argument("--out", required=required,
                       help="output path" + ("" if required else
                                             " (default: stdout)"))

    p_count = sub.add_parser("count", help="count patterns over a dataset")
    p_count.add_argument("--in", dest="infile", required=True,
                         help="dataset JSONL path")
    p_count.add_argument("--patterns", required=True,
                         help=f"comma-separated names from: {', '.join(PATTERN_NAMES)}")
    add_threads(p_count)
    add_out(p_count)
    p_count.set_defaults(func=cmd_count)

    p_gen = sub.add_parser("gen-data",
                           help="plant one pattern occurrence per graph")
    p_gen.add_argument("--pattern", required=True)
    p_gen.add_argument("--n", type=int, required=True, help="nodes per graph")
    p_gen.add_argument("--count", type=int, required=True,
                       help="number of graphs")
    p_gen.add_argument("--decoration", choices=("none", "tree"),
                       default="tree",
                       help="how the non-pattern nodes attach (default tree)")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--monitor", default=None,
                       help="comma-separated extra patterns whose counts must"
                            " match the bare pattern's")
    p_gen.add_argument("--max-retries", type=int, default=1000)
    add_out(p_gen, required=True)
    p_gen.set_defaults(func=cmd_gen_data)

    p_sample = sub.add_parser("sample",
                              help="reverse-diffusion samples from the exact score")
    p_sample.add_argument("--train", required=True, help="training JSONL path")
    p_sample.add_argument("--n", type=int, default=None,
                          help="node count (default: the training set's)")
    p_sample.add_argument("--num-samples", type=int, required=True)
    p_sample.add_argument("--steps", type=int, default=500)
    p_sample.add_argument("--score", choices=("direct", "series"),
                          default="direct")
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("--beta-min", type=float, default=0.1)
    p_sample.add_argument("--beta-max", type=float, default=20.0)
    p_sample.add_argument("--t-min", type=float, default=1e-3)
    p_sample.add_argument("--t-max", type=float, default=1.0)
    p_sample.add_argument("--perm-policy",
                          choices=("auto", "exhaustive", "monte_carlo"),
                          default="auto")
    p_sample.add_argument("--mc-samples", type=int, default=10000)
    p_sample.add_argument("--series-k", type=int, default=12,
                          help="series truncation order (series mode)")
    p_sample.add_argument("--series-ratio-max", type=float, default=3.0)
    p_sample.add_argument("--threshold", type=float, default=0.5)
    p_sample.add_argument("--trajectories", default=None,
                          help="optional JSONL path for per-step states")
    add_threads(p_sample)
    add_out(p_sample, required=True)
    p_sample.set_defaults(func=cmd_sample)

    p_eval = sub.add_parser("eval",
                            help="TV distances and novelty between two datasets")
    p_eval.add_argument("--train", required=True)
    p_eval.add_argument("--gen", required=True)
    p_eval.add_argument("--patterns", default=",".join(PATTERN_NAMES))
    p_eval.add_argument("--novelty-mode", choices=("isomorphism", "size"),
                        default="isomorphism")
    add_threads(p_eval)
    add_out(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_verify = sub.add_parser("verify", help="numerical self-check suites")
    p_verify.add_argument("--suite", choices=SUITE_NAMES + ("all",),
                          required=True)
    p_verify.add_argument("--n", type=int, default=None)
    p_verify.add_argument("--k", type=int, default=None)
    p_verify.add_argument("--trials", type=int, default=None)
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--tolerance", type=float, default=None)
    add_out(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except MotifdiffError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
