"""Numerical self-checks, shared between the CLI `verify` subcommand and the
acceptance tests.

Each suite returns one JSON-ready dict with the same shape: suite name,
pass flag, number of checks, failure count, worst observed error, the
tolerance it was held to, and the resolved parameters. Failures carry a few
human-readable examples for debugging, never silently truncated results.
"""

from __future__ import annotations

import itertools

import numpy as np

from .counting import count_subgraphs
from .diffusion import (NoiseSchedule, ScoreConfig, ScoreOracle,
                        random_symmetric, permute_matrix,
                        verify_basis_expansion)
from .errors import InputError
from .graphs import Dataset, Graph, Pattern, automorphism_count
from .patterns import PATTERN_LIBRARY, derive_marked_patterns
from .polynomials import (equivariant_basis, invariant_basis,
                          invariant_monomial_sum)

SUITE_NAMES = ("count-identity", "finitediff", "series", "basis",
               "equivariance")


def _report(suite: str, checks: int, failures: list, max_error: float,
            tolerance: float, params: dict) -> dict:
    return {
        "suite": suite,
        "passed": not failures,
        "checks": checks,
        "failures": len(failures),
        "failure_examples": failures[:8],
        "max_error": max_error,
        "tolerance": tolerance,
        "params": params,
    }


def _random_graph(n: int, prob: float, rng) -> Graph:
    upper = np.triu(rng.random((n, n)) < prob, 1).astype(np.uint8)
    return Graph(upper + upper.T)


def run_count_identity(n_max: int = 6, trials: int = 200, seed: int = 0) -> dict:
    """Scaled-integer identity: raw injective sum == |Aut| * subgraph count.

    Both sides are exact integers, so the tolerance is zero and any mismatch
    is a hard failure.
    """
    rng = np.random.default_rng(seed)
    patterns = [p for p in PATTERN_LIBRARY.values() if p.k <= 6]
    checks = 0
    failures: list[str] = []
    for trial in range(trials):
        n = int(rng.integers(2, n_max + 1))
        g = _random_graph(n, float(rng.uniform(0.15, 0.7)), rng)
        adj = g.adj.astype(np.int64)
        for p in patterns:
            lhs = invariant_monomial_sum(adj, p)
            rhs = automorphism_count(p.graph) * count_subgraphs(g, p)
            checks += 1
            if lhs != rhs:
                failures.append(
                    f"trial {trial}, pattern {p.name}: raw sum {lhs}"
                    f" != aut*count {rhs}")
    return _report("count-identity", checks, failures, float(bool(failures)),
                   0.0, {"n_max": n_max, "trials": trials, "seed": seed,
                         "patterns": [p.name for p in patterns]})


def run_finitediff(seed: int = 0, tolerance: float = 1e-4,
                   step: float = 1e-5) -> dict:
    """Score entries against central finite differences of the log-density.

    Also the arbiter for the score's sign convention: the leading term is
    minus W over beta squared, and only that sign matches the derivative of
    the mixture log-density.
    """
    rng = np.random.default_rng(seed)
    sched = NoiseSchedule()
    cfg = ScoreConfig(perm_policy="exhaustive")
    times = (0.2, 0.5, 0.9)
    checks = 0
    max_rel = 0.0
    failures: list[str] = []
    for n in (3, 4):
        for ds_size in (1, 2, 3):
            graphs = tuple(_random_graph(n, 0.5, rng) for _ in range(ds_size))
            oracle = ScoreOracle(Dataset(graphs=graphs), n, cfg=cfg, sched=sched)
            W = random_symmetric(n, rng)
            for t in times:
                S = oracle.score(W, t)
                for i in range(n):
                    for j in range(i + 1, n):
                        up = W.copy()
                        up[i, j] += step
                        up[j, i] += step
                        down = W.copy()
                        down[i, j] -= step
                        down[j, i] -= step
                        fd = (oracle.log_density(up, t)
                              - oracle.log_density(down, t)) / (2 * step)
                        rel = abs(fd - S[i, j]) / max(abs(S[i, j]), 1e-10)
                        checks += 1
                        max_rel = max(max_rel, rel)
                        if rel > tolerance:
                            failures.append(
                                f"n={n} |ds|={ds_size} t={t} entry ({i},{j}):"
                                f" fd {fd:.8g} vs score {S[i, j]:.8g}"
                                f" (rel {rel:.3g})")
    return _report("finitediff", checks, failures, max_rel, tolerance,
                   {"sizes": [3, 4], "dataset_sizes": [1, 2, 3],
                    "times": list(times), "step": step, "seed": seed})


def run_series(seed: int = 0, tolerance: float = 1e-3, order: int = 12,
               trials: int = 10) -> dict:
    """Truncated series against the direct score in the convergent regime.

    Also checks that two extra orders never hurt (unless already at float
    noise), which is what convergence looks like numerically.
    """
    rng = np.random.default_rng(seed)
    n = 4
    # late enough that the exponent arguments stay below 1, early enough
    # that truncation error is actually visible above float noise
    t = 0.7
    sched = NoiseSchedule()
    cfg = ScoreConfig(perm_policy="exhaustive")
    graphs = tuple(_random_graph(n, 0.5, rng) for _ in range(2))
    oracle = ScoreOracle(Dataset(graphs=graphs), n, cfg=cfg, sched=sched)
    checks = 0
    max_rel = 0.0
    max_ratio = 0.0
    failures: list[str] = []
    for trial in range(trials):
        W = random_symmetric(n, rng)
        ratio = oracle.series_ratio(W, t)
        max_ratio = max(max_ratio, ratio)
        direct = oracle.score(W, t)
        scale = float(np.linalg.norm(direct))
        err = {}
        for k in (order, order + 2):
            approx = oracle.score_series(W, t, order=k)
            err[k] = float(np.linalg.norm(approx - direct)) / scale
        checks += 2
        if err[order] > tolerance:
            failures.append(
                f"trial {trial}: order-{order} error {err[order]:.3g}"
                f" (ratio {ratio:.3g})")
        if err[order + 2] > err[order] and err[order] > 1e-9:
            failures.append(
                f"trial {trial}: error grew from {err[order]:.3g} to"
                f" {err[order + 2]:.3g} with two extra orders")
        max_rel = max(max_rel, err[order])
    params = {"n": n, "t": t, "order": order, "trials": trials, "seed": seed,
              "max_series_ratio": max_ratio}
    return _report("series", checks, failures, max_rel, tolerance, params)


def run_basis(seed: int = 0, tolerance: float = 1e-9,
              n_values: tuple[int, ...] = (3, 4),
              orders: tuple[int, ...] = (0, 1, 2, 3)) -> dict:
    """Moment form versus basis-polynomial form, order by order."""
    rng = np.random.default_rng(seed)
    checks = 0
    max_disc = 0.0
    failures: list[str] = []
    for n in n_values:
        graphs = tuple(_random_graph(n, 0.5, rng) for _ in range(2))
        ds = Dataset(graphs=graphs)
        W = random_symmetric(n, rng)
        for k in orders:
            rep = verify_basis_expansion(W, k, ds)
            checks += 1
            max_disc = max(max_disc, rep.max_discrepancy)
            if rep.max_discrepancy > tolerance:
                failures.append(
                    f"n={n} k={k}: discrepancy {rep.max_discrepancy:.3g}"
                    f" (f {rep.f_discrepancy:.3g}, g {rep.g_discrepancy:.3g})")
    return _report("basis", checks, failures, max_disc, tolerance,
                   {"n_values": list(n_values), "orders": list(orders),
                    "seed": seed})


def _equivariance_patterns(n: int) -> tuple[list[Pattern], list[Pattern]]:
    unmarked = [p for p in PATTERN_LIBRARY.values() if p.k <= n]
    edge = Pattern(Graph.from_edges(2, [(0, 1)]), name="edge")
    sources = [edge] + [PATTERN_LIBRARY[name] for name in ("c3", "c4", "c5")]
    marked = [p for p in derive_marked_patterns(sources) if p.k <= n]
    return unmarked, marked


def run_equivariance(seed: int = 0, tolerance: float = 1e-12,
                     n_values: tuple[int, ...] = (3, 4, 5),
                     trials: int = 2) -> dict:
    """Invariance of Q and equivariance of the marked form under every
    permutation, exhaustively."""
    rng = np.random.default_rng(seed)
    checks = 0
    max_rel = 0.0
    failures: list[str] = []
    for n in n_values:
        unmarked, marked = _equivariance_patterns(n)
        for trial in range(trials):
            W = random_symmetric(n, rng)
            inv_base = {p.name: invariant_basis(W, p) for p in unmarked}
            equi_base = [(p, equivariant_basis(W, p)) for p in marked]
            for perm in itertools.permutations(range(n)):
                Wp = permute_matrix(W, perm)
                for p in unmarked:
                    base = inv_base[p.name]
                    rel = abs(invariant_basis(Wp, p) - base) / max(abs(base), 1e-300)
                    checks += 1
                    max_rel = max(max_rel, rel)
                    if rel > tolerance:
                        failures.append(
                            f"n={n} trial {trial} pattern {p.name}"
                            f" perm {perm}: invariance off by {rel:.3g}")
                for p, base in equi_base:
                    expected = permute_matrix(base, perm)
                    got = equivariant_basis(Wp, p)
                    scale = max(float(np.abs(base).max()), 1e-300)
                    rel = float(np.abs(got - expected).max()) / scale
                    checks += 1
                    max_rel = max(max_rel, rel)
                    if rel > tolerance:
                        failures.append(
                            f"n={n} trial {trial} marked {p.name} marks"
                            f" {p.marks} perm {perm}: equivariance off by"
                            f" {rel:.3g}")
    return _report("equivariance", checks, failures, max_rel, tolerance,
                   {"n_values": list(n_values), "trials": trials, "seed": seed})


_RUNNERS = {
    "count-identity": run_count_identity,
    "finitediff": run_finitediff,
    "series": run_series,
    "basis": run_basis,
    "equivariance": run_equivariance,
}


def run_suite(name: str, **overrides) -> dict:
    if name not in _RUNNERS:
        known = ", ".join(SUITE_NAMES)
        raise InputError(f"unknown suite {name!r}; known suites: {known}")
    return _RUNNERS[name](**overrides)
