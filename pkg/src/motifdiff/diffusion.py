"""Gaussian diffusion on adjacency matrices with an exact nonparametric score.

The forward process is the variance-preserving SDE on the strict upper
triangle of a symmetric zero-diagonal matrix: at time t the data adjacency
A0 is observed as W = alpha_t*A0 + beta_t*Z with Z standard normal per edge
slot, mirrored. The marginal density over a finite training set, symmetrized
over node permutations, is a Gaussian mixture whose components are the
permuted adjacencies. That makes the score available in closed form as a
posterior-mean, no learned network anywhere.

The same score has a truncated-series form organized around inner-product
powers. Both are implemented on a shared template table: the deduplicated
permuted-adjacency rows with multiplicities. ``verify_basis_expansion``
checks the algebraic identity behind the series form, term by term, against
the graph-polynomial module.

All reductions that touch floating-point data go through einsum with a fixed
contraction order so that results are identical regardless of BLAS thread
count.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from math import factorial

import numpy as np
from scipy.special import logsumexp

from .errors import (CapacityError, InputError, NumericalRegimeError,
                     SeriesDivergenceError)
from .graphs import Dataset, Graph
from .polynomials import (IndexTuple, first_occurrence_relabel, monomial_graph,
                          monomial_sum, pinned_monomial_matrix)

# Below this noise level the mixture components are numerically disjoint and
# the posterior weights degenerate; refuse rather than return garbage.
BETA_FLOOR = 1e-6

EXHAUSTIVE_PERM_CAP = 8


# ---------------------------------------------------------------------------
# symmetric-matrix plumbing


def upper_vector(W) -> np.ndarray:
    W = np.asarray(W, dtype=np.float64)
    n = W.shape[0]
    iu = np.triu_indices(n, 1)
    return W[iu]


def symmetric_from_upper(vec, n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=np.float64)
    iu = np.triu_indices(n, 1)
    out[iu] = vec
    return out + out.T


def validate_symmetric(W) -> np.ndarray:
    arr = np.asarray(W, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InputError("expected a square matrix")
    if not np.array_equal(arr, arr.T):
        raise InputError("matrix must be symmetric")
    if arr.shape[0] and np.any(np.diagonal(arr) != 0.0):
        raise InputError("matrix must have a zero diagonal")
    return arr


def random_symmetric(n: int, rng) -> np.ndarray:
    return symmetric_from_upper(rng.standard_normal(n * (n - 1) // 2), n)


def permute_matrix(W, perm) -> np.ndarray:
    W = np.asarray(W)
    p = list(perm)
    if sorted(p) != list(range(W.shape[0])):
        raise InputError("perm must be a permutation of 0..n-1")
    idx = np.asarray(p, dtype=np.intp)
    return W[np.ix_(idx, idx)]


# ---------------------------------------------------------------------------
# schedule


@dataclass(frozen=True)
class NoiseSchedule:
    """Variance-preserving schedule with linear rate beta(t)."""

    beta_min: float = 0.1
    beta_max: float = 20.0
    t_min: float = 1e-3
    t_max: float = 1.0

    def __post_init__(self):
        if not (0 < self.beta_min < self.beta_max):
            raise InputError("need 0 < beta_min < beta_max")
        if not (0 < self.t_min < self.t_max <= 1.0):
            raise InputError("need 0 < t_min < t_max <= 1")

    def _check(self, t: float) -> float:
        t = float(t)
        if not (self.t_min <= t <= self.t_max):
            raise InputError(
                f"t={t} outside schedule range [{self.t_min}, {self.t_max}]")
        return t

    def rate(self, t: float) -> float:
        t = self._check(t)
        return self.beta_min + t * (self.beta_max - self.beta_min)

    def alpha_beta(self, t: float) -> tuple[float, float]:
        t = self._check(t)
        integral = self.beta_min * t + 0.5 * t * t * (self.beta_max - self.beta_min)
        alpha = math.exp(-0.5 * integral)
        # beta^2 = 1 - alpha^2 = -expm1(-integral), stable near t=0
        beta = math.sqrt(-math.expm1(-integral))
        return alpha, beta


def schedule(sched: NoiseSchedule, t: float) -> tuple[float, float]:
    return sched.alpha_beta(t)


@dataclass(frozen=True)
class ScoreConfig:
    """Knobs of the exact-score oracle.

    perm_policy: "exhaustive" enumerates all n! permutations (n <= 8),
    "monte_carlo" draws mc_samples uniform permutations from `seed`,
    "auto" picks exhaustive when affordable. truncation_k is the series
    order; series_ratio_max bounds the largest exponent argument the series
    mode will accept before declaring itself out of its convergent regime.
    """

    perm_policy: str = "auto"
    mc_samples: int = 10000
    seed: int = 0
    truncation_k: int = 12
    series_ratio_max: float = 3.0

    def __post_init__(self):
        if self.perm_policy not in ("auto", "exhaustive", "monte_carlo"):
            raise InputError(f"unknown perm_policy {self.perm_policy!r}")
        if self.mc_samples < 1:
            raise InputError("mc_samples must be at least 1")
        if self.truncation_k < 0:
            raise InputError("truncation_k must be non-negative")
        if not (self.series_ratio_max > 0):
            raise InputError("series_ratio_max must be positive")


def perturb(graph: Graph, t: float, sched: NoiseSchedule, rng) -> np.ndarray:
    """Forward-process sample: alpha_t*A0 plus mirrored Gaussian edge noise."""
    alpha, beta = sched.alpha_beta(t)
    n = graph.n
    noise = symmetric_from_upper(rng.standard_normal(n * (n - 1) // 2), n)
    return alpha * graph.adj.astype(np.float64) + beta * noise


def quantize(W, threshold: float = 0.5) -> Graph:
    """Graph with an edge wherever the entry exceeds the threshold."""
    arr = validate_symmetric(W)
    adj = (arr > threshold).astype(np.uint8)
    np.fill_diagonal(adj, 0)
    return Graph(adj)


# ---------------------------------------------------------------------------
# the exact-score oracle


class ScoreOracle:
    """Exact score and log-density for one node count and training set.

    Precomputes the deduplicated table of permuted training adjacencies
    (upper-triangle rows with multiplicities). Everything else is a small
    amount of arithmetic per query against that table.
    """

    def __init__(self, dataset: Dataset, n: int, cfg: ScoreConfig | None = None,
                 sched: NoiseSchedule | None = None) -> None:
        if n < 1:
            raise InputError("n must be positive")
        self.cfg = cfg if cfg is not None else ScoreConfig()
        self.sched = sched if sched is not None else NoiseSchedule()
        self.n = n
        graphs = [g for g in dataset.graphs if g.n == n]
        if not graphs:
            raise InputError(f"dataset has no graphs with {n} nodes")
        self.num_graphs = len(graphs)
        policy = self.cfg.perm_policy
        if policy == "auto":
            policy = "exhaustive" if n <= EXHAUSTIVE_PERM_CAP else "monte_carlo"
        if policy == "exhaustive" and n > EXHAUSTIVE_PERM_CAP:
            raise CapacityError(
                f"exhaustive symmetrization is capped at n={EXHAUSTIVE_PERM_CAP},"
                f" got n={n}")
        self.policy = policy
        if policy == "exhaustive":
            perms = np.array(list(itertools.permutations(range(n))),
                             dtype=np.intp).reshape(-1, n)
        else:
            rng = np.random.default_rng(self.cfg.seed)
            perms = np.array([rng.permutation(n) for _ in range(self.cfg.mc_samples)],
                             dtype=np.intp)
        iu, ju = np.triu_indices(n, 1)
        rows = np.concatenate(
            [g.adj[perms[:, :, None], perms[:, None, :]][:, iu, ju] for g in graphs],
            axis=0)
        templates, counts = np.unique(rows, axis=0, return_counts=True)
        self._V = templates.astype(np.float64)
        self._logmult = np.log(counts.astype(np.float64))
        self._ssq = np.einsum("ve,ve->v", self._V, self._V, optimize=False)
        self._ssq_min = float(self._ssq.min())
        self._log_total = math.log(rows.shape[0])
        self.num_templates = int(templates.shape[0])
        self.num_edge_slots = int(iu.size)

    # -- upper-triangle-vector core --------------------------------------

    def _alpha_beta(self, t: float) -> tuple[float, float]:
        alpha, beta = self.sched.alpha_beta(t)
        if beta < BETA_FLOOR:
            raise NumericalRegimeError(
                f"beta_t={beta:.3g} below {BETA_FLOOR}; mixture is degenerate")
        return alpha, beta

    def _logits(self, w: np.ndarray, alpha: float, beta: float) -> np.ndarray:
        ip = np.einsum("ve,e->v", self._V, w, optimize=False)
        return self._logmult + (alpha * ip - 0.5 * alpha * alpha * self._ssq) / (beta * beta)

    def _log_density_upper(self, w: np.ndarray, t: float) -> float:
        alpha, beta = self._alpha_beta(t)
        logits = self._logits(w, alpha, beta)
        wsq = float(np.einsum("e,e->", w, w, optimize=False))
        return (float(logsumexp(logits)) - self._log_total
                - wsq / (2.0 * beta * beta)
                - self.num_edge_slots * (math.log(beta) + 0.5 * math.log(2.0 * math.pi)))

    def _score_upper(self, w: np.ndarray, t: float) -> np.ndarray:
        alpha, beta = self._alpha_beta(t)
        logits = self._logits(w, alpha, beta)
        logits = logits - logits.max()
        weights = np.exp(logits)
        weights = weights / weights.sum()
        posterior_mean = np.einsum("v,ve->e", weights, self._V, optimize=False)
        b2 = beta * beta
        return -w / b2 + (alpha / b2) * posterior_mean

    def _series_upper(self, w: np.ndarray, t: float, order: int) -> np.ndarray:
        alpha, beta = self._alpha_beta(t)
        b2 = beta * beta
        ip = np.einsum("ve,e->v", self._V, w, optimize=False)
        x = (alpha / b2) * ip
        ratio = float(np.abs(x).max()) if x.size else 0.0
        if ratio > self.cfg.series_ratio_max:
            raise SeriesDivergenceError(
                f"series argument ratio {ratio:.3g} exceeds"
                f" {self.cfg.series_ratio_max}; truncation would diverge",
                ratio=ratio)
        # multiplicity times the self-energy weight, shifted for stability
        # (the shift cancels between numerator and denominator)
        logq = self._logmult - alpha * alpha * (self._ssq - self._ssq_min) / (2.0 * b2)
        q = np.exp(logq)
        sigma = np.ones_like(x)
        term = np.ones_like(x)
        for k in range(1, order + 1):
            term = term * x / k
            sigma = sigma + term
        mix = q * sigma
        denom = float(np.einsum("v->", mix, optimize=False))
        if not math.isfinite(denom) or denom <= 0.0:
            raise SeriesDivergenceError(
                f"series denominator {denom:.3g} is not positive; truncation"
                f" order {order} is outside its convergent regime",
                ratio=ratio)
        numer = np.einsum("v,ve->e", mix, self._V, optimize=False)
        return -w / b2 + (alpha / b2) * (numer / denom)

    # -- full-matrix interface --------------------------------------------

    def _check_matrix(self, W) -> np.ndarray:
        arr = validate_symmetric(W)
        if arr.shape[0] != self.n:
            raise InputError(
                f"matrix has {arr.shape[0]} nodes, oracle was built for {self.n}")
        return arr

    def log_density(self, W, t: float) -> float:
        return self._log_density_upper(upper_vector(self._check_matrix(W)), t)

    def score(self, W, t: float) -> np.ndarray:
        s = self._score_upper(upper_vector(self._check_matrix(W)), t)
        return symmetric_from_upper(s, self.n)

    def score_series(self, W, t: float, order: int | None = None) -> np.ndarray:
        if order is None:
            order = self.cfg.truncation_k
        s = self._series_upper(upper_vector(self._check_matrix(W)), t, order)
        return symmetric_from_upper(s, self.n)

    def series_ratio(self, W, t: float) -> float:
        """Largest exponent argument the series would see; its regime gauge."""
        alpha, beta = self._alpha_beta(t)
        w = upper_vector(self._check_matrix(W))
        ip = np.einsum("ve,e->v", self._V, w, optimize=False)
        x = (alpha / (beta * beta)) * ip
        return float(np.abs(x).max()) if x.size else 0.0

    def reverse_sample(self, steps: int, score_mode: str = "direct",
                       rng=None, *, threshold: float = 0.5,
                       trajectory: list | None = None) -> Graph:
        """Integrate the reverse-time SDE from t_max to t_min and quantize.

        Euler-Maruyama on a uniform grid, score evaluated at the left
        endpoint of each step. `trajectory`, if given, collects
        (t, full matrix) states including the final one.
        """
        if steps < 10:
            raise InputError("steps must be at least 10")
        if score_mode not in ("direct", "series"):
            raise InputError(f"unknown score_mode {score_mode!r}")
        if rng is None:
            rng = np.random.default_rng(self.cfg.seed)
        sched = self.sched
        n = self.n
        slots = n * (n - 1) // 2
        w = rng.standard_normal(slots)
        h = (sched.t_max - sched.t_min) / steps
        for step in range(steps):
            t = sched.t_max - step * h
            if trajectory is not None:
                trajectory.append((float(t), symmetric_from_upper(w, n)))
            rate = sched.rate(t)
            if score_mode == "direct":
                s = self._score_upper(w, t)
            else:
                s = self._series_upper(w, t, self.cfg.truncation_k)
            z = rng.standard_normal(slots)
            w = w + h * (0.5 * rate * w + rate * s) + math.sqrt(rate * h) * z
        if trajectory is not None:
            trajectory.append((float(sched.t_min), symmetric_from_upper(w, n)))
        return quantize(symmetric_from_upper(w, n), threshold)


# ---------------------------------------------------------------------------
# convenience wrappers (one-shot oracle construction)


def _oracle_for(W, dataset: Dataset, cfg, sched) -> tuple[ScoreOracle, np.ndarray]:
    arr = validate_symmetric(W)
    oracle = ScoreOracle(dataset, arr.shape[0], cfg=cfg, sched=sched)
    return oracle, arr


def log_density(W, t: float, dataset: Dataset, cfg: ScoreConfig | None = None,
                sched: NoiseSchedule | None = None) -> float:
    oracle, arr = _oracle_for(W, dataset, cfg, sched)
    return oracle.log_density(arr, t)


def exact_score_direct(W, t: float, dataset: Dataset,
                       cfg: ScoreConfig | None = None,
                       sched: NoiseSchedule | None = None) -> np.ndarray:
    oracle, arr = _oracle_for(W, dataset, cfg, sched)
    return oracle.score(arr, t)


def exact_score_series(W, t: float, dataset: Dataset,
                       cfg: ScoreConfig | None = None,
                       sched: NoiseSchedule | None = None,
                       order: int | None = None) -> np.ndarray:
    oracle, arr = _oracle_for(W, dataset, cfg, sched)
    return oracle.score_series(arr, t, order)


def reverse_sample(dataset: Dataset, sched: NoiseSchedule | None = None,
                   steps: int = 500, score_mode: str = "direct", rng=None, *,
                   cfg: ScoreConfig | None = None, n: int | None = None,
                   threshold: float = 0.5,
                   trajectory: list | None = None) -> Graph:
    """One reverse-diffusion sample from scratch (builds a fresh oracle)."""
    if n is None:
        sizes = {g.n for g in dataset.graphs}
        if len(sizes) != 1:
            raise InputError(
                f"dataset mixes node counts {sorted(sizes)}; pass n explicitly")
        n = sizes.pop()
    oracle = ScoreOracle(dataset, n, cfg=cfg, sched=sched)
    return oracle.reverse_sample(steps, score_mode=score_mode, rng=rng,
                                 threshold=threshold, trajectory=trajectory)


# ---------------------------------------------------------------------------
# series-identity verification


VERIFY_NODE_CAP = 4
VERIFY_ORDER_CAP = 3


@dataclass(frozen=True, eq=False)
class BasisExpansionReport:
    """Both sides of the order-k moment decomposition, for inspection."""

    order: int
    n: int
    f_moment: np.ndarray
    f_basis: np.ndarray
    g_moment: float
    g_basis: float

    @property
    def f_discrepancy(self) -> float:
        return float(np.abs(self.f_moment - self.f_basis).max())

    @property
    def g_discrepancy(self) -> float:
        return abs(self.g_moment - self.g_basis)

    @property
    def max_discrepancy(self) -> float:
        return max(self.f_discrepancy, self.g_discrepancy)

    def to_json_dict(self) -> dict:
        return {
            "order": self.order,
            "n": self.n,
            "f_moment": self.f_moment.tolist(),
            "f_basis": self.f_basis.tolist(),
            "g_moment": self.g_moment,
            "g_basis": self.g_basis,
            "f_discrepancy": self.f_discrepancy,
            "g_discrepancy": self.g_discrepancy,
            "max_discrepancy": self.max_discrepancy,
        }


def verify_basis_expansion(W, k: int, dataset: Dataset,
                           cfg: ScoreConfig | None = None) -> BasisExpansionReport:
    """Check the order-k term of the series score against its polynomial form.

    Moment side: averages over every (training graph, permutation) pair of
    the matrix pi(A0)*<pi(A0), W>^k and the scalar <pi(A0), W>^k, with
    full-matrix inner products. Basis side: the same quantities reassembled
    from invariant and equivariant basis polynomials, one term per index
    tuple, with the completion factorials the grouping by injective
    placements requires. The two must agree to float precision; their
    difference is the report's discrepancy.
    """
    arr = validate_symmetric(W)
    n = arr.shape[0]
    if n > VERIFY_NODE_CAP or k > VERIFY_ORDER_CAP:
        raise CapacityError(
            f"term verification enumerates n^(2k+2) tuples; capped at"
            f" n<={VERIFY_NODE_CAP}, k<={VERIFY_ORDER_CAP}")
    if k < 0:
        raise InputError("order k must be non-negative")
    graphs = [g for g in dataset.graphs if g.n == n]
    if not graphs:
        raise InputError(f"dataset has no graphs with {n} nodes")

    # moment side, by direct enumeration
    f_moment = np.zeros((n, n), dtype=np.float64)
    g_moment = 0.0
    pairs = 0
    for g in graphs:
        A = g.adj.astype(np.float64)
        for perm in itertools.permutations(range(n)):
            idx = np.asarray(perm, dtype=np.intp)
            B = A[np.ix_(idx, idx)]
            ip = float(np.einsum("ij,ij->", B, arr, optimize=False))
            wk = ip ** k
            f_moment += B * wk
            g_moment += wk
            pairs += 1
    f_moment /= pairs
    g_moment /= pairs

    nfact = factorial(n)
    mean_inv_cache: dict = {}

    def mean_invariant(graph: Graph) -> float:
        # dataset average of the invariant polynomial on binary adjacencies
        key = (graph.n, graph.edge_list)
        if key not in mean_inv_cache:
            total = 0.0
            for g in graphs:
                total += monomial_sum(g.adj.astype(np.float64), graph.n,
                                      graph.edge_list)
            mean_inv_cache[key] = total / (len(graphs) * nfact)
        return mean_inv_cache[key]

    # basis side: group index tuples by their first-occurrence relabeling;
    # tuples sharing a relabeling contribute identical terms
    f_keys: dict[tuple, int] = {}
    for i in range(n):
        for j in range(n):
            for a in itertools.product(range(n), repeat=2 * k):
                key = first_occurrence_relabel((i, j) + a)
                f_keys[key] = f_keys.get(key, 0) + 1
    f_basis = np.zeros((n, n), dtype=np.float64)
    for key, mult in f_keys.items():
        mg = monomial_graph(IndexTuple(entries=key[2:], roots=key[:2]))
        if mg.vanishing:
            continue
        kp = mg.pattern.graph.n
        coeff = factorial(n - kp) * mean_invariant(mg.pattern.graph)
        if coeff == 0.0:
            continue
        raw = pinned_monomial_matrix(arr, kp, mg.multi_edges, 0, 1)
        equi = raw * (factorial(n - kp) / nfact)
        f_basis += (mult * coeff) * equi

    g_keys: dict[tuple, int] = {}
    for a in itertools.product(range(n), repeat=2 * k):
        key = first_occurrence_relabel(a)
        g_keys[key] = g_keys.get(key, 0) + 1
    g_basis = 0.0
    for key, mult in g_keys.items():
        mg = monomial_graph(IndexTuple(entries=key))
        if mg.vanishing:
            continue
        kp = mg.pattern.graph.n
        coeff = factorial(n - kp) * mean_invariant(mg.pattern.graph)
        if coeff == 0.0:
            continue
        inv = factorial(n - kp) * monomial_sum(arr, kp, mg.multi_edges) / nfact
        g_basis += mult * coeff * inv

    return BasisExpansionReport(order=k, n=n, f_moment=f_moment,
                                f_basis=f_basis, g_moment=g_moment,
                                g_basis=float(g_basis))
