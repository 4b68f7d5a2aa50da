"""Graph polynomial bases over real symmetric matrices.

A pattern with edge set E on k nodes induces the invariant polynomial

    Q(W) = (1/n!) * sum over injective maps s: [k] -> [n] of
           prod_{(u,v) in E} W[s(u), s(v)]

and, when two nodes (c, d) are marked, the matrix-valued equivariant
polynomial whose (i, j) entry fixes s(c)=i, s(d)=j and sums over injective
assignments of the rest, scaled by (n-k)!/n!. On a binary adjacency these
reduce to scaled subgraph and rooted-subgraph counts; on arbitrary real
input they are the monomial bases the score decomposition is written in.

The raw helpers (``monomial_sum``, ``pinned_monomial_matrix``) take explicit
edge lists that may repeat a pair; repeats multiply the factor in, which is
what the moment expansion needs on the real-matrix side. ``monomial_graph``
turns an index tuple from that expansion into its collapsed simple pattern
(for the binary side) plus the multiplicity-preserving edge list (for the
real side).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from .errors import CapacityError, ContractError, InputError
from .graphs import Graph, Pattern

# Basis evaluation enumerates n!/(n-k)! assignments; the library contract
# keeps pattern order small enough for that to stay desk scale.
BASIS_PATTERN_CAP = 6


@lru_cache(maxsize=64)
def _injective_assignments(n: int, k: int) -> np.ndarray:
    perms = list(itertools.permutations(range(n), k))
    arr = np.array(perms, dtype=np.intp).reshape(len(perms), k)
    arr.setflags(write=False)
    return arr


def _as_square(W) -> np.ndarray:
    arr = np.asarray(W)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InputError("W must be a square matrix")
    return arr


def monomial_sum(W, k_nodes: int, edges) -> int | float:
    """Raw injective monomial sum: sum over injective maps [k_nodes] -> [n]
    of the product of W entries along `edges` (repeats retain multiplicity).

    Integer input accumulates exactly in int64; otherwise float64.
    """
    W = _as_square(W)
    n = W.shape[0]
    if k_nodes < 0:
        raise InputError("k_nodes must be non-negative")
    exact = np.issubdtype(W.dtype, np.integer)
    if k_nodes > n:
        return 0 if exact else 0.0
    asn = _injective_assignments(n, k_nodes)
    dtype = np.int64 if exact else np.float64
    acc = np.ones(len(asn), dtype=dtype)
    for a, b in edges:
        if not (0 <= a < k_nodes and 0 <= b < k_nodes):
            raise InputError(f"edge ({a}, {b}) out of range for k={k_nodes}")
        acc = acc * W[asn[:, a], asn[:, b]].astype(dtype)
    total = acc.sum()
    return int(total) if exact else float(total)


def pinned_monomial_matrix(W, k_nodes: int, edges, c: int, d: int) -> np.ndarray:
    """Raw pinned monomial sums, as an n x n matrix.

    Entry (i, j) pins node c to i and node d to j and sums the edge product
    over injective assignments of the remaining k_nodes-2 nodes to the other
    hosts. Diagonal entries are 0 (pins must be distinct hosts).
    """
    W = _as_square(W)
    n = W.shape[0]
    if k_nodes < 2:
        raise InputError("pinned sums need at least the two marked nodes")
    if not (0 <= c < k_nodes and 0 <= d < k_nodes) or c == d:
        raise InputError(f"marks ({c}, {d}) invalid for k={k_nodes}")
    edges = [(int(a), int(b)) for a, b in edges]
    for a, b in edges:
        if not (0 <= a < k_nodes and 0 <= b < k_nodes):
            raise InputError(f"edge ({a}, {b}) out of range for k={k_nodes}")
    exact = np.issubdtype(W.dtype, np.integer)
    dtype = np.int64 if exact else np.float64
    out = np.zeros((n, n), dtype=dtype)
    if k_nodes > n:
        return out
    free = [v for v in range(k_nodes) if v not in (c, d)]
    col = {v: pos for pos, v in enumerate(free)}
    base = _injective_assignments(n - 2, k_nodes - 2)
    hosts = np.arange(n)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            comp = np.delete(hosts, [i, j])
            cols = comp[base]
            acc = np.ones(len(base), dtype=dtype)
            for a, b in edges:
                va = i if a == c else j if a == d else cols[:, col[a]]
                vb = i if b == c else j if b == d else cols[:, col[b]]
                acc = acc * W[va, vb].astype(dtype)
            out[i, j] = acc.sum()
    return out


def _require_basis_pattern(p: Pattern, marked: bool) -> None:
    if marked and p.marks is None:
        raise ContractError("this basis element needs a marked pattern")
    if not marked and p.marks is not None:
        raise ContractError("this basis element needs an unmarked pattern")
    if p.k > BASIS_PATTERN_CAP:
        raise CapacityError(
            f"basis evaluation is capped at {BASIS_PATTERN_CAP}-node patterns,"
            f" got {p.k}")


def invariant_monomial_sum(W, p: Pattern) -> int | float:
    """Unnormalized invariant: the raw injective sum for the pattern's edges.

    On a binary adjacency this equals |Aut| times the subgraph count, exactly
    (integer arithmetic).
    """
    _require_basis_pattern(p, marked=False)
    return monomial_sum(W, p.k, p.graph.edge_list)


def invariant_basis(W, p: Pattern) -> float:
    """Permutation-invariant basis polynomial: raw injective sum over n!."""
    _require_basis_pattern(p, marked=False)
    W = _as_square(W)
    n = W.shape[0]
    if p.k > n:
        return 0.0
    raw = monomial_sum(W, p.k, p.graph.edge_list)
    return float(raw) / factorial(n)


def equivariant_basis(W, p: Pattern) -> np.ndarray:
    """Permutation-equivariant basis polynomial, an n x n float matrix.

    Raw pinned sums scaled by (n-k)!/n!, so that each entry is the average
    over all n! permutation extensions rather than over the injective
    assignments alone.
    """
    _require_basis_pattern(p, marked=True)
    W = _as_square(W)
    n = W.shape[0]
    if p.k > n:
        return np.zeros((n, n), dtype=np.float64)
    c, d = p.marks
    raw = pinned_monomial_matrix(W, p.k, p.graph.edge_list, c, d)
    return raw.astype(np.float64) * (factorial(n - p.k) / factorial(n))


# ---------------------------------------------------------------------------
# index tuples of the moment expansion


@dataclass(frozen=True)
class IndexTuple:
    """A flattened tuple of node indices (u1, v1, u2, v2, ...), optionally
    with a distinguished root pair. Repeated and equal indices are allowed;
    degenerate pairs make the associated term vanish rather than erroring."""

    entries: tuple[int, ...]
    roots: tuple[int, int] | None = None

    def __post_init__(self):
        entries = tuple(int(x) for x in self.entries)
        if len(entries) % 2:
            raise InputError("entries must pair up (even length)")
        object.__setattr__(self, "entries", entries)
        if self.roots is not None:
            r = tuple(int(x) for x in self.roots)
            if len(r) != 2:
                raise InputError("roots must be a pair")
            object.__setattr__(self, "roots", r)

    def scan_order(self) -> tuple[int, ...]:
        return (self.roots or ()) + self.entries


def first_occurrence_relabel(seq) -> tuple[int, ...]:
    """Canonical relabeling by order of first occurrence: (3,1,3,7) -> (0,1,0,2)."""
    mapping: dict[int, int] = {}
    out = []
    for x in seq:
        if x not in mapping:
            mapping[x] = len(mapping)
        out.append(mapping[x])
    return tuple(out)


@dataclass(frozen=True, eq=False)
class MonomialGraph:
    """What an index tuple contributes to the moment expansion.

    `pattern` is the collapsed simple graph on the tuple's distinct labels
    (first-occurrence relabeled, roots at (0, 1) and marked when present);
    it is what gets counted on the binary side. `multi_edges` is the
    relabeled pair list with multiplicity kept, the monomial evaluated on
    the real side; the root pair is not an element of it unless the tuple
    itself repeats it. Degenerate tuples (a pair or the root hitting a
    single node) produce vanishing=True and no pattern.
    """

    vanishing: bool
    pattern: Pattern | None
    multi_edges: tuple[tuple[int, int], ...]


def monomial_graph(t: IndexTuple, root_edge: bool = True) -> MonomialGraph:
    degenerate = any(t.entries[i] == t.entries[i + 1]
                     for i in range(0, len(t.entries), 2))
    if t.roots is not None and t.roots[0] == t.roots[1]:
        degenerate = True
    if degenerate:
        return MonomialGraph(vanishing=True, pattern=None, multi_edges=())
    relabeled = first_occurrence_relabel(t.scan_order())
    k_nodes = len(set(relabeled))
    offset = 2 if t.roots is not None else 0
    pairs = [(relabeled[offset + i], relabeled[offset + i + 1])
             for i in range(0, len(t.entries), 2)]
    pairs = [(min(a, b), max(a, b)) for a, b in pairs]
    simple = set(pairs)
    marks = None
    if t.roots is not None:
        marks = (0, 1)
        if root_edge:
            simple.add((0, 1))
    g = Graph.from_edges(k_nodes, sorted(simple))
    return MonomialGraph(vanishing=False,
                         pattern=Pattern(g, marks=marks),
                         multi_edges=tuple(sorted(pairs)))
