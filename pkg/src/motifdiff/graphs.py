"""Core graph types and exact isomorphism machinery.

Graphs are simple and undirected: binary symmetric adjacency, zero diagonal.
Node ids are 0-based everywhere inside the library; ``graph_from_edge_list``
and the JSONL dataset format are the 1-based boundary.

Isomorphism testing, automorphism counting and canonical labeling share a
color-refinement + individualization search. That is exact at any size and
fast for the small, mostly sparse graphs this library targets; it makes no
attempt to compete with nauty on adversarial inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CapacityError, InputError

# Exhaustive-search bounds. Patterns stay small by contract; automorphism
# counting refuses anything larger instead of silently taking forever.
PATTERN_NODE_CAP = 12
AUTOMORPHISM_NODE_CAP = 12


class Graph:
    """Immutable simple undirected graph on nodes 0..n-1."""

    __slots__ = ("n", "m", "adj", "degrees", "edge_list", "neighbor_lists",
                 "neighbor_masks", "_hash")

    def __init__(self, adjacency) -> None:
        adj = np.ascontiguousarray(adjacency, dtype=np.uint8)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise InputError("adjacency must be a square matrix")
        n = int(adj.shape[0])
        if np.any(adj > 1):
            raise InputError("adjacency entries must be 0 or 1")
        if not np.array_equal(adj, adj.T):
            raise InputError("adjacency must be symmetric")
        if n and np.any(np.diagonal(adj)):
            raise InputError("self-loops are not allowed")
        adj.setflags(write=False)
        self.n = n
        self.adj = adj
        self.m = int(adj.sum()) // 2
        self.degrees = tuple(int(d) for d in adj.sum(axis=0))
        iu, ju = np.nonzero(np.triu(adj, 1))
        self.edge_list = tuple((int(u), int(v)) for u, v in zip(iu, ju))
        self.neighbor_lists = tuple(
            tuple(int(v) for v in np.nonzero(adj[u])[0]) for u in range(n)
        )
        self.neighbor_masks = tuple(
            sum(1 << v for v in nbrs) for nbrs in self.neighbor_lists
        )
        self._hash = hash((n, adj.tobytes()))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build from 0-based endpoint pairs; duplicates collapse silently."""
        if not isinstance(n, int) or n < 0:
            raise InputError("node count must be a non-negative integer")
        adj = np.zeros((n, n), dtype=np.uint8)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at node {u}")
            adj[u, v] = adj[v, u] = 1
        return cls(adj)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.adj, other.adj)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def graph_from_edge_list(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a graph from 1-based endpoint pairs (the file-format convention).

    Duplicate edges collapse silently; self-loops and out-of-range endpoints
    are rejected.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError("node count must be a positive integer")
    shifted = []
    for e in edges:
        if len(e) != 2:
            raise InputError(f"edge {tuple(e)} must have exactly two endpoints")
        u, v = e
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (u, v)):
            raise InputError(f"edge ({u}, {v}) endpoints must be integers")
        if not (1 <= u <= n and 1 <= v <= n):
            raise InputError(f"edge ({u}, {v}) endpoint out of range 1..{n}")
        if u == v:
            raise InputError(f"self-loop at node {u}")
        shifted.append((u - 1, v - 1))
    return Graph.from_edges(n, shifted)


class Pattern:
    """A small graph to search for, optionally with an ordered pair of marked nodes."""

    __slots__ = ("graph", "name", "marks")

    def __init__(self, graph: Graph, name: str | None = None,
                 marks: tuple[int, int] | None = None) -> None:
        if graph.n > PATTERN_NODE_CAP:
            raise CapacityError(
                f"pattern has {graph.n} nodes, cap is {PATTERN_NODE_CAP}")
        if marks is not None:
            c, d = marks
            if not (0 <= c < graph.n and 0 <= d < graph.n):
                raise InputError(f"marks {marks} out of range for k={graph.n}")
            if c == d:
                raise InputError("marks must be two distinct nodes")
            marks = (int(c), int(d))
        self.graph = graph
        self.name = name
        self.marks = marks

    @property
    def k(self) -> int:
        return self.graph.n

    def with_marks(self, c: int, d: int) -> "Pattern":
        return Pattern(self.graph, name=self.name, marks=(c, d))

    def __repr__(self) -> str:
        tag = self.name or f"k={self.k}"
        if self.marks is not None:
            return f"Pattern({tag}, marks={self.marks})"
        return f"Pattern({tag})"


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of graphs plus free-form string metadata."""

    graphs: tuple[Graph, ...]
    metadata: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "graphs", tuple(self.graphs))
        meta = {str(k): str(v) for k, v in dict(self.metadata).items()}
        object.__setattr__(self, "metadata", meta)

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self):
        return iter(self.graphs)

    def node_counts(self) -> tuple[int, ...]:
        return tuple(sorted({g.n for g in self.graphs}))


def permute_graph(g: Graph, perm: Sequence[int]) -> Graph:
    """Relabeled copy: new adjacency[u][v] = old adjacency[perm[u]][perm[v]]."""
    p = list(perm)
    if sorted(p) != list(range(g.n)):
        raise InputError("perm must be a permutation of 0..n-1")
    idx = np.asarray(p, dtype=np.intp)
    return Graph(g.adj[np.ix_(idx, idx)])


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    seen = {0}
    frontier = [0]
    while frontier:
        u = frontier.pop()
        for v in g.neighbor_lists[u]:
            if v not in seen:
                seen.add(v)
                frontier.append(v)
    return len(seen) == g.n


# ---------------------------------------------------------------------------
# color refinement and canonical labeling


def _refine_colors(n: int, neighbors: Sequence[Sequence[int]],
                   colors: Sequence[int]) -> list[int]:
    """Iterate neighborhood-multiset refinement to a stable, canonically
    numbered coloring. Color ids depend only on the isomorphism type of the
    colored graph, never on the input numbering."""
    cur = list(colors)
    while True:
        sigs = [(cur[v], tuple(sorted(cur[u] for u in neighbors[v])))
                for v in range(n)]
        ranking = {s: r for r, s in enumerate(sorted(set(sigs)))}
        nxt = [ranking[s] for s in sigs]
        if nxt == cur:
            return cur
        cur = nxt


def _ordering_bits(adj: np.ndarray, order: Sequence[int]) -> bytes:
    idx = np.asarray(order, dtype=np.intp)
    sub = adj[np.ix_(idx, idx)]
    k = len(order)
    iu = np.triu_indices(k, 1)
    return np.packbits(sub[iu]).tobytes()


def _canonical_order(g: Graph, colors0: Sequence[int]) -> tuple[int, ...]:
    """Node ordering whose adjacency encoding is minimal among all orderings
    consistent with the (refined) colors. Individualize-and-refine search."""
    n = g.n
    if n == 0:
        return ()
    if len(set(colors0)) == 1 and g.m in (0, n * (n - 1) // 2):
        # every ordering of an empty or complete graph encodes identically
        return tuple(range(n))
    adj = g.adj
    neighbors = g.neighbor_lists
    best_key: list = [None]
    best_order: list = [None]

    def search(colors: list[int]) -> None:
        colors = _refine_colors(n, neighbors, colors)
        cell = None
        by_color: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            by_color.setdefault(c, []).append(v)
        for c in sorted(by_color):
            if len(by_color[c]) > 1:
                cell = by_color[c]
                break
        if cell is None:
            order = tuple(v for _, v in sorted((colors[v], v) for v in range(n)))
            key = _ordering_bits(adj, order)
            if best_key[0] is None or key < best_key[0]:
                best_key[0] = key
                best_order[0] = order
            return
        for v in cell:
            child = [2 * c for c in colors]
            child[v] -= 1
            search(child)

    search(list(colors0))
    return best_order[0]


def canonical_form(g: Graph) -> bytes:
    """Canonical byte string: equal for two graphs iff they are isomorphic."""
    order = _canonical_order(g, (0,) * g.n)
    bits = _ordering_bits(g.adj, order)
    return b"%d;%d;" % (g.n, g.m) + bits.hex().encode("ascii")


def marked_canonical_form(p: Pattern) -> bytes:
    """Canonical byte string for a marked pattern: equal iff some isomorphism
    maps marks onto marks in order."""
    if p.marks is None:
        return canonical_form(p.graph)
    c, d = p.marks
    colors0 = [0] * p.graph.n
    colors0[c] = 1
    colors0[d] = 2
    order = _canonical_order(p.graph, colors0)
    bits = _ordering_bits(p.graph.adj, order)
    return (b"%d;%d;%d,%d;" % (p.graph.n, p.graph.m, order.index(c), order.index(d))
            + bits.hex().encode("ascii"))


# ---------------------------------------------------------------------------
# isomorphism and automorphism counting


def _find_bijection(g1: Graph, g2: Graph, pins: Mapping[int, int]) -> bool:
    """Does an edge-preserving bijection g1 -> g2 exist that extends `pins`?"""
    if g1.n != g2.n or g1.m != g2.m:
        return False
    if sorted(g1.degrees) != sorted(g2.degrees):
        return False
    n = g1.n
    if n == 0:
        return True
    if len(set(pins.values())) < len(pins):
        return False
    c1 = [0] * n
    c2 = [0] * n
    tag = 1
    for a in sorted(pins):
        c1[a] = tag
        c2[pins[a]] = tag
        tag += 1
    c1 = _refine_colors(n, g1.neighbor_lists, c1)
    c2 = _refine_colors(n, g2.neighbor_lists, c2)
    if sorted(c1) != sorted(c2):
        return False
    class_size: dict[int, int] = {}
    for c in c1:
        class_size[c] = class_size.get(c, 0) + 1
    order = sorted(range(n), key=lambda v: (class_size[c1[v]], c1[v], v))
    targets: dict[int, list[int]] = {}
    for u, c in enumerate(c2):
        targets.setdefault(c, []).append(u)
    a1 = g1.adj
    a2 = g2.adj
    mapping = [-1] * n
    used = [False] * n
    placed: list[int] = []

    def dfs(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for u in targets.get(c1[v], ()):
            if used[u]:
                continue
            if all(a1[v, w] == a2[u, mapping[w]] for w in placed):
                mapping[v] = u
                used[u] = True
                placed.append(v)
                if dfs(i + 1):
                    return True
                placed.pop()
                used[u] = False
                mapping[v] = -1
        return False

    return dfs(0)


def are_isomorphic(g1: Graph, g2: Graph) -> bool:
    return _find_bijection(g1, g2, {})


def automorphism_count(g: Graph) -> int:
    """Exact order of the automorphism group, by a stabilizer chain.

    |Aut| is the product over nodes v of the size of v's orbit inside the
    stabilizer of all previously fixed nodes; each orbit membership test is
    one extension search.
    """
    if g.n > AUTOMORPHISM_NODE_CAP:
        raise CapacityError(
            f"automorphism counting is capped at {AUTOMORPHISM_NODE_CAP} nodes,"
            f" got {g.n}")
    total = 1
    pins: dict[int, int] = {}
    for v in range(g.n):
        orbit = 0
        for u in range(g.n):
            trial = dict(pins)
            trial[v] = u
            if _find_bijection(g, g, trial):
                orbit += 1
        total *= orbit
        pins[v] = v
    return total
