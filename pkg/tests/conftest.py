"""Shared helpers for the test suite."""

import numpy as np

from motifdiff.graphs import Graph


def make_random_graph(n, prob, rng):
    """Bernoulli upper triangle, mirrored. Kept separate from the library's
    own random-graph helper so property tests do not lean on what they test."""
    upper = np.triu(rng.random((n, n)) < prob, 1).astype(np.uint8)
    return Graph(upper + upper.T)


def complete_graph(n):
    adj = np.ones((n, n), dtype=np.uint8)
    np.fill_diagonal(adj, 0)
    return Graph(adj)
