from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from spectra_cert.graph import Graph

settings.register_profile("repo", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 9, connected: bool = False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for v in range(n) for u in range(v)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = {p for p, keep in zip(pairs, mask) if keep}
    if connected:
        # a random spanning tree keeps the graph connected
        order = draw(st.permutations(range(n)))
        for i in range(1, n):
            parent = order[draw(st.integers(0, i - 1))]
            edges.add(tuple(sorted((parent, order[i]))))
    return Graph.from_edges(n, sorted(edges))


@st.composite
def trees(draw, min_n: int = 1, max_n: int = 12):
    n = draw(st.integers(min_n, max_n))
    edges = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
    return Graph.from_edges(n, edges)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(1729)
