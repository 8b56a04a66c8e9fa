"""Isomorphism-free enumeration of small connected graphs.

Every connected graph on ``n`` vertices has a vertex whose removal leaves it
connected (e.g. a leaf of a spanning tree), so all classes on ``n`` vertices
arise by attaching a new vertex to a class on ``n - 1`` vertices.  Candidates
are deduplicated by canonical code.  Trees grow by attaching a leaf; connected
bipartite graphs grow by joining the new vertex to a subset of one colour
class (the removal argument keeps the smaller graph connected, hence with a
unique bipartition).
"""

from __future__ import annotations

import itertools
import os
from functools import lru_cache
from typing import Iterator, Literal

from .canon import canonical_code, canonical_form
from .graph import Graph, GraphError

GraphClass = Literal["all", "trees", "bipartite"]

DEFAULT_CAPS: dict[str, int] = {"all": 10, "trees": 14, "bipartite": 12}


class ResourceError(GraphError):
    """Requested enumeration exceeds the configured cap."""


def _cap(kind: str) -> int:
    env = os.environ.get(f"SPECTRA_CERT_CAP_{kind.upper()}")
    return int(env) if env else DEFAULT_CAPS[kind]


def _extend(g: Graph, nbrs: tuple[int, ...]) -> Graph:
    return Graph(g.n + 1, tuple(sorted(g.edges + tuple((u, g.n) for u in nbrs))))


def _colour_classes(g: Graph) -> tuple[list[int], list[int]]:
    colour = [-1] * g.n
    colour[0] = 0
    stack = [0]
    while stack:
        x = stack.pop()
        for y in g.neighbors(x):
            if colour[y] < 0:
                colour[y] = 1 - colour[x]
                stack.append(y)
    return [v for v in range(g.n) if colour[v] == 0], [v for v in range(g.n) if colour[v] == 1]


def _sorted_classes(found: dict) -> tuple[Graph, ...]:
    # Deterministic order: by edge count, then by canonical code.
    items = sorted(found.items(), key=lambda kv: (kv[1].m, kv[0]))
    return tuple(g for _, g in items)


@lru_cache(maxsize=None)
def _connected(n: int, kind: str) -> tuple[Graph, ...]:
    if n == 1:
        return (Graph(1, ()),)
    found: dict = {}
    for h in _connected(n - 1, kind):
        if kind == "trees":
            subsets = [(v,) for v in range(h.n)]
        elif kind == "bipartite":
            x, y = _colour_classes(h)
            subsets = [
                s for side in (x, y) for k in range(1, len(side) + 1) for s in itertools.combinations(side, k)
            ]
        else:
            subsets = [s for k in range(1, h.n + 1) for s in itertools.combinations(range(h.n), k)]
        for s in subsets:
            g = _extend(h, s)
            key = canonical_code(g)
            if key not in found:
                found[key] = g
    return _sorted_classes({k: canonical_form(g) for k, g in found.items()})


def enumerate_connected(n: int, kind: GraphClass = "all") -> Iterator[Graph]:
    """Yield one canonically labelled representative per isomorphism class.

    ``kind`` selects all connected graphs, trees, or connected bipartite
    graphs.  Raises :class:`ResourceError` above the configured cap.
    """
    if kind not in DEFAULT_CAPS:
        raise GraphError(f"unknown graph class {kind!r}")
    if n < 1:
        raise GraphError(f"n must be at least 1, got {n}")
    cap = _cap(kind)
    if n > cap:
        raise ResourceError(f"n={n} exceeds the enumeration cap {cap} for class {kind!r}")
    yield from _connected(n, kind)


def count_connected(n: int, kind: GraphClass = "all") -> int:
    return sum(1 for _ in enumerate_connected(n, kind))


def brute_force_classes(n: int, kind: GraphClass = "all") -> set:
    """Reference oracle: all edge subsets of K_n, filtered and deduplicated.

    Exponential in ``n(n-1)/2``; intended for ``n <= 6`` (trees up to 8).
    """
    pairs = list(itertools.combinations(range(n), 2))
    keys = set()
    if kind == "trees":
        subsets = itertools.combinations(pairs, n - 1) if n > 1 else [()]
    else:
        subsets = (tuple(p for i, p in enumerate(pairs) if mask >> i & 1) for mask in range(1 << len(pairs)))
    for es in subsets:
        g = Graph(n, tuple(es))
        if not g.is_connected():
            continue
        if kind == "trees" and not g.is_tree():
            continue
        if kind == "bipartite" and not _is_bipartite(g):
            continue
        keys.add(canonical_code(g))
    return keys


def _is_bipartite(g: Graph) -> bool:
    colour = [-1] * g.n
    for s in range(g.n):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in g.neighbors(x):
                if colour[y] < 0:
                    colour[y] = 1 - colour[x]
                    stack.append(y)
                elif colour[y] == colour[x]:
                    return False
    return True


DEFAULT_EDGE_CAP = 11


@lru_cache(maxsize=None)
def _connected_by_edges(m: int) -> tuple[Graph, ...]:
    if m == 0:
        return (Graph(1, ()),)
    found: dict = {}
    for h in _connected_by_edges(m - 1):
        candidates = [_extend(h, (v,)) for v in range(h.n)]
        candidates += [
            Graph(h.n, tuple(sorted(h.edges + ((u, v),))))
            for u, v in itertools.combinations(range(h.n), 2)
            if not h.has_edge(u, v)
        ]
        for g in candidates:
            key = canonical_code(g)
            if key not in found:
                found[key] = g
    return _sorted_classes({k: canonical_form(g) for k, g in found.items()})


def enumerate_by_edges(m: int) -> Iterator[Graph]:
    """One representative per class of connected graphs with exactly ``m`` edges.

    A connected graph with ``m >= 1`` edges loses either a cycle edge or a
    pendant vertex and stays connected, so growing by one edge (new pendant
    vertex or chord) from ``m - 1`` edges reaches every class.
    """
    if m < 0:
        raise GraphError(f"edge count must be non-negative, got {m}")
    cap = int(os.environ.get("SPECTRA_CERT_CAP_EDGES", DEFAULT_EDGE_CAP))
    if m > cap:
        raise ResourceError(f"m={m} exceeds the edge enumeration cap {cap}")
    yield from _connected_by_edges(m)
