"""Simple undirected graphs with optional rational edge weights.

Graphs are immutable: every transformation returns a new instance.  Vertices
are always the dense range ``0..n-1`` and edges are stored as sorted pairs
``(u, v)`` with ``u < v``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Edge = tuple[int, int]


class GraphError(ValueError):
    """Raised for malformed graphs or invalid parameters."""


class ContractViolation(GraphError):
    """Raised when an operation's precondition does not hold (e.g. a disconnected input)."""


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """A finite simple graph on vertices ``0..n-1``.

    ``weights`` is either ``None`` (every edge has weight 1) or a tuple of
    positive rationals aligned with ``edges``.
    """

    n: int
    edges: tuple[Edge, ...]
    weights: tuple[Fraction, ...] | None = None
    _adj: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError(f"vertex count must be non-negative, got {self.n}")
        seen: set[Edge] = set()
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise GraphError(f"edge {(u, v)} is not a sorted pair inside 0..{self.n - 1}")
            if (u, v) in seen:
                raise GraphError(f"duplicate edge {(u, v)}")
            seen.add((u, v))
        if self.weights is not None:
            if len(self.weights) != len(self.edges):
                raise GraphError("weights must align with edges")
            for w in self.weights:
                if w < 0:
                    raise GraphError(f"negative edge weight {w}")
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        object.__setattr__(self, "_adj", tuple(frozenset(s) for s in nbrs))

    # -- construction -------------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Sequence[int]],
        weights: Mapping[Edge, Fraction | int] | Sequence[Fraction | int] | None = None,
    ) -> "Graph":
        """Build a graph from unsorted edges, normalising and sorting them.

        ``weights`` may be a mapping keyed by (either orientation of) the edge,
        or a sequence aligned with ``edges`` as given.
        """
        raw = [(int(e[0]), int(e[1])) for e in edges]
        if weights is None:
            return cls(n, tuple(sorted(_norm_edge(u, v) for u, v in raw)))
        if isinstance(weights, Mapping):
            wmap = {_norm_edge(*k): Fraction(w) for k, w in weights.items()}
            pairs = sorted((_norm_edge(u, v), wmap[_norm_edge(u, v)]) for u, v in raw)
        else:
            if len(weights) != len(raw):
                raise GraphError("weights must align with edges")
            pairs = sorted((_norm_edge(u, v), Fraction(w)) for (u, v), w in zip(raw, weights))
        return cls(n, tuple(e for e, _ in pairs), tuple(w for _, w in pairs))

    # -- basic queries ------------------------------------------------------

    @property
    def m(self) -> int:
        """Number of edges."""
        return len(self.edges)

    @property
    def is_weighted(self) -> bool:
        return self.weights is not None

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(s) for s in self._adj]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def weight(self, u: int, v: int) -> Fraction:
        e = _norm_edge(u, v)
        if not self.has_edge(*e):
            raise GraphError(f"no edge {e}")
        if self.weights is None:
            return Fraction(1)
        return self.weights[self.edges.index(e)]

    def weighted_edges(self) -> Iterator[tuple[int, int, Fraction]]:
        ws = self.weights if self.weights is not None else (Fraction(1),) * len(self.edges)
        for (u, v), w in zip(self.edges, ws):
            yield u, v, w

    def leaves(self) -> list[int]:
        return [v for v in range(self.n) if len(self._adj[v]) == 1]

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex lists, ordered by smallest vertex."""
        seen = [False] * self.n
        comps: list[list[int]] = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self._adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        queue.append(y)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def is_tree(self) -> bool:
        return self.n >= 1 and self.m == self.n - 1 and self.is_connected()

    def is_forest(self) -> bool:
        return self.m == self.n - len(self.components())

    def is_path(self) -> bool:
        if not self.is_tree():
            return False
        return all(d <= 2 for d in self.degrees())

    def adjacency(self) -> list[list[Fraction]]:
        """Dense adjacency matrix with exact weights."""
        a = [[Fraction(0)] * self.n for _ in range(self.n)]
        for u, v, w in self.weighted_edges():
            a[u][v] = a[v][u] = w
        return a

    def adjacency_float(self):
        import numpy as np

        a = np.zeros((self.n, self.n))
        for u, v, w in self.weighted_edges():
            a[u, v] = a[v, u] = float(w)
        return a

    def bitmasks(self) -> list[int]:
        """Neighbourhoods as integer bitmasks (bit ``j`` set when ``j`` is adjacent)."""
        return [sum(1 << j for j in s) for s in self._adj]

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        edges = [(perm[u], perm[v]) for u, v in self.edges]
        if self.weights is None:
            return Graph.from_edges(self.n, edges)
        return Graph.from_edges(self.n, edges, list(self.weights))

    def induced(self, vertices: Sequence[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``vertices`` (kept in the given order).

        Returns the subgraph together with the back-map ``new -> old``.
        """
        index = {old: new for new, old in enumerate(vertices)}
        edges: list[Edge] = []
        weights: list[Fraction] = []
        for u, v, w in self.weighted_edges():
            if u in index and v in index:
                edges.append((index[u], index[v]))
                weights.append(w)
        g = Graph.from_edges(len(vertices), edges, weights if self.weights is not None else None)
        return g, list(vertices)

    def __str__(self) -> str:
        return f"Graph(n={self.n}, edges={list(self.edges)})"


def disjoint_union(graphs: Sequence[Graph]) -> Graph:
    edges: list[Edge] = []
    weights: list[Fraction] = []
    offset = 0
    weighted = any(g.weights is not None for g in graphs)
    for g in graphs:
        for u, v, w in g.weighted_edges():
            edges.append((u + offset, v + offset))
            weights.append(w)
        offset += g.n
    return Graph.from_edges(offset, edges, weights if weighted else None)
