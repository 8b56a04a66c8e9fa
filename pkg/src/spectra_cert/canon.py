"""Canonical labelling of small graphs.

Individualisation-refinement search: the vertex partition is refined to an
equitable one, a vertex of the first non-trivial cell is individualised, and
the search recurses until the partition is discrete.  Every discrete leaf
gives a relabelled adjacency code and the canonical form is the largest code.
Leaves with identical codes reveal automorphisms, which are used to skip
children lying in an already explored orbit.

The routine is exact for any graph; it is fast enough for the enumeration
caps used here (up to 14 vertices).
"""

from __future__ import annotations

from typing import Sequence

from .graph import Graph

Code = tuple[int, ...]


def _refine(adj: Sequence[int], cells: list[list[int]]) -> list[list[int]]:
    """Split cells until every vertex of a cell sees each cell equally often."""
    while True:
        masks = []
        for c in cells:
            m = 0
            for v in c:
                m |= 1 << v
            masks.append(m)
        out: list[list[int]] = []
        split = False
        for c in cells:
            if len(c) == 1:
                out.append(c)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in c:
                a = adj[v]
                sig = tuple((a & m).bit_count() for m in masks)
                groups.setdefault(sig, []).append(v)
            if len(groups) == 1:
                out.append(c)
            else:
                split = True
                for sig in sorted(groups):
                    out.append(groups[sig])
        cells = out
        if not split:
            return cells


def _leaf_code(adj: Sequence[int], order: Sequence[int]) -> Code:
    pos = [0] * len(order)
    for k, v in enumerate(order):
        pos[v] = k
    rows = []
    for v in order:
        a = adj[v]
        r = 0
        while a:
            low = a & -a
            r |= 1 << pos[low.bit_length() - 1]
            a ^= low
        rows.append(r)
    return tuple(rows)


class _Search:
    def __init__(self, adj: Sequence[int]):
        self.adj = adj
        self.n = len(adj)
        self.best: Code | None = None
        self.best_order: list[int] | None = None
        self.leaves: dict[Code, list[int]] = {}
        self.autos: list[list[int]] = []

    def run(self) -> None:
        init = [list(range(self.n))] if self.n else []
        self._visit(_refine(self.adj, init), [])

    def _orbit_roots(self, fixed: Sequence[int], cell: Sequence[int]) -> dict[int, int]:
        parent = {v: v for v in cell}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.autos:
            if all(g[f] == f for f in fixed):
                for v in cell:
                    w = g[v]
                    if w in parent:
                        rv, rw = find(v), find(w)
                        if rv != rw:
                            parent[max(rv, rw)] = min(rv, rw)
        return {v: find(v) for v in cell}

    def _visit(self, cells: list[list[int]], fixed: list[int]) -> None:
        target = next((c for c in cells if len(c) > 1), None)
        if target is None:
            order = [c[0] for c in cells]
            code = _leaf_code(self.adj, order)
            prev = self.leaves.get(code)
            if prev is not None:
                # prev and order give the same relabelled graph: their
                # composition is an automorphism.
                pos = [0] * self.n
                for k, v in enumerate(order):
                    pos[v] = k
                self.autos.append([prev[pos[v]] for v in range(self.n)])
            else:
                self.leaves[code] = order
            if self.best is None or code > self.best:
                self.best, self.best_order = code, order
            return
        idx = cells.index(target)
        explored: set[int] = set()
        for v in target:
            roots = self._orbit_roots(fixed, target)
            if roots[v] in explored:
                continue
            explored.add(roots[v])
            rest = [w for w in target if w != v]
            child = cells[:idx] + [[v], rest] + cells[idx + 1 :]
            self._visit(_refine(self.adj, child), fixed + [v])


def canonical_order(g: Graph) -> list[int]:
    """Vertex order whose relabelling is the canonical form of ``g``.

    ``order[k]`` is the original vertex placed at canonical position ``k``.
    Weights are ignored; use only for unweighted graphs.
    """
    s = _Search(g.bitmasks())
    s.run()
    return list(s.best_order or [])


def canonical_code(g: Graph) -> tuple[int, Code]:
    """Isomorphism-invariant key: equal keys iff the graphs are isomorphic."""
    s = _Search(g.bitmasks())
    s.run()
    return g.n, s.best or ()


def canonical_form(g: Graph) -> Graph:
    order = canonical_order(g)
    perm = [0] * g.n
    for k, v in enumerate(order):
        perm[v] = k
    return g.relabel(perm)


def automorphism_count(g: Graph) -> int:
    """Order of the automorphism group, by counting leaves equivalent to the best one.

    Uses a plain search without orbit pruning, so it is only suitable for
    graphs up to roughly eight vertices.
    """
    adj = g.bitmasks()
    n = g.n
    codes: list[Code] = []

    def visit(cells: list[list[int]]) -> None:
        target = next((c for c in cells if len(c) > 1), None)
        if target is None:
            codes.append(_leaf_code(adj, [c[0] for c in cells]))
            return
        idx = cells.index(target)
        for v in target:
            rest = [w for w in target if w != v]
            visit(_refine(adj, cells[:idx] + [[v], rest] + cells[idx + 1 :]))

    visit(_refine(adj, [list(range(n))] if n else []))
    best = max(codes) if codes else ()
    return sum(1 for c in codes if c == best) if codes else 1


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.m == h.m and canonical_code(g) == canonical_code(h)
