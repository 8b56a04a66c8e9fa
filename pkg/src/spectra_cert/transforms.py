"""Named graph families and the structural transformations used in the checks.

Covers bipartitions and the spanning-tree bipartite reduction, subdivision
and line graphs, vertex/edge deletion with component bookkeeping, sun graphs,
and one-branch tree shifts that move a pendant arm to the end of another.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import ContractViolation, Graph, GraphError


# -- families ------------------------------------------------------------------


@dataclass(frozen=True)
class SunSpec:
    """Even cycle with one pendant leaf on each loaded cycle position."""

    cycle_len: int
    loaded: frozenset[int]

    def __post_init__(self) -> None:
        if self.cycle_len < 4 or self.cycle_len % 2:
            raise GraphError(f"sun cycle length must be even and at least 4, got {self.cycle_len}")
        object.__setattr__(self, "loaded", frozenset(self.loaded))
        if any(not 0 <= p < self.cycle_len for p in self.loaded):
            raise GraphError("loaded positions must lie on the cycle")

    def is_three_separated(self) -> bool:
        """Loaded positions pairwise at cyclic distance at least 3."""
        pos = sorted(self.loaded)
        for i, p in enumerate(pos):
            for q in pos[i + 1 :]:
                d = min(q - p, self.cycle_len - (q - p))
                if d < 3:
                    return False
        return True


def path(n: int) -> Graph:
    if n < 1:
        raise GraphError(f"path needs n >= 1, got {n}")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"cycle needs n >= 3, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(n: int) -> Graph:
    """Star on ``n`` vertices with centre 0."""
    if n < 1:
        raise GraphError(f"star needs n >= 1, got {n}")
    return Graph(n, tuple((0, i) for i in range(1, n)))


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphError(f"complete graph needs n >= 1, got {n}")
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise GraphError("complete bipartite sides must be non-empty")
    return Graph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def sun(spec: SunSpec) -> Graph:
    """Cycle on ``0..L-1`` followed by one leaf per loaded position, in position order."""
    L = spec.cycle_len
    edges = [(i, (i + 1) % L) for i in range(L)]
    for k, p in enumerate(sorted(spec.loaded)):
        edges.append((p, L + k))
    return Graph.from_edges(L + len(spec.loaded), edges)


def spider(legs: Sequence[int]) -> Graph:
    """Centre 0 with pendant paths of the given lengths, labelled leg by leg."""
    edges = []
    nxt = 1
    for length in legs:
        if length < 1:
            raise GraphError("spider legs must have positive length")
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph.from_edges(nxt, edges)


def make_family(kind: str, size) -> Graph:
    """Dispatch by family name: path, cycle, star, complete, complete_bipartite, sun, spider."""
    if kind == "path":
        return path(size)
    if kind == "cycle":
        return cycle(size)
    if kind == "star":
        return star(size)
    if kind == "complete":
        return complete(size)
    if kind == "complete_bipartite":
        a, b = size
        return complete_bipartite(a, b)
    if kind == "sun":
        return sun(size if isinstance(size, SunSpec) else SunSpec(*size))
    if kind == "spider":
        return spider(size)
    raise GraphError(f"unknown family {kind!r}")


# -- bipartitions ----------------------------------------------------------------


@dataclass(frozen=True)
class Bipartition:
    left: frozenset[int]
    right: frozenset[int]

    def side_of(self, v: int) -> int:
        return 0 if v in self.left else 1

    def check(self, g: Graph) -> None:
        if self.left & self.right or len(self.left) + len(self.right) != g.n:
            raise GraphError("bipartition must split the vertex set")
        for u, v in g.edges:
            if (u in self.left) == (v in self.left):
                raise GraphError(f"edge {(u, v)} does not cross the bipartition")


def bipartition_of(g: Graph) -> Bipartition | None:
    """BFS 2-colouring, component roots on the left; ``None`` for non-bipartite graphs."""
    colour = [-1] * g.n
    for s in range(g.n):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in sorted(g.neighbors(x)):
                if colour[y] < 0:
                    colour[y] = 1 - colour[x]
                    queue.append(y)
                elif colour[y] == colour[x]:
                    return None
    return Bipartition(
        frozenset(v for v in range(g.n) if colour[v] == 0),
        frozenset(v for v in range(g.n) if colour[v] == 1),
    )


def bfs_tree_parent(g: Graph, root: int = 0) -> list[int]:
    """Parent array of the BFS tree (neighbours visited in increasing order); root maps to -1."""
    parent = [-2] * g.n
    parent[root] = -1
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in sorted(g.neighbors(x)):
            if parent[y] == -2:
                parent[y] = x
                queue.append(y)
    return parent


def bipartite_reduction(g: Graph) -> Graph:
    """Connected bipartite spanning subgraph: edges crossing the BFS-tree 2-colouring from vertex 0."""
    if not g.is_connected():
        raise ContractViolation("bipartite reduction needs a connected graph")
    if g.n == 0:
        return g
    depth = [0] * g.n
    parent = bfs_tree_parent(g, 0)
    order = deque([0])
    seen = {0}
    while order:
        x = order.popleft()
        for y in sorted(g.neighbors(x)):
            if y not in seen and parent[y] == x:
                depth[y] = depth[x] + 1
                seen.add(y)
                order.append(y)
    keep = [i for i, (u, v) in enumerate(g.edges) if depth[u] % 2 != depth[v] % 2]
    edges = tuple(g.edges[i] for i in keep)
    weights = tuple(g.weights[i] for i in keep) if g.weights is not None else None
    return Graph(g.n, edges, weights)


# -- incidence, subdivision, line graph --------------------------------------------


def incidence_matrix(g: Graph) -> list[list[int]]:
    """Unsigned vertex-edge incidence matrix (``n`` rows, one column per edge in edge order)."""
    rows = [[0] * g.m for _ in range(g.n)]
    for j, (u, v) in enumerate(g.edges):
        rows[u][j] = 1
        rows[v][j] = 1
    return rows


def subdivision(g: Graph) -> Graph:
    """Insert a midpoint on every edge; the midpoint of edge ``j`` gets label ``n + j``."""
    edges = []
    for j, (u, v) in enumerate(g.edges):
        edges.append((u, g.n + j))
        edges.append((v, g.n + j))
    return Graph.from_edges(g.n + g.m, edges)


def line_graph(g: Graph) -> Graph:
    """Vertices are the edge indices of ``g``; two are adjacent when the edges share an endpoint."""
    if g.m == 0:
        raise GraphError("line graph of an edgeless graph is empty")
    at: list[list[int]] = [[] for _ in range(g.n)]
    for j, (u, v) in enumerate(g.edges):
        at[u].append(j)
        at[v].append(j)
    edges = set()
    for lst in at:
        for i in range(len(lst)):
            for k in range(i + 1, len(lst)):
                edges.add((lst[i], lst[k]))
    return Graph(g.m, tuple(sorted(edges)))


# -- deletions ------------------------------------------------------------------------


@dataclass(frozen=True)
class Component:
    graph: Graph
    back_map: tuple[int, ...]  # component vertex -> vertex of the original graph


@dataclass(frozen=True)
class VertexDeletion:
    graph: Graph
    back_map: tuple[int, ...]  # vertex of graph -> vertex of the original graph
    components: tuple[Component, ...]


def delete_vertex(g: Graph, v: int) -> VertexDeletion:
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} not in graph with {g.n} vertices")
    keep = [w for w in range(g.n) if w != v]
    h, back = g.induced(keep)
    comps = []
    for c in h.components():
        sub, sub_back = h.induced(c)
        comps.append(Component(sub, tuple(back[i] for i in sub_back)))
    return VertexDeletion(h, tuple(back), tuple(comps))


def delete_edge(g: Graph, e: Sequence[int]) -> Graph:
    u, v = sorted((int(e[0]), int(e[1])))
    if not g.has_edge(u, v):
        raise GraphError(f"edge {(u, v)} not in graph")
    idx = g.edges.index((u, v))
    edges = g.edges[:idx] + g.edges[idx + 1 :]
    weights = g.weights[:idx] + g.weights[idx + 1 :] if g.weights is not None else None
    return Graph(g.n, edges, weights)


def add_vertex(g: Graph, nbrs: Sequence[int]) -> Graph:
    """Append vertex ``n`` joined to ``nbrs``."""
    return Graph.from_edges(g.n + 1, list(g.edges) + [(u, g.n) for u in nbrs])


# -- tree shifts -------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeShiftStep:
    """Branch vertex ``v`` with pendant arms ``v-u1-..-ua`` and ``v-w1-..-wb``.

    Applying the step deletes ``v w1`` and adds ``ua w1``, so arm ``b`` is
    re-attached to the far end of arm ``a``.
    """

    v: int
    arm_a: tuple[int, ...]
    arm_b: tuple[int, ...]


def _is_pendant_arm(t: Graph, v: int, arm: Sequence[int]) -> bool:
    if not arm or not t.has_edge(v, arm[0]):
        return False
    prev = v
    for i, x in enumerate(arm):
        if not t.has_edge(prev, x):
            return False
        last = i == len(arm) - 1
        if t.degree(x) != (1 if last else 2):
            return False
        prev = x
    return True


def validate_step(t: Graph, step: TreeShiftStep, require_branching: bool = True) -> None:
    if not t.is_tree():
        raise ContractViolation("tree shift needs a tree")
    if not 0 <= step.v < t.n:
        raise ContractViolation(f"branch vertex {step.v} out of range")
    if set(step.arm_a) & set(step.arm_b) or step.v in step.arm_a or step.v in step.arm_b:
        raise ContractViolation("arms must be disjoint and avoid the branch vertex")
    if not (_is_pendant_arm(t, step.v, step.arm_a) and _is_pendant_arm(t, step.v, step.arm_b)):
        raise ContractViolation("arms must be pendant paths starting at the branch vertex")
    if require_branching and t.degree(step.v) < 3:
        raise ContractViolation("shift needs a branching vertex (degree at least 3)")


def _bfs_dist(t: Graph, root: int) -> tuple[list[int], list[int]]:
    dist = [-1] * t.n
    parent = [-1] * t.n
    dist[root] = 0
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in sorted(t.neighbors(x)):
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                parent[y] = x
                queue.append(y)
    return dist, parent


def find_tree_shift(t: Graph) -> TreeShiftStep | None:
    """Deterministic shift step, or ``None`` when ``t`` is already a path.

    Roots ``t`` at its lowest-index leaf, picks a branching vertex farthest
    from the root (lowest index on ties), and takes its two lexicographically
    smallest arms pointing away from the root.  Every subtree hanging below a
    farthest branching vertex is a path, so those arms are pendant.
    """
    if not t.is_tree():
        raise ContractViolation("find_tree_shift needs a tree")
    branching = [v for v in range(t.n) if t.degree(v) >= 3]
    if not branching:
        return None
    root = min(t.leaves())
    dist, parent = _bfs_dist(t, root)
    v = min(branching, key=lambda x: (-dist[x], x))
    arms = []
    for c in sorted(t.neighbors(v)):
        if c == parent[v]:
            continue
        arm = [c]
        while t.degree(arm[-1]) == 2:
            nxt = [y for y in t.neighbors(arm[-1]) if y != (arm[-2] if len(arm) > 1 else v)]
            arm.append(nxt[0])
        arms.append(tuple(arm))
    arms.sort()
    return TreeShiftStep(v, arms[0], arms[1])


def pendant_arms(t: Graph, v: int) -> list[tuple[int, ...]]:
    """Every pendant path leaving ``v`` (walk through degree-2 vertices until a leaf)."""
    arms = []
    for c in sorted(t.neighbors(v)):
        arm = [c]
        prev = v
        while t.degree(arm[-1]) == 2:
            nxt = [y for y in t.neighbors(arm[-1]) if y != prev]
            prev = arm[-1]
            arm.append(nxt[0])
        if t.degree(arm[-1]) == 1:
            arms.append(tuple(arm))
    return arms


def all_tree_shifts(t: Graph) -> list[TreeShiftStep]:
    """Every valid shift step: a branching vertex with an ordered pair of distinct pendant arms."""
    if not t.is_tree():
        raise ContractViolation("all_tree_shifts needs a tree")
    steps = []
    for v in range(t.n):
        if t.degree(v) < 3:
            continue
        arms = pendant_arms(t, v)
        steps.extend(TreeShiftStep(v, a, b) for a in arms for b in arms if a != b)
    return steps


def apply_tree_shift(t: Graph, step: TreeShiftStep) -> Graph:
    validate_step(t, step)
    return _shift_edges(t, step)


def _shift_edges(t: Graph, step: TreeShiftStep) -> Graph:
    w1 = step.arm_b[0]
    ua = step.arm_a[-1]
    edges = [e for e in t.edges if e != tuple(sorted((step.v, w1)))]
    edges.append((ua, w1))
    return Graph.from_edges(t.n, edges)


def shift_sequence(t: Graph) -> list[tuple[Graph, TreeShiftStep]]:
    """Iterate find/apply until a path is reached; returns (tree before, step) pairs."""
    out = []
    cur = t
    while (step := find_tree_shift(cur)) is not None:
        out.append((cur, step))
        cur = apply_tree_shift(cur, step)
    return out


def with_weight(g: Graph, overrides: dict[tuple[int, int], Fraction]) -> Graph:
    """Copy of ``g`` with selected edge weights replaced (other edges keep theirs)."""
    ws = []
    for u, v, w in g.weighted_edges():
        ws.append(Fraction(overrides.get((u, v), w)))
    return Graph(g.n, g.edges, tuple(ws))
