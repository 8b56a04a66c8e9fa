from __future__ import annotations

import itertools
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import assume, given

from conftest import graphs, trees
from spectra_cert.canon import automorphism_count, canonical_code, canonical_form, is_isomorphic
from spectra_cert.enumerate import (
    ResourceError,
    brute_force_classes,
    count_connected,
    enumerate_by_edges,
    enumerate_connected,
)
from spectra_cert.formats import FormatError, from_edge_list, from_graph6, read_graph6_lines, to_edge_list, to_graph6
from spectra_cert.graph import ContractViolation, Graph, GraphError
from spectra_cert.transforms import (
    SunSpec,
    all_tree_shifts,
    apply_tree_shift,
    bipartition_of,
    complete,
    complete_bipartite,
    cycle,
    delete_vertex,
    find_tree_shift,
    incidence_matrix,
    line_graph,
    path,
    shift_sequence,
    spider,
    star,
    subdivision,
    sun,
)


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


@pytest.mark.parametrize(
    "n, kind, expected",
    [
        (1, "all", 1), (2, "all", 1), (3, "all", 2), (4, "all", 6), (5, "all", 21), (6, "all", 112),
        (7, "all", 853), (8, "all", 11117),
        (6, "trees", 6), (8, "trees", 23), (10, "trees", 106), (12, "trees", 551),
        (4, "bipartite", 3), (6, "bipartite", 17), (8, "bipartite", 182),
    ],
)
def test_connected_class_counts(n, kind, expected):
    assert count_connected(n, kind) == expected


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_enumeration_matches_brute_force(n):
    found = {canonical_code(g) for g in enumerate_connected(n, "all")}
    assert found == brute_force_classes(n, "all")


@pytest.mark.parametrize("n", range(1, 8))
def test_enumeration_is_isomorphism_free_against_networkx(n):
    reps = [to_nx(g) for g in enumerate_connected(n, "all")]
    atlas = [h for h in nx.graph_atlas_g() if h.number_of_nodes() == n and nx.is_connected(h)] if n > 0 else []
    assert len(reps) == len(atlas)
    for h in atlas:
        assert sum(nx.is_isomorphic(h, r) for r in reps) == 1


@pytest.mark.parametrize("m, expected", list(enumerate([1, 1, 1, 3, 5, 12, 30, 79, 227, 710])))
def test_connected_counts_by_edges(m, expected):
    assert sum(1 for _ in enumerate_by_edges(m)) == expected


def test_enumeration_cap_raises():
    with pytest.raises(ResourceError):
        list(enumerate_connected(11, "all"))


@given(graphs(max_n=12))
def test_graph6_round_trip(g):
    assert from_graph6(to_graph6(g)) == Graph(g.n, g.edges)


@pytest.mark.parametrize("text, edges", [("A_", [(0, 1)]), ("Bw", [(0, 1), (0, 2), (1, 2)]), ("CF", [(0, 3), (1, 3), (2, 3)])])
def test_graph6_known_strings(text, edges):
    assert from_graph6(text) == Graph.from_edges(len(edges) and max(max(e) for e in edges) + 1, edges)


def test_graph6_large_order_header():
    g = path(70)
    assert to_graph6(g).startswith("~")
    assert from_graph6(to_graph6(g)) == g


def test_graph6_error_names_line():
    with pytest.raises(FormatError, match="line 3"):
        list(read_graph6_lines(["A_", "", "A!", "Bw"]))


def test_edge_list_round_trip_with_weights():
    g = Graph.from_edges(3, [(0, 1), (1, 2)], [Fraction(1, 2), Fraction(3)])
    assert from_edge_list(to_edge_list(g)) == g


@given(graphs(max_n=8))
def test_canonical_form_invariant_under_relabelling(g):
    perm = list(reversed(range(g.n)))
    assert canonical_code(g) == canonical_code(g.relabel(perm))
    assert is_isomorphic(canonical_form(g), g)


@given(graphs(max_n=7))
def test_automorphism_count_matches_networkx(g):
    matcher = nx.algorithms.isomorphism.GraphMatcher(to_nx(g), to_nx(g))
    assert automorphism_count(g) == sum(1 for _ in matcher.isomorphisms_iter())


@pytest.mark.parametrize(
    "g, autos",
    [(path(5), 2), (cycle(6), 12), (star(5), 24), (complete(4), 24), (complete_bipartite(2, 3), 12)],
)
def test_automorphism_counts_of_families(g, autos):
    assert automorphism_count(g) == autos


@pytest.mark.parametrize("bad", [(3, [(0, 0)]), (3, [(0, 1), (1, 0)]), (2, [(0, 2)])])
def test_graph_rejects_malformed_edges(bad):
    n, edges = bad
    with pytest.raises(GraphError):
        Graph.from_edges(n, edges)


@given(graphs(max_n=8))
def test_bipartition_agrees_with_networkx(g):
    bip = bipartition_of(g)
    assert (bip is not None) == nx.is_bipartite(to_nx(g))
    if bip is not None:
        assert all((u in bip.left) != (v in bip.left) for u, v in g.edges)


@given(graphs(max_n=8))
def test_line_graph_matches_networkx(g):
    assume(g.m > 0)
    lg = line_graph(g)
    assert nx.is_isomorphic(to_nx(lg), nx.line_graph(to_nx(g)))


@given(graphs(max_n=8))
def test_incidence_matrix_gives_signless_laplacian(g):
    inc = incidence_matrix(g)
    q = [[sum(inc[i][e] * inc[j][e] for e in range(g.m)) for j in range(g.n)] for i in range(g.n)]
    for i in range(g.n):
        for j in range(g.n):
            expected = g.degree(i) if i == j else int(g.has_edge(i, j))
            assert q[i][j] == expected


@given(graphs(max_n=7))
def test_subdivision_doubles_edges(g):
    s = subdivision(g)
    assert s.n == g.n + g.m and s.m == 2 * g.m and bipartition_of(s) is not None


def test_delete_vertex_reports_components():
    d = delete_vertex(star(4), 0)
    assert d.graph.m == 0 and len(d.components) == 3


@pytest.mark.parametrize("legs", [(1, 1, 1), (2, 1, 1), (3, 2, 2), (1, 1, 1, 1)])
def test_spider_shape(legs):
    g = spider(legs)
    assert g.is_tree() and g.n == 1 + sum(legs) and sorted(g.degrees())[-1] == len(legs)


def test_sun_layout_and_separation():
    spec = SunSpec(8, frozenset({0, 4}))
    g = sun(spec)
    assert g.n == 10 and g.m == 10 and spec.is_three_separated()
    assert not SunSpec(8, frozenset({0, 2})).is_three_separated()


@given(trees(min_n=4, max_n=11))
def test_shift_sequence_reaches_path(t):
    seq = shift_sequence(t)
    cur = t
    for before, step in seq:
        assert before == cur
        nxt = apply_tree_shift(cur, step)
        assert len(nxt.leaves()) == len(cur.leaves()) - 1
        cur = nxt
    assert cur.is_path()


@given(trees(min_n=4, max_n=10))
def test_all_tree_shifts_are_valid_and_include_default(t):
    steps = all_tree_shifts(t)
    for step in steps:
        assert apply_tree_shift(t, step).is_tree()
    default = find_tree_shift(t)
    assert (default is None) == (not steps)
    if default is not None:
        assert default in steps


def test_line_graph_of_edgeless_graph_is_rejected():
    with pytest.raises(GraphError):
        line_graph(Graph(3, ()))


def test_shift_rejects_non_tree():
    with pytest.raises(ContractViolation):
        find_tree_shift(cycle(5))


def test_star_with_three_leaves_has_six_ordered_shifts():
    assert len(all_tree_shifts(star(4))) == 6


@pytest.mark.parametrize("n", [2, 5, 9])
def test_path_and_cycle_basics(n):
    assert path(n).is_path() and path(n).m == n - 1
    if n >= 3:
        assert cycle(n).m == n and all(d == 2 for d in cycle(n).degrees())


def test_complete_bipartite_edges():
    g = complete_bipartite(2, 3)
    assert g.m == 6 and all(g.has_edge(u, v) for u, v in itertools.product(range(2), range(2, 5)))
