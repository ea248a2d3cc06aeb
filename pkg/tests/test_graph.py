import io
import math
import json

import pytest
from hypothesis import given, settings

from tiestrength.graph import (EdgeClass, EdgeListError, Graph, absent_pairs, analyze, bundles,
                               classify_edges, contract, detect_clique_components,
                               enumerate_triangles, enumerate_wedges, load_edge_list,
                               strip_clique_components, triangle_cliques)

from conftest import (brute_triangles, brute_wedges, figure2_graph, graph_from, path3, small_graphs,
                      star, triangle_plus_pendant)


def test_load_two_edge_path():
    el = load_edge_list("1 2\n2 3\n")
    assert el.graph.node_count == 3
    assert el.graph.edge_count == 2
    assert el.ground_truth is None


def test_duplicates_collapse_with_warning_count():
    el = load_edge_list("1 2 5.0\n1 2 5.0\n", weighted=True)
    assert el.graph.edge_count == 1
    assert len(el.warnings) == 1 and "duplicate" in el.warnings[0]


def test_separators_comments_and_self_loops():
    el = load_edge_list("# header\na,b\nb\tc\nc c\n\nc d 2\n")
    assert el.graph.node_labels == ("a", "b", "c", "d")
    assert el.graph.edge_count == 3
    assert [w for w in el.warnings if "self-loop" in w] == [el.warnings[0]]


def test_weighted_ground_truth():
    el = load_edge_list("x y 10\ny z 2\n", weighted=True)
    g, gt = el.graph, el.ground_truth
    assert gt.get((0, 1)) == 10
    assert gt.get((1, 2)) == 2
    assert gt.range == (2, 10)


@pytest.mark.parametrize("text", ["1\n", "1 2 3 4\n", "a b notanumber\n"])
def test_malformed_line_reports_line_number(text):
    with pytest.raises(EdgeListError, match="line 1"):
        load_edge_list(text, weighted=True)


def test_empty_graph_rejected():
    with pytest.raises(EdgeListError):
        load_edge_list("# nothing\n\n")


def test_lesmis_size(lesmis):
    assert lesmis.graph.node_count == 77
    assert lesmis.graph.edge_count == 254
    assert len(lesmis.ground_truth) == 254


def test_path_has_one_wedge():
    g = path3()
    assert [tuple(w) for w in enumerate_wedges(g)] == [(1, 0, 2)]
    assert enumerate_triangles(g) == []


def test_triangle_has_no_wedge():
    g = Graph(3, [(0, 1), (1, 2), (0, 2)])
    assert enumerate_wedges(g) == []
    assert [tuple(t) for t in enumerate_triangles(g)] == [(0, 1, 2)]


def test_star_wedges():
    assert len(enumerate_wedges(star(4))) == 6


def test_toy_counts(toy):
    assert len(enumerate_wedges(toy)) == len(brute_wedges(toy))
    assert len(enumerate_triangles(toy)) == len(brute_triangles(toy))
    assert len(absent_pairs(enumerate_wedges(toy))) == len({(j, k) for _, j, k in brute_wedges(toy)})


@settings(max_examples=150, deadline=None)
@given(small_graphs())
def test_wedges_and_triangles_match_brute_force(g):
    ws = enumerate_wedges(g)
    assert {tuple(w) for w in ws} == brute_wedges(g)
    assert len(ws) == len(set(ws))
    assert ws == sorted(ws)
    ts = enumerate_triangles(g)
    assert {tuple(t) for t in ts} == brute_triangles(g)
    assert len(ts) == len(set(ts))


@settings(max_examples=150, deadline=None)
@given(small_graphs())
def test_wedge_triangle_degree_identity(g):
    lhs = len(enumerate_wedges(g)) + 3 * len(enumerate_triangles(g))
    assert lhs == sum(math.comb(g.degree(i), 2) for i in range(g.node_count))


@settings(max_examples=150, deadline=None)
@given(small_graphs())
def test_classification_is_a_partition(g):
    cls = classify_edges(g)
    assert len(cls.classes) == g.edge_count
    for eid, c in enumerate(cls.classes):
        if cls.in_wedge[eid] and c is not EdgeClass.ISOLATED_CLIQUE:
            assert c is EdgeClass.WEDGE
        if c is EdgeClass.TRIANGLE:
            assert cls.in_triangle[eid] and not cls.in_wedge[eid]


def _clique_free(g):
    core, _ = strip_clique_components(g)
    return core


@settings(max_examples=150, deadline=None)
@given(small_graphs())
def test_triangle_cliques_are_cliques_and_bundles_are_full(g):
    g = _clique_free(g)
    cls = classify_edges(g)
    cliques = triangle_cliques(g, cls)
    for c in cliques:
        assert len(c.members) >= 2
        for i in c.members:
            for j in c.members:
                if i < j:
                    assert g.has_edge(i, j)
                    assert cls.is_triangle_edge(g.edge_id(i, j))
    for b in bundles(g, cliques):
        assert all(g.has_edge(*r) for r in b.rays)
        assert len(b.rays) == len(cliques[b.clique_id].members)


@settings(max_examples=150, deadline=None)
@given(small_graphs())
def test_contraction_conserves_edges(g):
    g = _clique_free(g)
    cg = contract(g)
    seen = sorted(u for a in cg.super_nodes for u in a)
    assert seen == list(range(g.node_count))
    cliques = {c.members for c in triangle_cliques(g)}
    for a in cg.super_nodes:
        assert (len(a) >= 2) == (a in cliques)
    total = sum(cg.clique_weight(a) for a in range(len(cg.super_nodes)))
    total += sum(cg.edge_weight(a, b) for a, b in cg.super_edges)
    assert total == g.edge_count


def test_clique_components_detected_and_stripped():
    # K3, K2 and an isolated node next to a path
    g = Graph(9, [(0, 1), (1, 2), (0, 2), (3, 4), (6, 7), (7, 8)])
    comps = detect_clique_components(g)
    assert comps == [[0, 1, 2], [3, 4]]
    core, removed = strip_clique_components(g)
    assert removed == comps
    assert core.edges == ((6, 7), (7, 8))
    assert core.node_count == g.node_count


def test_triangle_plus_pendant_classes():
    g = triangle_plus_pendant()
    cls = classify_edges(g)
    assert cls.of(g, 0, 1) is EdgeClass.TRIANGLE
    assert cls.of(g, 0, 2) is EdgeClass.WEDGE
    assert cls.of(g, 2, 3) is EdgeClass.WEDGE
    assert [c.members for c in triangle_cliques(g)] == [(0, 1)]


def test_figure2_contraction():
    g = figure2_graph()
    cg = contract(g)
    sizes = sorted(len(a) for a in cg.super_nodes)
    assert sizes == [1, 1, 1, 3, 6]
    # y plus two cliques plus b1, b2; rays y-z, y-x, b1-x, b2-x
    assert len(cg.super_edges) == 4
    back = cg.back_map
    assert cg.edge_weight(back[0], back[1]) == 6
    assert cg.edge_weight(back[0], back[7]) == 3
    assert cg.clique_weight(back[1]) == 15


def test_toy_contraction(toy):
    cg = contract(toy)
    big = [a for a in cg.super_nodes if len(a) > 1]
    assert [[toy.label(u) for u in a] for a in big] == [["6", "7", "8"]]


def test_analyze_json_is_serializable(toy):
    info = analyze(toy)
    json.dumps(info)
    assert info["nodes"] == 8 and info["edges"] == 12
    assert info["triangle_clique_sizes"] == [3]


def test_graph_rejects_bad_input():
    with pytest.raises(ValueError):
        Graph(2, [(0, 0)])
    with pytest.raises(ValueError):
        Graph(2, [(0, 2)])


def test_labels_follow_first_appearance():
    g = load_edge_list(io.StringIO("b a\nc b\n")).graph
    assert g.node_labels == ("b", "a", "c")
    assert graph_from([(1, 2)]).node_labels == ("1", "2")
