import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import codednet as cn
from codednet.efficiency import EfficiencyClass
from codednet.labeling import parent_label, tree_is_efficient, trim_label
from codednet.network import InfeasibleError

from conftest import path_graph

EXAMPLE_TREE_EDGES = [("6", "4"), ("4", "3"), ("4", "5"), ("5", "2"), ("5", "1")]

EXAMPLE_LABELS = {
    "6": (0, 0, 0, 0, 0),
    "4": (1, 0, 0, 0, 0),
    "3": (1, 1, 0, 0, 0),
    "5": (1, 0, 1, 0, 0),
    "2": (1, 0, 1, 1, 0),
    "1": (1, 0, 1, 0, 1),
}


def random_tree(rng: np.random.Generator, n: int) -> cn.SpanningTree:
    tree = cn.SpanningTree("0")
    for v in range(1, n):
        tree._attach(str(int(rng.integers(0, v))), str(v))
    return tree


# ---------------------------------------------------------------------------
# Spanning trees


def test_tree_from_edges_infers_root():
    tree = cn.SpanningTree.from_edges(EXAMPLE_TREE_EDGES)
    assert tree.root == "6"
    assert tree.children("5") == ("2", "1")  # edge-list order preserved
    assert tree.diameter() == 3


def test_tree_from_edges_rejects_double_parent():
    with pytest.raises(ValueError, match="already has a parent"):
        cn.SpanningTree.from_edges([("a", "b"), ("a", "c"), ("c", "b")], root="a")


def test_tree_from_edges_rejects_detached_edge():
    with pytest.raises(ValueError, match="unplaced parent"):
        cn.SpanningTree.from_edges([("a", "b"), ("x", "y")], root="a")


def test_bfs_tree(figure1):
    tree = cn.SpanningTree.bfs(figure1, "4")
    assert tree.root == "4"
    assert len(tree) == 6
    assert tree.children("4") == ("3", "5", "6")  # ascending


def test_bfs_tree_disconnected():
    net = cn.SocialNetwork([("a", "b"), ("c", "d")])
    with pytest.raises(InfeasibleError):
        cn.SpanningTree.bfs(net, "a")


def test_path_between():
    tree = cn.SpanningTree.from_edges(EXAMPLE_TREE_EDGES)
    assert tree.path_between("3", "2").vertices == ("3", "4", "5", "2")
    assert tree.path_between("6", "6").vertices == ("6",)


# ---------------------------------------------------------------------------
# Label assignment


def test_example_labels_reproduced():
    tree = cn.SpanningTree.from_edges(EXAMPLE_TREE_EDGES)
    lab = cn.assign_labels(tree, 2)
    assert lab.length == 5
    assert lab.labels == EXAMPLE_LABELS
    assert set(lab.image()) == set(EXAMPLE_LABELS.values())


def test_single_vertex_tree():
    lab = cn.assign_labels(cn.SpanningTree("only"), 2)
    assert lab.length == 0
    assert lab.labels == {"only": ()}


def test_star_two_children_binary():
    tree = cn.SpanningTree("r", [("r", "a"), ("r", "b")])
    lab = cn.assign_labels(tree, 2)
    assert lab.labels == {"r": (0, 0), "a": (1, 0), "b": (0, 1)}


def test_wide_star_fallback_shifts_right():
    tree = cn.SpanningTree("r", [("r", c) for c in "abcd"])
    lab = cn.assign_labels(tree, 2)
    assert lab.labels["a"] == (1, 0, 0, 0)
    assert lab.labels["b"] == (0, 1, 0, 0)
    assert lab.labels["c"] == (0, 0, 1, 0)
    assert lab.labels["d"] == (0, 0, 0, 1)


def test_larger_field_uses_more_values():
    tree = cn.SpanningTree("r", [("r", c) for c in "abc"])
    lab = cn.assign_labels(tree, 5)
    assert lab.labels == {"r": (0,), "a": (1,), "b": (2,), "c": (3,)}


def test_assign_labels_rejects_composite_field():
    with pytest.raises(ValueError):
        cn.assign_labels(cn.SpanningTree("r"), 6)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 60), st.sampled_from([2, 3, 5]))
def test_labeling_properties_random_trees(seed, n, q):
    tree = random_tree(np.random.default_rng(seed), n)
    lab = cn.assign_labels(tree, q)
    labels = lab.labels
    # injective
    assert len(set(labels.values())) == len(labels)
    # zeroing the last nonzero symbol of any non-root label gives the parent
    for v in tree.vertices:
        if v == tree.root:
            continue
        parent = tree.parent(v)
        assert parent_label(trim_label(labels[v])) == trim_label(labels[parent])


def test_labeling_injective_ten_thousand_vertices():
    tree = random_tree(np.random.default_rng(123), 10_000)
    lab = cn.assign_labels(tree, 2)
    assert len(set(lab.labels.values())) == 10_000
    for v in ("1", "777", "9999"):
        assert parent_label(trim_label(lab.labels[v])) == trim_label(
            lab.labels[tree.parent(v)]
        )


def test_route_all_pairs_two_hundred_vertices():
    tree = random_tree(np.random.default_rng(321), 200)
    lab = cn.assign_labels(tree, 2)
    verts = tree.vertices
    for a in verts:
        for b in verts:
            assert cn.route(lab, a, b).vertices == tree.path_between(a, b).vertices


# ---------------------------------------------------------------------------
# Routing


def test_example_routes():
    lab = cn.assign_labels(cn.SpanningTree.from_edges(EXAMPLE_TREE_EDGES), 2)
    assert cn.route(lab, "6", "1").vertices == ("6", "4", "5", "1")
    assert cn.route(lab, "3", "2").vertices == ("3", "4", "5", "2")
    assert cn.route(lab, "1", "1").vertices == ("1",)


def test_example_next_hops():
    lab = cn.assign_labels(cn.SpanningTree.from_edges(EXAMPLE_TREE_EDGES), 2)
    assert cn.next_hop(lab, "6", "1") == "4"
    assert cn.next_hop(lab, "3", "2") == "4"
    assert cn.next_hop(lab, "5", "1") == "1"  # parent descends straight to child
    with pytest.raises(ValueError):
        cn.next_hop(lab, "1", "1")


def test_route_unlabeled_vertex():
    lab = cn.assign_labels(cn.SpanningTree("r", [("r", "a")]), 2)
    with pytest.raises(ValueError, match="not labeled"):
        cn.route(lab, "r", "zz")


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 40), st.sampled_from([2, 3]))
def test_route_is_the_unique_tree_path(seed, n, q):
    tree = random_tree(np.random.default_rng(seed), n)
    lab = cn.assign_labels(tree, q)
    verts = tree.vertices
    rng = np.random.default_rng(seed + 1)
    for _ in range(min(20, n * 2)):
        a, b = (verts[int(i)] for i in rng.integers(0, n, size=2))
        got = cn.route(lab, a, b)
        assert got.vertices == tree.path_between(a, b).vertices
        assert got.vertices == tuple(reversed(cn.route(lab, b, a).vertices))


def test_type_a_routes_are_shortest_paths():
    # on a tree network the label route and the BFS shortest path coincide
    rng = np.random.default_rng(5)
    tree = random_tree(rng, 25)
    net = tree.to_network()
    lab = cn.assign_labels(tree, 2)
    assert cn.topology_type(net) is cn.TopologyType.TYPE_A
    for a, b in itertools.islice(itertools.combinations(net.vertices, 2), 60):
        assert cn.route(lab, a, b).length == cn.shortest_path(net, a, b).length


# ---------------------------------------------------------------------------
# Super-efficiency


def test_figure1_super_efficient(figure1, code_n10_d3):
    csn = cn.CodedNetwork(figure1, code_n10_d3, 0.01)
    ok, tree = cn.is_super_efficient(csn)
    assert ok and tree is not None
    assert len(tree) == len(figure1)
    assert len(tree.edge_list) == 5
    for parent, child in tree.edge_list:
        assert figure1.has_edge(parent, child)
    assert tree_is_efficient(csn, tree)
    # the published witness tree is efficient too, and exhaustive search
    # cannot do worse than its diameter
    printed = cn.SpanningTree.from_edges(EXAMPLE_TREE_EDGES)
    assert tree_is_efficient(csn, printed)
    assert tree.diameter() <= printed.diameter()


def test_not_even_efficient_means_not_super(figure1, code_n10_d3):
    csn = cn.CodedNetwork(figure1, code_n10_d3, Fraction(3, 4))
    assert cn.is_super_efficient(csn) == (False, None)


def test_tree_networks_witness_themselves(code_n10_d3):
    net = path_graph(2)
    csn = cn.CodedNetwork(net, code_n10_d3, 0.01)
    ok, tree = cn.is_super_efficient(csn)
    assert ok
    assert frozenset(tuple(sorted(e)) for e in tree.edge_list) == net.edges


def test_efficient_but_not_super_efficient(code_n10_d3):
    # 5-cycle with lengths 1..2 efficient but 3+ not: every spanning tree is
    # a 4-edge path, so no efficient tree exists
    verts = [str(i) for i in range(5)]
    net = cn.SocialNetwork([(verts[i], verts[(i + 1) % 5]) for i in range(5)])
    assert net.diameter() == 2
    csn = cn.CodedNetwork(net, code_n10_d3, 0.05)
    assert cn.classify_network(csn) is EfficiencyClass.EFFICIENT
    ok, tree = cn.is_super_efficient(csn)
    assert not ok and tree is None


def test_routed_paths_in_super_efficient_network_are_efficient(figure1, code_n10_d3):
    csn = cn.CodedNetwork(figure1, code_n10_d3, 0.01)
    ok, tree = cn.is_super_efficient(csn)
    assert ok
    lab = cn.assign_labels(tree, 2)
    for a, b in itertools.combinations(figure1.vertices, 2):
        path = cn.route(lab, a, b)
        assert cn.classify_path(csn, path).classification is EfficiencyClass.EFFICIENT


def test_super_efficiency_requires_connected(code_n10_d3):
    net = cn.SocialNetwork([("a", "b"), ("c", "d")])
    with pytest.raises(InfeasibleError):
        cn.is_super_efficient(cn.CodedNetwork(net, code_n10_d3, 0.01))


# ---------------------------------------------------------------------------
# Simplex labels for complete graphs


def test_complete_graph_labels():
    verts = ["w", "x", "y", "z"]
    net = cn.SocialNetwork([(a, b) for a, b in itertools.combinations(verts, 2)])
    labels = cn.complete_graph_labels(net)
    assert len(set(labels.values())) == 4
    dists = {
        cn.hamming_distance(labels[a], labels[b])
        for a, b in itertools.combinations(verts, 2)
    }
    assert dists == {2}  # constant pairwise distance marks completeness


def test_complete_graph_labels_rejects_incomplete(figure1):
    with pytest.raises(ValueError):
        cn.complete_graph_labels(figure1)
