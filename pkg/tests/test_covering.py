import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import codednet as cn
from codednet.covering import intersection_graph_connected
from codednet.network import InfeasibleError

from conftest import path_graph

# Periphery of the bundled 40-vertex network, translated onto the vertex
# names construct_perfect generates for hubs=3, k=2 (the two graphs are
# isomorphic; the bijection below maps bundled names -> generated names).
CORE_BIJECTION = {
    "1": "1", "2": "2", "3": "3", "4": "4", "5": "6", "6": "5",
    "7": "8", "8": "7", "9": "11", "10": "12", "11": "9", "12": "10",
}
FIG3_CORE_EDGES = [
    ("1", "8"), ("8", "4"), ("4", "7"), ("7", "2"),
    ("2", "9"), ("9", "5"), ("5", "10"), ("10", "3"),
    ("1", "11"), ("11", "6"), ("6", "12"), ("12", "3"),
]
FIG3_PERIPHERY_EDGES = [
    ("13", "7"), ("14", "7"), ("15", "2"), ("16", "8"), ("17", "9"),
    ("18", "3"), ("19", "18"), ("10", "19"), ("20", "11"), ("9", "21"),
    ("22", "8"), ("20", "8"), ("15", "17"), ("13", "14"), ("23", "8"),
    ("24", "10"), ("13", "2"), ("25", "13"), ("26", "13"), ("2", "27"),
    ("9", "28"), ("29", "8"), ("30", "1"), ("11", "31"), ("11", "32"),
    ("1", "33"), ("1", "34"), ("2", "35"), ("2", "36"), ("2", "37"),
    ("1", "38"), ("3", "39"), ("3", "40"),
]


def remap(v: str) -> str:
    return CORE_BIJECTION.get(v, v)


@pytest.fixture()
def fig3_csn(figure3, code_n10_d3):
    return cn.CodedNetwork(figure3, code_n10_d3, 0.01)


@pytest.fixture()
def fig3_balls(figure3):
    return [cn.ball_vertices(figure3, h, 2) for h in ("1", "2", "3")]


# ---------------------------------------------------------------------------
# Covering validation


def test_figure3_hub_balls_are_perfect(fig3_csn, fig3_balls):
    b1, b2, b3 = fig3_balls
    assert (len(b1), len(b2), len(b3)) == (16, 17, 10)
    assert b1 & b2 == {"4"} and b1 & b3 == {"6"} and b2 & b3 == {"5"}
    cov = cn.validate_covering(fig3_csn, fig3_balls)
    assert cov.is_covering and cov.is_reachable and cov.is_efficient and cov.is_perfect
    assert all(t is not None for t in cov.member_trees)
    assert all(l is not None for l in cov.member_labelings)


def test_single_member_whole_network(figure1, code_n10_d3):
    csn = cn.CodedNetwork(figure1, code_n10_d3, 0.01)
    cov = cn.validate_covering(csn, [figure1.vertices])
    assert cov.is_covering and cov.is_reachable and cov.is_efficient and cov.is_perfect


def test_disjoint_members_not_reachable(figure1, code_n10_d3):
    csn = cn.CodedNetwork(figure1, code_n10_d3, 0.01)
    cov = cn.validate_covering(csn, [{"1", "2", "3", "5"}, {"4", "6"}])
    assert cov.is_covering
    assert not cov.is_reachable
    assert not cov.is_efficient and not cov.is_perfect


def test_covering_member_validation(figure1, code_n10_d3):
    csn = cn.CodedNetwork(figure1, code_n10_d3, 0.01)
    with pytest.raises(ValueError, match="empty"):
        cn.validate_covering(csn, [set(), {"1"}])
    with pytest.raises(ValueError, match="disconnected"):
        cn.validate_covering(csn, [{"1", "6"}])


def test_non_covering_flag(figure1, code_n10_d3):
    csn = cn.CodedNetwork(figure1, code_n10_d3, 0.01)
    cov = cn.validate_covering(csn, [{"1", "2", "5"}])
    assert not cov.is_covering
    assert cov.is_reachable  # single member, trivially
    assert not cov.is_efficient


# ---------------------------------------------------------------------------
# Reachability equivalence


def random_ball_members(net, rng, count):
    members = []
    for _ in range(count):
        center = net.vertices[int(rng.integers(0, len(net)))]
        members.append(cn.ball_vertices(net, center, int(rng.integers(0, 3))))
    return members


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_reachability_equivalence(seed):
    from conftest import random_connected_graph

    rng = np.random.default_rng(seed)
    net = random_connected_graph(rng, int(rng.integers(3, 12)), int(rng.integers(0, 8)))
    members = random_ball_members(net, rng, int(rng.integers(1, 7)))
    assert intersection_graph_connected(members) == cn.reachable_by_subset_check(members)


def test_subset_check_guard():
    with pytest.raises(ValueError, match="exponential"):
        cn.reachable_by_subset_check([frozenset({"a"})] * 21)


# ---------------------------------------------------------------------------
# Transmission plans


def test_plan_figure3(fig3_csn, fig3_balls):
    cov = cn.validate_covering(fig3_csn, fig3_balls)
    plan = cn.plan_transmission(cov, "1", "17")
    assert plan.member_sequence == (0, 1)
    assert plan.handoffs == ("4",)
    assert plan.correction_points == ("4", "17")
    assert plan.hop_sequence == (0, "4", 1)
    legs = plan.leg_endpoints()
    assert legs == [(0, "1", "4"), (1, "4", "17")]


def test_plan_same_member(fig3_csn, fig3_balls):
    cov = cn.validate_covering(fig3_csn, fig3_balls)
    plan = cn.plan_transmission(cov, "30", "16")  # both in the ball around 1
    assert plan.member_sequence == (0,)
    assert plan.handoffs == ()
    assert plan.correction_points == ("16",)


def test_plan_requires_covered_endpoints(fig3_csn, fig3_balls):
    cov = cn.validate_covering(fig3_csn, fig3_balls)
    with pytest.raises(ValueError, match="not covered"):
        cn.plan_transmission(cov, "zz", "17")


def test_plan_requires_efficiency(figure1, code_n10_d3):
    csn = cn.CodedNetwork(figure1, code_n10_d3, 0.01)
    cov = cn.validate_covering(csn, [{"1", "2", "5"}])
    with pytest.raises(ValueError, match="efficient"):
        cn.plan_transmission(cov, "1", "2")


# ---------------------------------------------------------------------------
# Covering sets and radius


def test_covering_set_figure3(fig3_csn):
    cs = cn.covering_set(fig3_csn, 2)
    assert cs is not None
    assert cs.covering.is_efficient
    assert cs.radius_param == 2
    assert len(cs.centers) == 3  # same cover quality as the hub choice
    assert cs.density == 17


def test_covering_set_complete_graph(code_n10_d3):
    verts = [str(i) for i in range(5)]
    net = cn.SocialNetwork([(a, b) for a, b in itertools.combinations(verts, 2)])
    cs = cn.covering_set(cn.CodedNetwork(net, code_n10_d3, 0.05), 1)
    assert cs is not None
    assert cs.centers == ("0",)
    assert cs.dimension == 1 and cs.dimension_exact


def test_covering_set_needs_augmentation(code_n10_d3):
    # greedy alone picks disjoint balls on a path; connectors get added
    csn = cn.CodedNetwork(path_graph(6), code_n10_d3, 0.05)
    cs = cn.covering_set(csn, 1)
    assert cs is not None
    assert cs.centers == ("1", "4", "5", "2", "3")
    assert cs.covering.is_efficient
    assert cs.dimension == 3 and cs.dimension_exact
    assert cs.density == 3


def test_covering_set_none_when_balls_fail(code_n10_d3):
    # p keeps single edges efficient but not length-2 paths, so interior
    # radius-1 balls (3-vertex stars) cannot be super-efficient
    csn = cn.CodedNetwork(path_graph(6), code_n10_d3, 0.08)
    assert cn.covering_set(csn, 1) is None


def test_covering_set_validates_r():
    net = path_graph(2)
    code = cn.LinearCode(cn.PrimeField(2), [[1]] * 3)
    with pytest.raises(ValueError):
        cn.covering_set(cn.CodedNetwork(net, code, 0.01), 0)


def test_radius_equals_critical_value_when_super_efficient(figure1, code_n10_d3):
    csn = cn.CodedNetwork(figure1, code_n10_d3, 0.01)
    assert cn.is_super_efficient(csn)[0]
    assert cn.radius(csn) == csn.critical_value() == 3


def test_radius_zero_when_single_edges_fail(ccp_chain, code_n10_d3):
    csn = cn.CodedNetwork(ccp_chain, code_n10_d3, Fraction(3, 4))
    assert cn.radius(csn) == 0


def test_radius_figure3_limited_efficiency(figure3, code_n10_d3):
    # lengths 1..2 efficient, length 3 not: balls of radius 1 work, radius 2
    # balls would need diameter-4 trees
    csn = cn.CodedNetwork(figure3, code_n10_d3, 0.05)
    assert cn.radius(csn) == 1


# ---------------------------------------------------------------------------
# Perfect construction


def test_construct_core_only(code_n10_d3):
    csn, cs = cn.construct_perfect(3, 2, code=code_n10_d3, p=0.01)
    net = csn.graph
    assert len(net) == 3 + 3 * 3  # hubs + C(3,2) chains of 2k-1 vertices
    assert cs.centers == ("1", "2", "3")
    assert cs.covering.is_perfect
    members = cs.covering.members
    for a, b in itertools.combinations(range(3), 2):
        assert len(members[a] & members[b]) == 1
    assert cs.density == 5
    assert cs.dimension == 3 and cs.dimension_exact


def test_construct_smallest_instance(code_n10_d3):
    csn, cs = cn.construct_perfect(2, 1, code=code_n10_d3, p=0.01)
    assert sorted(csn.graph.vertices) == ["1", "2", "3"]
    assert csn.graph.edges == frozenset({("1", "3"), ("2", "3")})
    assert cs.covering.is_perfect


def test_construct_reproduces_bundled_network(figure3, code_n10_d3):
    periphery = [(remap(a), remap(b)) for a, b in FIG3_PERIPHERY_EDGES]
    csn, cs = cn.construct_perfect(3, 2, periphery, code=code_n10_d3, p=0.01)
    expected_edges = {
        tuple(sorted((remap(a), remap(b)))) for a, b in figure3.edges
    }
    assert set(csn.graph.edges) == expected_edges
    assert len(csn.graph) == 40
    assert cs.covering.is_perfect
    assert cs.density == 17


def test_construct_lemma_bound_on_corrections(code_n10_d3):
    # perfect coverings never need more than two correction passes
    csn, cs = cn.construct_perfect(3, 2, code=code_n10_d3, p=0.01)
    for a, b in itertools.combinations(csn.graph.vertices, 2):
        plan = cn.plan_transmission(cs.covering, a, b)
        assert len(plan.correction_points) <= 2


def test_construct_size_bounds_bracket(code_n10_d3):
    csn, cs = cn.construct_perfect(3, 2, code=code_n10_d3, p=0.01)
    lo, hi = cn.size_bounds(cs.dimension, cs.radius_param, cs.density)
    assert lo <= len(csn.graph) <= hi


def test_construct_rejects_weak_code(code_n10_d3):
    with pytest.raises(InfeasibleError):
        cn.construct_perfect(3, 2, code=code_n10_d3, p=Fraction(3, 4))


def test_construct_rejects_bad_periphery(code_n10_d3):
    with pytest.raises(ValueError, match="attaches to nothing"):
        cn.construct_perfect(3, 2, [("zz", "yy")], code=code_n10_d3, p=0.01)
    with pytest.raises(ValueError, match="farther than"):
        cn.construct_perfect(3, 2, [("4", "x"), ("x", "y")], code=code_n10_d3, p=0.01)
    with pytest.raises(ValueError, match="duplicate"):
        cn.construct_perfect(3, 2, [("1", "x"), ("x", "1")], code=code_n10_d3, p=0.01)


def test_construct_parameter_validation(code_n10_d3):
    with pytest.raises(ValueError):
        cn.construct_perfect(1, 2, code=code_n10_d3, p=0.01)
    with pytest.raises(ValueError):
        cn.construct_perfect(3, 0, code=code_n10_d3, p=0.01)


# ---------------------------------------------------------------------------
# Size bounds


def test_size_bounds_values():
    assert cn.size_bounds(3, 2, 10) == (9, 27)
    assert cn.size_bounds(1, 2, 7) == (2, 7)
    with pytest.raises(ValueError):
        cn.size_bounds(3, 2, 2)  # e must exceed r


def test_size_bounds_bracket_figure3(figure3, fig3_csn, fig3_balls):
    cov = cn.validate_covering(fig3_csn, fig3_balls)
    density = max(len(m) for m in cov.members)
    lo, hi = cn.size_bounds(3, 2, density)
    assert lo <= len(figure3) <= hi


# ---------------------------------------------------------------------------
# Influence


def test_influence_degree_zero(fig3_csn, fig3_balls):
    cov = cn.validate_covering(fig3_csn, fig3_balls)
    rep = cn.influence(fig3_csn, cov, "17", 0)
    assert rep.vertices == {"17"}
    assert rep.size == 1 and rep.bound_ok


def test_influence_saturates_single_member(fig3_csn, fig3_balls):
    cov = cn.validate_covering(fig3_csn, fig3_balls)
    rep = cn.influence(fig3_csn, cov, "17", 50)  # 17 sits only in the ball of 2
    assert rep.vertices == cov.members[1]
    assert rep.size == rep.bound == 17


def test_influence_overlap_vertex(fig3_csn, fig3_balls):
    cov = cn.validate_covering(fig3_csn, fig3_balls)
    rep = cn.influence(fig3_csn, cov, "4", 50)  # 4 lies in two members
    assert rep.bound == 16 + 17
    assert rep.vertices == cov.members[0] | cov.members[1]
    assert rep.size == 32 and rep.bound_ok


def test_influence_requires_coverage(fig3_csn, fig3_balls):
    cov = cn.validate_covering(fig3_csn, fig3_balls)
    with pytest.raises(ValueError, match="not covered"):
        cn.influence(fig3_csn, cov, "zz", 1)
    with pytest.raises(ValueError):
        cn.influence(fig3_csn, cov, "4", -1)
