import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from franknum import flows, heuristic, topology
from franknum.errors import CancellationToZero, PreconditionViolated, ValueNotTwo, ZeroEdge
from franknum.flows import GroupFlow, IntFlow
from franknum.graphio import Graph
from franknum.orientation import Orientation, deletable_edges, verify_certificate

import graphs


def circuit_flow(n, value=1):
    g = graphs.cycle(n)
    arcs = {g.edge_id(i, (i + 1) % n): 0 if i < (i + 1) % n else 1 for i in range(n)}
    return g, IntFlow.on_circuits(g, arcs, value)


def k4_four_flow():
    g = graphs.complete(4)
    first, _, _ = flows.complementary_4flows(g, flows.find_z2z2_flow(g))
    return g, first


def test_conservation_examples():
    g = graphs.complete(4)
    zero = IntFlow(Orientation(g, [0] * g.m), (0,) * g.m)
    assert flows.verify_flow(zero) and not zero.is_nowhere_zero()
    c, fl = circuit_flow(5)
    assert flows.verify_flow(fl) and fl.is_all_positive()
    bumped = IntFlow(fl.orientation, (2,) + fl.value[1:])
    assert flows.flow_violation(bumped) in c.edges[0]


def test_to_all_positive():
    _, fl = circuit_flow(4)
    assert flows.to_all_positive(fl) == fl
    neg = IntFlow(fl.orientation, tuple(-v for v in fl.value))
    pos = flows.to_all_positive(neg)
    assert pos.value == fl.value
    assert all(a != b for a, b in zip(pos.orientation.bits, fl.orientation.bits))
    with pytest.raises(ZeroEdge):
        flows.to_all_positive(IntFlow(fl.orientation, (0,) + fl.value[1:]))


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 12), st.lists(st.sampled_from([-3, -2, -1, 1, 2, 3]), min_size=1, max_size=1),
       st.lists(st.integers(0, 1), min_size=12, max_size=12))
def test_mixed_sign_circuit_flow_made_positive(n, val, flips):
    g, fl = circuit_flow(n, val[0])
    # reverse some edges and negate their values: still the same flow
    bits = [b ^ flips[e] for e, b in enumerate(fl.orientation.bits)]
    vals = [-v if flips[e] else v for e, v in enumerate(fl.value)]
    mixed = IntFlow(Orientation(g, bits), tuple(vals))
    assert flows.verify_flow(mixed)
    pos = flows.to_all_positive(mixed)
    assert flows.verify_flow(pos) and pos.is_all_positive()


def test_positive_combination_with_zero_flow():
    g, a = k4_four_flow()
    empty = IntFlow(Orientation(g, [0] * g.m), (0,) * g.m)
    assert flows.positive_combination(a, empty) == flows.to_all_positive(a)


def test_positive_combination_with_negation_cancels():
    g, a = k4_four_flow()
    neg = IntFlow(a.orientation, tuple(-v for v in a.value))
    with pytest.raises(CancellationToZero):
        flows.positive_combination(a, neg)
    # same flow expressed in the reversed orientation also cancels
    rev = IntFlow(Orientation(g, [1 - b for b in a.orientation.bits]), a.value)
    with pytest.raises(CancellationToZero):
        flows.positive_combination(a, rev)


def cubic_3col(n, seed):
    g = graphs.random_cubic(n, random.Random(seed))
    if not topology.edge_connectivity_at_least(g, 3) or topology.three_edge_colouring(g) is None:
        return None
    return g


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 9).map(lambda k: 2 * k), st.integers(0, 10**6))
def test_circuit_and_matching_combination(n, seed):
    # C valued 1 plus a perfect matching F together with a matching M of C valued -2
    g = cubic_3col(n, seed)
    assume(g is not None)
    col = topology.three_edge_colouring(g)
    f = [e for e in range(g.m) if col[e] == 0]
    tf = topology.two_factor(g, f)
    m = heuristic.matching_avoiding(g, tf, ())
    c_arcs = flows.smooth_arcs(g, [list(zip(v, es)) for v, es in zip(tf.circuits, tf.circuit_edges)])
    fm = set(f) | set(m)
    fm_arcs = flows.smooth_arcs(g, flows.peel_circuits(g, fm))
    comb = flows.positive_combination(IntFlow.on_circuits(g, c_arcs, 1),
                                      IntFlow.on_circuits(g, fm_arcs, -2))
    assert flows.verify_flow(comb) and comb.is_all_positive()
    for e in range(g.m):
        if e in c_arcs and e not in m:
            assert comb.value[e] == 1
        elif e in m:
            assert comb.value[e] in (1, 3)
        else:
            assert comb.value[e] == 2


def test_strong_two_edge_examples():
    g, fl = k4_four_flow()
    one = next(e for e, v in enumerate(fl.value) if v == 1)
    with pytest.raises(ValueNotTwo):
        flows.is_strong_two_edge(fl, one)
    # at a vertex with values 2 = 1 + 1 the star is a 3-cut with two 1-edges
    for v in range(g.n):
        vals = sorted(fl.value[e] for e in g.incident(v))
        if vals == [1, 1, 2]:
            two = next(e for e in g.incident(v) if fl.value[e] == 2)
            assert not flows.is_strong_two_edge(fl, two)


def test_strong_two_edge_outside_any_3_cut():
    # the only 3-edge-cuts of K3,3 are vertex stars
    g = graphs.k33()
    gf = flows.find_z2z2_flow(g)
    for fl in flows.complementary_4flows(g, gf)[:2]:
        for e, v in enumerate(fl.value):
            if v != 2:
                continue
            a, b = g.edges[e]
            star_ones = [sorted(fl.value[x] for x in g.incident(w) if x != e) == [1, 1] for w in (a, b)]
            assert flows.is_strong_two_edge(fl, e) == (not any(star_ones))


def test_flow_deletable_bound_examples():
    g, fl = k4_four_flow()
    bound = flows.flow_deletable_lower_bound(fl)
    ones = {e for e, v in enumerate(fl.value) if v == 1}
    assert ones <= bound <= deletable_edges(g, fl.orientation)
    big = IntFlow(fl.orientation, tuple(3 * v for v in fl.value))
    assert flows.flow_deletable_lower_bound(big) == frozenset()
    with pytest.raises(PreconditionViolated):
        flows.flow_deletable_lower_bound(IntFlow(fl.orientation, (0,) * g.m))


def test_group_flow_existence():
    assert flows.find_z2z2_flow(graphs.complete(4)) is not None
    assert flows.find_z2z2_flow(graphs.petersen()) is None
    k5 = flows.find_z2z2_flow(graphs.complete(5))
    assert k5 is not None and k5.is_nowhere_zero() and flows.verify_flow(k5)
    for g in (graphs.petersen(), graphs.complete(4), graphs.cycle(4), graphs.flower(5)):
        gf = flows.find_z2z3_flow(g)
        assert gf is not None and gf.is_nowhere_zero() and flows.verify_flow(gf)


def test_group_flow_conservation_check():
    g = graphs.complete(4)
    gf = flows.find_z2z2_flow(g)
    bad = GroupFlow(gf.group, gf.orientation, ((0, 1),) * g.m)
    assert not flows.verify_flow(bad)


@pytest.mark.parametrize("g", [graphs.complete(4), graphs.k33(), graphs.prism(3), graphs.cube()])
def test_two_orientations_from_4flow(g):
    gf = flows.find_z2z2_flow(g)
    cert = flows.orientations_from_4flow(g, gf)
    assert verify_certificate(g, cert) and len(cert.orientations) == 2
    a, b, _ = flows.complementary_4flows(g, gf)
    assert all((a.value[e] == 1) + (b.value[e] == 1) == 1 for e in range(g.m))


def test_4flow_needs_3_edge_connected():
    g = graphs.two_cut_k4s()
    with pytest.raises(PreconditionViolated):
        flows.orientations_from_4flow(g, flows.find_z2z2_flow(g))


def check_six_flow(g):
    gf = flows.find_z2z3_flow(g)
    con = flows.six_flow_construction(g, gf)
    assert len(con.flows) == 4
    for fl, (_, ones) in zip(con.flows, flows.FOUR_FLOW_COEFFS):
        assert flows.verify_flow(fl) and fl.is_all_positive() and fl.max_abs() <= 6
        expected = set().union(*(con.classes[c] for c in ones))
        assert {e for e, v in enumerate(fl.value) if v == 1} == expected
        assert flows.flow_deletable_lower_bound(fl) <= deletable_edges(g, fl.orientation)
    assert set().union(*con.classes.values()) == set(range(g.m))
    cert = flows.four_orientations(g, gf)
    assert verify_certificate(g, cert) and cert.provenance == "flow-6flow"


def test_four_orientations_petersen():
    check_six_flow(graphs.petersen())


@pytest.mark.parametrize("g", [g for g in graphs.load("cubic_10.g6") + graphs.load("cubic_12.g6")
                               if topology.edge_connectivity_at_least(g, 3)][:40])
def test_four_orientations_census(g):
    check_six_flow(g)


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 12).map(lambda k: 2 * k), st.integers(0, 10**6))
def test_constructions_on_random_cubic(n, seed):
    g = graphs.random_cubic(n, random.Random(seed))
    assume(topology.edge_connectivity_at_least(g, 3))
    check_six_flow(g)
    gf = flows.find_z2z2_flow(g)
    if gf is not None:
        a, b, _ = flows.complementary_4flows(g, gf)
        for fl in (a, b):
            assert flows.flow_deletable_lower_bound(fl) <= deletable_edges(g, fl.orientation)
        assert verify_certificate(g, flows.orientations_from_4flow(g, gf))


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 9).map(lambda k: 2 * k), st.integers(0, 10**6))
def test_peel_circuits_partitions_even_subgraph(n, seed):
    g = cubic_3col(n, seed)
    assume(g is not None)
    col = topology.three_edge_colouring(g)
    es = {e for e in range(g.m) if col[e] != 2}
    circuits = flows.peel_circuits(g, es)
    seen = [e for c in circuits for _, e in c]
    assert sorted(seen) == sorted(es)
    for c in circuits:
        verts = [v for v, _ in c]
        assert len(set(verts)) == len(verts)
        for j, (v, e) in enumerate(c):
            assert set(g.edges[e]) == {v, verts[(j + 1) % len(verts)]}


def test_on_circuits_rejects_nothing_outside():
    g = Graph(3, [(0, 1), (1, 2), (0, 2)])
    fl = IntFlow.on_circuits(g, {0: 0}, 5)
    assert fl.value == (5, 0, 0)
