"""Acceptance checks, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL|SKIP ...`` line to the terminal
(outside pytest's capture) and then asserts.
"""
import random
import time

import pytest

from franknum import cli, exact, flows, heuristic, oracle, topology
from franknum.graphio import Graph, parse_graph6, write_graph6
from franknum.orientation import Orientation, deletable_edges, is_deletable, is_strong, verify_certificate

import graphs

CENSUS_SMALL = ["cubic_4.g6", "cubic_6.g6", "cubic_8.g6", "cubic_10.g6", "cubic_12.g6"]


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail, status=None):
        with capsys.disabled():
            print(f"\ncriterion {number}: {status or ('PASS' if ok else 'FAIL')} {detail}")
        return ok
    return emit


def three_ec(names):
    return [g for name in names for g in graphs.load(name) if topology.edge_connectivity_at_least(g, 3)]


def auto_verdicts(gs):
    opts = cli.Options(mode="auto")
    return [cli.process_line(i, write_graph6(g), opts) for i, g in enumerate(gs)]


def test_criterion_01_petersen(report):
    t0 = time.perf_counter()
    p = graphs.petersen()
    res = exact.exact_frank2(p)
    fn = oracle.frank_number_bruteforce(p, kmax=3)
    dt = time.perf_counter() - t0
    ok = res.frank2 is False and fn == 3 and dt < 120
    report(1, ok, f"exact={res.frank2} bruteforce(kmax=3)={fn} in {dt:.1f}s")
    assert ok


def test_criterion_02_order_18(report):
    t0 = time.perf_counter()
    snarks = graphs.load("snarks_c4_18.g6")
    recs = auto_verdicts(snarks)
    passed = sum(1 for r in recs if r.heuristic_passed)
    dt = time.perf_counter() - t0
    ok = len(snarks) == 2 and all(r.verdict == cli.YES for r in recs) and dt < 60
    report(2, ok, f"{sum(r.verdict == cli.YES for r in recs)}/2 fn2-yes, heuristic passed {passed}/2, {dt:.1f}s")
    assert ok


def test_criterion_03_orders_20_22(report):
    t0 = time.perf_counter()
    parts = []
    ok = True
    for n, expected in ((20, 6), (22, 31)):
        snarks = graphs.load(f"snarks_c4_{n}.g6")
        recs = auto_verdicts(snarks)
        yes = sum(r.verdict == cli.YES for r in recs)
        passed = sum(1 for r in recs if r.heuristic_passed)
        parts.append(f"n={n}: {yes}/{len(snarks)} fn2-yes (heuristic {passed})")
        ok &= len(snarks) == expected and yes == expected
    dt = time.perf_counter() - t0
    ok &= dt < 600
    report(3, ok, "; ".join(parts) + f", {dt:.1f}s")
    assert ok


@pytest.mark.parametrize("k", [5, 7])
def test_criterion_04_flower_snarks(report, k):
    t0 = time.perf_counter()
    (rec,) = auto_verdicts([graphs.flower(k)])
    dt = time.perf_counter() - t0
    ok = rec.verdict == cli.YES and dt < 600
    report(4, ok, f"J{k}: {rec.verdict} via {rec.method}, {dt:.1f}s")
    assert ok


def colourable_sample():
    small = [g for g in three_ec(["cubic_4.g6", "cubic_6.g6", "cubic_8.g6", "cubic_10.g6"])
             if topology.three_edge_colouring(g) is not None]
    rng = random.Random(20261014)
    larger = []
    while len(larger) < 200:
        g = graphs.random_cubic(2 * rng.randint(6, 20), rng)
        if topology.edge_connectivity_at_least(g, 3) and topology.three_edge_colouring(g) is not None:
            larger.append(g)
    return small, larger


def snark_sample():
    out = [graphs.petersen()]
    for n in (18, 20, 22):
        out += graphs.load(f"snarks_c4_{n}.g6")
    return out


def test_criterion_05_two_orientation_construction(report):
    small, larger = colourable_sample()
    bad = 0
    for g in small + larger:
        gf = flows.find_z2z2_flow(g)
        cert = flows.orientations_from_4flow(g, gf)
        a, b, _ = flows.complementary_4flows(g, gf)
        once = all((a.value[e] == 1) + (b.value[e] == 1) == 1 for e in range(g.m))
        if not (verify_certificate(g, cert) and once):
            bad += 1
    ok = bad == 0
    report(5, ok, f"{len(small)} exhaustive (n<=10) + {len(larger)} random, {bad} failures")
    assert ok


def test_criterion_06_four_orientation_construction(report):
    gs = snark_sample()
    bad = 0
    for g in gs:
        gf = flows.find_z2z3_flow(g)
        con = flows.six_flow_construction(g, gf)
        good = verify_certificate(g, flows.four_orientations(g, gf))
        for fl, (_, ones) in zip(con.flows, flows.FOUR_FLOW_COEFFS):
            expected = set().union(*(con.classes[c] for c in ones))
            good &= fl.is_all_positive() and fl.is_nowhere_zero() and flows.verify_flow(fl)
            good &= {e for e, v in enumerate(fl.value) if v == 1} == expected
        bad += not good
    ok = bad == 0 and len(gs) == 1 + 2 + 6 + 31
    report(6, ok, f"{len(gs)} snarks (Petersen and orders 18, 20, 22), {bad} failures")
    assert ok


def test_criterion_07_flow_deletable_bound(report):
    small, larger = colourable_sample()
    checked = bad = 0
    for g in small + larger:
        a, b, _ = flows.complementary_4flows(g, flows.find_z2z2_flow(g))
        for fl in (a, b):
            checked += 1
            bad += not flows.flow_deletable_lower_bound(fl) <= deletable_edges(g, fl.orientation)
    for g in snark_sample():
        for fl in flows.six_flow_construction(g, flows.find_z2z3_flow(g)).flows:
            checked += 1
            bad += not flows.flow_deletable_lower_bound(fl) <= deletable_edges(g, fl.orientation)
    ok = bad == 0
    report(7, ok, f"{checked} flows, {bad} violations")
    assert ok


def test_criterion_08_oracle_equivalence(report):
    t0 = time.perf_counter()
    gs = three_ec(CENSUS_SMALL)
    disagree = 0
    for g in gs:
        if exact.exact_frank2(g).frank2 != (oracle.frank_number_bruteforce(g, kmax=2) == 2):
            disagree += 1
    pairs = mismatched = 0
    for g in three_ec(["cubic_4.g6", "cubic_6.g6", "cubic_8.g6"]):
        for mask in range(1 << g.m):
            o = Orientation(g, [mask >> e & 1 for e in range(g.m)])
            if not is_strong(g, o):
                continue
            for e in range(g.m):
                pairs += 1
                mismatched += is_deletable(g, o, e) != oracle.deletable_by_definition(g, o, e)
    dt = time.perf_counter() - t0
    ok = disagree == 0 and mismatched == 0 and len(gs) == 78
    report(8, ok, f"{len(gs)} graphs n<=12: {disagree} disagreements; "
                  f"{pairs} deletability checks n<=8: {mismatched} mismatches; {dt:.1f}s")
    assert ok


def test_criterion_09_large_censuses(report):
    snarks = graphs.load("snarks_c4_26.g6")
    if not snarks:
        report(9, True, status="SKIP", detail="order-26 census not available, stretch check not run; orders >= 28 out of scope")
        pytest.skip("order-26 census not available")
    t0 = time.perf_counter()
    passed = sum(heuristic.heuristic_frank2(g) is not None for g in snarks)
    dt = time.perf_counter() - t0
    ok = len(snarks) == 1297 and passed == 1283 and dt < 7200
    report(9, ok, f"heuristic passed {passed}/{len(snarks)} in {dt:.0f}s")
    assert ok


def test_criterion_10_graph6_round_trip(report):
    rng = random.Random(10)
    gs = []
    for _ in range(10_000):
        n = rng.randint(0, 40)
        p = rng.random()
        gs.append(Graph(n, [(u, v) for v in range(n) for u in range(v) if rng.random() < p]))
    t0 = time.perf_counter()
    bad = sum(parse_graph6(write_graph6(g)) != g for g in gs)
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 10
    report(10, ok, f"10000 random graphs, {bad} mismatches, {dt:.2f}s")
    assert ok
