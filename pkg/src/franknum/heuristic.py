"""Two-factor configurations that certify Frank number 2.

For every perfect matching F whose complementary 2-factor C has exactly
two odd circuits N1, N2 we look for either

* an F-edge x1x2 joining N1 and N2 ("2odd"), or
* F-edges x1y1, x2y2 with y1y2 an edge of an even circuit W ("2odd1even"),

together with a pair of smooth orientations that agree on a small set Z of
edges near the named vertices.  A witness is turned into two orientations by
building two 4-flows on the smoothed graph and re-inserting the removed
edges with prescribed directions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from . import topology
from .errors import (
    InternalContradiction,
    LiftContradiction,
    NotCircuitDecomposition,
    NotCubic,
    PreconditionViolated,
    SuppressionCreatesLoop,
    SuppressionCreatesParallel,
)
from .flows import IntFlow, positive_combination, verify_flow
from .graphio import Graph
from .orientation import FrankCertificate, Orientation, arc_bit, deletable_edges, verify_certificate

TWO_ODD = "heuristic-2odd"
TWO_ODD_ONE_EVEN = "heuristic-2odd1even"


@dataclass
class HeuristicWitness:
    kind: str
    matching: frozenset
    odd: tuple  # (N1, N2) vertex tuples
    even: Optional[tuple]  # W, or None
    removed: tuple  # x1x2, or (x1y1, x2y2)
    names: dict  # x1, u1, v1, x2, u2, v2 and y1, y2, w1, w2
    extra: frozenset  # the matching M
    z: frozenset
    c_arcs: dict  # edge -> bit, smooth on C
    fm_arcs: dict  # edge -> bit, smooth on (F minus removed) plus M
    reduction: topology.Reduction = field(repr=False)


@dataclass
class HeuristicStats:
    matchings: int = 0
    two_odd_factors: int = 0
    pair_tries: int = 0
    triple_tries: int = 0
    skipped_parallel: int = 0


# ---------------------------------------------------------------------------
# matchings and consistent orientations

def _path_matching(g: Graph, path: list) -> list[int]:
    if len(path) % 2:
        raise NotCircuitDecomposition(f"path of odd order {len(path)} has no perfect matching")
    return [g.edge_id(path[i], path[i + 1]) for i in range(0, len(path), 2)]


def matching_avoiding(g: Graph, tf: topology.TwoFactor, removed: Iterable[int]) -> frozenset:
    """Perfect matching of C minus ``removed``.

    Every remaining path component has a unique perfect matching; an untouched
    even circuit gets the one of its two matchings holding its lowest edge.
    """
    removed = set(removed)
    out = []
    for cyc, es in zip(tf.circuits, tf.circuit_edges):
        if not removed & set(cyc):
            if len(cyc) % 2:
                raise NotCircuitDecomposition("odd circuit left untouched")
            k = es.index(min(es)) % 2
            out.extend(es[k::2])
            continue
        k = next(i for i, v in enumerate(cyc) if v in removed)
        rot = cyc[k:] + cyc[:k]
        run = []
        for v in rot[1:] + rot[:1]:
            if v in removed:
                out.extend(_path_matching(g, run))
                run = []
            else:
                run.append(v)
    return frozenset(out)


def find_consistent_smooth_orientations(g: Graph, first, second, z: Iterable[int]):
    """Smooth orientations of two circuit families agreeing on ``z``.

    ``first`` and ``second`` are lists of ``(vertices, edges)`` circuits.  Each
    circuit has two smooth orientations, so agreement on an edge is a parity
    constraint between one circuit of each family; the system is solved by
    union-find with parities.  Returns two ``edge -> bit`` maps or None.
    """
    def base(circuits, tag):
        arcs, owner = {}, {}
        for i, (verts, es) in enumerate(circuits):
            if len(verts) != len(es) or len(es) < 3:
                raise NotCircuitDecomposition("not a circuit")
            for j, e in enumerate(es):
                nxt = verts[(j + 1) % len(verts)]
                if set(g.edges[e]) != {verts[j], nxt}:
                    raise NotCircuitDecomposition(f"edge {e} does not join consecutive vertices")
                if e in arcs:
                    raise NotCircuitDecomposition(f"edge {e} used twice")
                arcs[e] = arc_bit(g, e, verts[j])
                owner[e] = (tag, i)
        return arcs, owner

    a_arcs, a_owner = base(first, 0)
    b_arcs, b_owner = base(second, 1)
    parent, parity = {}, {}

    def find(x):
        if x not in parent:
            parent[x], parity[x] = x, 0
        if parent[x] == x:
            return x, 0
        root, p = find(parent[x])
        parent[x] = root
        parity[x] ^= p
        return root, parity[x]

    for e in sorted(z):
        if e not in a_owner or e not in b_owner:
            raise NotCircuitDecomposition(f"consistency edge {e} is not in both families")
        need = a_arcs[e] ^ b_arcs[e]
        (ra, pa), (rb, pb) = find(a_owner[e]), find(b_owner[e])
        if ra == rb:
            if pa ^ pb != need:
                return None
        else:
            parent[ra] = rb
            parity[ra] = pa ^ pb ^ need

    def flips(tag, count):
        return [find((tag, i))[1] if (tag, i) in parent else 0 for i in range(count)]

    fa, fb = flips(0, len(first)), flips(1, len(second))
    a = {e: b ^ fa[a_owner[e][1]] for e, b in a_arcs.items()}
    b = {e: bit ^ fb[b_owner[e][1]] for e, bit in b_arcs.items()}
    return a, b


def _near_edges(g: Graph, cyc_edges: set, centre: int, exclude=()) -> set:
    """Edges of a circuit at distance 1 from ``centre``, skipping those touching ``exclude``."""
    out = set()
    for w, e in g.adj[centre]:
        if e not in cyc_edges:
            continue
        for _, f in g.adj[w]:
            if f in cyc_edges and f != e and not set(g.edges[f]) & set(exclude):
                out.add(f)
    return out


def _c_neighbours(g: Graph, cyc_edges: set, v: int) -> list[int]:
    return [w for w, e in g.adj[v] if e in cyc_edges]


# ---------------------------------------------------------------------------
# configuration search

def _prepare(g: Graph, tf, matching, removed_edges, removed_vertices, z):
    extra = matching_avoiding(g, tf, removed_vertices)
    c_circuits = list(zip(tf.circuits, tf.circuit_edges))
    fm = (set(matching) - set(removed_edges)) | extra
    fm_circuits = topology.circuits_of_2_regular(g, fm)
    sol = find_consistent_smooth_orientations(g, c_circuits, fm_circuits, z)
    return extra, fm, sol


def _cut_conditions(g: Graph, red: topology.Reduction, names: dict, removed: tuple, fm: set):
    """Cycle-separating triple scan, on the smoothed graph and on G minus the removed edges.

    Returns True when no offending triple exists.  The two scans must agree.
    """
    gp = red.graph
    vm = red.vertex_map
    fm_new = sorted(gp.edge_id(vm[a], vm[b]) for a, b in (g.edges[e] for e in fm))
    key = [gp.edge_id(vm[names["u1"]], vm[names["v1"]]),
           gp.edge_id(vm[names["u2"]], vm[names["v2"]]),
           gp.edge_id(vm[names["w1"]], vm[names["w2"]])]
    smoothed_ok = not any(
        topology.is_cyclic_edge_cut(gp, (e, a, b)) for e in key for a, b in combinations(fm_new, 2)
    )
    # same scan on G - x1y1 - x2y2, with the edges the pseudocode names
    h = Graph(g.n, [g.edges[e] for e in range(g.m) if e not in removed])
    fm_h = sorted(h.edge_id(*g.edges[e]) for e in fm)
    key_h = [h.edge_id(names["u1"], names["x1"]),
             h.edge_id(names["w1"], names["y1"]),
             h.edge_id(names["u2"], names["x2"])]
    raw_ok = not any(
        topology.is_cyclic_edge_cut(h, (e, a, b)) for e in key_h for a, b in combinations(fm_h, 2)
    )
    if smoothed_ok != raw_ok:
        raise InternalContradiction(
            f"cut scans disagree for removed edges {removed}: smoothed={smoothed_ok}, unsmoothed={raw_ok}")
    return smoothed_ok


def _try_pair(g, tf, n1, n2, stats):
    c_edges = set(range(g.m)) - tf.matching
    side = {v: 1 for v in tf.circuits[n1]}
    side.update({v: 2 for v in tf.circuits[n2]})
    for e in sorted(tf.matching):
        a, b = g.edges[e]
        if side.get(a) == 2 and side.get(b) == 1:
            a, b = b, a
        if (side.get(a), side.get(b)) != (1, 2):
            continue
        stats.pair_tries += 1
        x1, x2 = a, b
        u1, v1 = _c_neighbours(g, c_edges, x1)
        u2, v2 = _c_neighbours(g, c_edges, x2)
        n1e = set(tf.circuit_edges[n1])
        n2e = set(tf.circuit_edges[n2])
        z = _near_edges(g, n1e, x1) | _near_edges(g, n2e, x2)
        extra, fm, sol = _prepare(g, tf, tf.matching, (e,), (x1, x2), z)
        if sol is None:
            continue
        try:
            red = topology.smooth_edges(g, [e])
        except (SuppressionCreatesParallel, SuppressionCreatesLoop):
            stats.skipped_parallel += 1
            continue
        names = dict(x1=x1, u1=u1, v1=v1, x2=x2, u2=u2, v2=v2)
        return HeuristicWitness(TWO_ODD, tf.matching, (tf.circuits[n1], tf.circuits[n2]), None,
                                (e,), names, extra, frozenset(z), sol[0], sol[1], red)
    return None


def _try_triple(g, tf, n1, n2, stats):
    c_edges = set(range(g.m)) - tf.matching
    partner = {}
    for e in tf.matching:
        a, b = g.edges[e]
        partner[a], partner[b] = (b, e), (a, e)
    side = {v: 1 for v in tf.circuits[n1]}
    side.update({v: 2 for v in tf.circuits[n2]})
    for wi, (cyc, es) in enumerate(zip(tf.circuits, tf.circuit_edges)):
        if len(cyc) % 2:
            continue
        we = set(es)
        for yy in es:
            a, b = g.edges[yy]
            if side.get(partner[a][0]) == 2 and side.get(partner[b][0]) == 1:
                a, b = b, a
            if (side.get(partner[a][0]), side.get(partner[b][0])) != (1, 2):
                continue
            stats.triple_tries += 1
            y1, y2 = a, b
            x1, f1 = partner[y1]
            x2, f2 = partner[y2]
            u1, v1 = _c_neighbours(g, c_edges, x1)
            u2, v2 = _c_neighbours(g, c_edges, x2)
            w1 = next(w for w in _c_neighbours(g, c_edges, y1) if w != y2)
            w2 = next(w for w in _c_neighbours(g, c_edges, y2) if w != y1)
            z = (_near_edges(g, set(tf.circuit_edges[n1]), x1)
                 | _near_edges(g, set(tf.circuit_edges[n2]), x2)
                 | _near_edges(g, we, y1, exclude=(y2,))
                 | _near_edges(g, we, y2, exclude=(y1,)))
            extra, fm, sol = _prepare(g, tf, tf.matching, (f1, f2), (x1, y1, y2, x2), z)
            if sol is None:
                continue
            try:
                red = topology.smooth_edges(g, [f1, f2])
            except (SuppressionCreatesParallel, SuppressionCreatesLoop):
                stats.skipped_parallel += 1
                continue
            if not topology.cyclic_edge_connectivity_at_least(red.graph, 3):
                continue
            names = dict(x1=x1, u1=u1, v1=v1, x2=x2, u2=u2, v2=v2, y1=y1, y2=y2, w1=w1, w2=w2)
            if not _cut_conditions(g, red, names, (f1, f2), fm):
                continue
            return HeuristicWitness(TWO_ODD_ONE_EVEN, tf.matching,
                                    (tf.circuits[n1], tf.circuits[n2]), cyc, (f1, f2), names,
                                    extra, frozenset(z), sol[0], sol[1], red)
    return None


def check_preconditions(g: Graph) -> None:
    if not g.is_cubic():
        raise NotCubic("graph is not cubic")
    if not topology.edge_connectivity_at_least(g, 3):
        raise PreconditionViolated("graph is not 3-edge-connected")
    if not topology.cyclic_edge_connectivity_at_least(g, 4):
        raise PreconditionViolated("graph is not cyclically 4-edge-connected")


def heuristic_frank2(g: Graph, stats: Optional[HeuristicStats] = None,
                     check: bool = True) -> Optional[HeuristicWitness]:
    """First configuration found over all 2-factors, or None."""
    if check:
        check_preconditions(g)
    stats = stats if stats is not None else HeuristicStats()
    for f in topology.enumerate_perfect_matchings(g):
        stats.matchings += 1
        tf = topology.two_factor(g, f)
        odd = [i for i, c in enumerate(tf.circuits) if len(c) % 2]
        if len(odd) != 2:
            continue
        stats.two_odd_factors += 1
        n1, n2 = odd
        w = _try_pair(g, tf, n1, n2, stats)
        if w is None:
            w = _try_triple(g, tf, n1, n2, stats)
        if w is not None:
            return w
    return None


# ---------------------------------------------------------------------------
# certificates

def _arcs_on_reduction(g: Graph, red: topology.Reduction, arcs: dict) -> dict:
    """Transfer ``edge -> bit`` maps from G to the smoothed graph via edge paths."""
    gp = red.graph
    out = {}
    for i, path in enumerate(red.origin):
        e0 = g.edge_id(path[0], path[1])
        if e0 not in arcs:
            continue
        tail0 = g.edges[e0][arcs[e0]]
        start = path[0] if tail0 == path[0] else path[-1]
        out[i] = arc_bit(gp, i, red.vertex_map[start])
    return out


def witness_flows(g: Graph, w: HeuristicWitness) -> tuple[IntFlow, IntFlow]:
    """The two all-positive 4-flows on the smoothed graph."""
    gp = w.reduction.graph
    c = _arcs_on_reduction(g, w.reduction, w.c_arcs)
    fm = _arcs_on_reduction(g, w.reduction, w.fm_arcs)
    if len(c) + len(fm) - len(w.extra) != gp.m:
        raise InternalContradiction("circuit families do not cover the smoothed graph")
    first = positive_combination(IntFlow.on_circuits(gp, c, 1), IntFlow.on_circuits(gp, fm, -2))
    second = positive_combination(IntFlow.on_circuits(gp, c, 2), IntFlow.on_circuits(gp, fm, 1))
    for fl in (first, second):
        if not verify_flow(fl) or fl.max_abs() > 3:
            raise InternalContradiction("witness flow is not a nowhere-zero 4-flow")
    return first, second


def _lift_bits(g: Graph, red: topology.Reduction, o: Orientation) -> list:
    bits = [None] * g.m
    for i, path in enumerate(red.origin):
        if o.bits[i]:
            path = path[::-1]
        for a, b in zip(path, path[1:]):
            bits[g.edge_id(a, b)] = arc_bit(g, g.edge_id(a, b), a)
    return bits


def _lift_pair(g, w, o, forward: bool) -> Orientation:
    bits = _lift_bits(g, w.reduction, o)
    (e,) = w.removed
    tail = w.names["x1"] if forward else w.names["x2"]
    bits[e] = arc_bit(g, e, tail)
    return Orientation(g, bits)


def _lift_triple(g, w, o, case: str) -> Orientation:
    bits = _lift_bits(g, w.reduction, o)
    nm = w.names
    f1, f2 = w.removed
    # the surgery labels follow the direction of y1y2: its y1 is the head side
    y12 = g.edge_id(nm["y1"], nm["y2"])
    ours = g.edges[y12][1 - bits[y12]] == nm["y1"]
    x1, y1, x2, y2, e1, e2 = ((nm["x1"], nm["y1"], nm["x2"], nm["y2"], f1, f2) if ours
                              else (nm["x2"], nm["y2"], nm["x1"], nm["y1"], f2, f1))
    if case == "a":
        bits[e1] = arc_bit(g, e1, y1)
        bits[e2] = arc_bit(g, e2, x2)
    else:
        bits[e1] = arc_bit(g, e1, x1)
        bits[e2] = arc_bit(g, e2, y2)
    return Orientation(g, bits)


def certificate_from_witness(g: Graph, w: HeuristicWitness) -> FrankCertificate:
    first, second = witness_flows(g, w)
    if w.kind == TWO_ODD:
        attempts = [(_lift_pair(g, w, first.orientation, True), _lift_pair(g, w, second.orientation, False)),
                    (_lift_pair(g, w, first.orientation, False), _lift_pair(g, w, second.orientation, True))]
    else:
        attempts = [(_lift_triple(g, w, first.orientation, "a"), _lift_triple(g, w, second.orientation, "b")),
                    (_lift_triple(g, w, first.orientation, "b"), _lift_triple(g, w, second.orientation, "a"))]
    for pair in attempts:
        cert = FrankCertificate(list(pair), [deletable_edges(g, o) for o in pair], w.kind)
        if verify_certificate(g, cert):
            return cert
    raise LiftContradiction(f"{w.kind} witness on removed edges {w.removed} does not lift")


def heuristic_certificate(g: Graph, check: bool = True) -> Optional[FrankCertificate]:
    w = heuristic_frank2(g, check=check)
    return None if w is None else certificate_from_witness(g, w)
