"""Integer and group flows, and the flow-based orientation constructions.

Every flow lives on the full host graph: edges outside the flow's support
carry value 0 with the reference orientation u->v.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

from . import topology
from .errors import (
    CancellationToZero,
    InternalContradiction,
    PreconditionViolated,
    ValueNotTwo,
    ZeroEdge,
)
from .graphio import Graph
from .orientation import FrankCertificate, Orientation, arc_bit, deletable_mask


@dataclass(frozen=True)
class IntFlow:
    orientation: Orientation
    value: tuple

    @property
    def graph(self) -> Graph:
        return self.orientation.graph

    @classmethod
    def on_circuits(cls, g: Graph, arcs: dict, value: int) -> "IntFlow":
        """Constant ``value`` on the oriented edges ``arcs`` (edge -> bit), zero elsewhere."""
        bits = [arcs.get(e, 0) for e in range(g.m)]
        vals = [value if e in arcs else 0 for e in range(g.m)]
        return cls(Orientation(g, bits), tuple(vals))

    def is_nowhere_zero(self) -> bool:
        return all(self.value)

    def is_all_positive(self) -> bool:
        return all(v > 0 for v in self.value)

    def max_abs(self) -> int:
        return max((abs(v) for v in self.value), default=0)


@dataclass(frozen=True)
class GroupFlow:
    group: str  # "Z2xZ2" or "Z2xZ3"
    orientation: Orientation
    value: tuple  # pairs

    @property
    def graph(self) -> Graph:
        return self.orientation.graph

    def is_nowhere_zero(self) -> bool:
        return all(v != (0, 0) for v in self.value)


GROUP_MODULI = {"Z2xZ2": (2, 2), "Z2xZ3": (2, 3)}


def flow_violation(fl) -> Optional[int]:
    """First vertex where conservation fails, or None."""
    g = fl.graph
    bits = fl.orientation.bits
    if isinstance(fl, GroupFlow):
        m1, m2 = GROUP_MODULI[fl.group]
        net = [[0, 0] for _ in range(g.n)]
        for e, (a, b) in enumerate(g.edges):
            x, y = fl.value[e]
            t, h = (b, a) if bits[e] else (a, b)
            net[t][0] += x
            net[t][1] += y
            net[h][0] -= x
            net[h][1] -= y
        for v in range(g.n):
            if net[v][0] % m1 or net[v][1] % m2:
                return v
        return None
    net = [0] * g.n
    for e, (a, b) in enumerate(g.edges):
        t, h = (b, a) if bits[e] else (a, b)
        net[t] += fl.value[e]
        net[h] -= fl.value[e]
    for v in range(g.n):
        if net[v]:
            return v
    return None


def verify_flow(fl) -> bool:
    return flow_violation(fl) is None


def to_all_positive(fl: IntFlow) -> IntFlow:
    bits = list(fl.orientation.bits)
    vals = list(fl.value)
    for e, v in enumerate(vals):
        if v == 0:
            raise ZeroEdge(f"edge {e} has value 0")
        if v < 0:
            bits[e] ^= 1
            vals[e] = -v
    return IntFlow(Orientation(fl.graph, bits), tuple(vals))


def positive_combination(a: IntFlow, b: IntFlow) -> IntFlow:
    """Sum of ``a`` and ``b`` after aligning ``b`` to ``a``'s orientation, made all-positive."""
    g = a.graph
    if b.graph.m != g.m:
        raise ValueError("flows live on different graphs")
    ab, bb = a.orientation.bits, b.orientation.bits
    vals = []
    for e in range(g.m):
        bv = b.value[e] if ab[e] == bb[e] else -b.value[e]
        s = a.value[e] + bv
        if s == 0:
            raise CancellationToZero(e)
        vals.append(s)
    return to_all_positive(IntFlow(a.orientation, tuple(vals)))


def is_strong_two_edge(fl: IntFlow, e: int) -> bool:
    """No 3-edge-cut through ``e`` whose other two edges carry value 1."""
    if fl.value[e] != 2:
        raise ValueNotTwo(f"edge {e} has value {fl.value[e]}")
    g = fl.graph
    ones = [x for x in range(g.m) if x != e and fl.value[x] == 1]
    for p, q in combinations(ones, 2):
        if len(topology.components(g, (e, p, q))) > 1:
            return False
    return True


def flow_deletable_lower_bound(fl: IntFlow, check_connectivity: bool = True) -> frozenset:
    """Value-1 edges plus strong 2-edges of an all-positive nowhere-zero flow."""
    g = fl.graph
    if check_connectivity and not topology.edge_connectivity_at_least(g, 3):
        raise PreconditionViolated("graph must be 3-edge-connected")
    if not fl.is_all_positive():
        raise PreconditionViolated("flow must be all-positive and nowhere-zero")
    out = set()
    for e, v in enumerate(fl.value):
        if v == 1 or (v == 2 and is_strong_two_edge(fl, e)):
            out.add(e)
    return frozenset(out)


# ---------------------------------------------------------------------------
# group flow search

def _search_group_flow(g: Graph, moduli) -> Optional[list]:
    m1, m2 = moduli
    values = [(x, y) for x in range(m1) for y in range(m2) if (x, y) != (0, 0)]
    val = [None] * g.m
    free = [g.degree(v) for v in range(g.n)]
    net = [[0, 0] for _ in range(g.n)]  # out minus in, reference orientation

    def assign(e, x, y, trail):
        a, b = g.edges[e]
        val[e] = (x, y)
        net[a][0] += x; net[a][1] += y
        net[b][0] -= x; net[b][1] -= y
        free[a] -= 1
        free[b] -= 1
        trail.append(e)

    def undo(trail):
        for e in reversed(trail):
            a, b = g.edges[e]
            x, y = val[e]
            net[a][0] -= x; net[a][1] -= y
            net[b][0] += x; net[b][1] += y
            free[a] += 1
            free[b] += 1
            val[e] = None
        trail.clear()

    def propagate(start, trail):
        queue = deque(start)
        while queue:
            v = queue.popleft()
            if free[v] == 0:
                if net[v][0] % m1 or net[v][1] % m2:
                    return False
                continue
            if free[v] != 1:
                continue
            e = next(x for _, x in g.adj[v] if val[x] is None)
            sign = 1 if g.edges[e][0] == v else -1
            x = (-sign * net[v][0]) % m1
            y = (-sign * net[v][1]) % m2
            if (x, y) == (0, 0):
                return False
            assign(e, x, y, trail)
            queue.extend(g.edges[e])
        return True

    def rec(i):
        while i < g.m and val[i] is not None:
            i += 1
        if i == g.m:
            return True
        for x, y in values:
            trail = []
            assign(i, x, y, trail)
            if propagate(g.edges[i], trail) and rec(i + 1):
                return True
            undo(trail)
        return False

    trail = []
    if not propagate(range(g.n), trail):
        return None
    return list(val) if rec(0) else None


def find_z2z2_flow(g: Graph) -> Optional[GroupFlow]:
    ref = Orientation(g, [0] * g.m)
    if g.is_cubic():
        col = topology.three_edge_colouring(g)
        if col is None:
            return None
        table = [(0, 1), (1, 0), (1, 1)]
        return GroupFlow("Z2xZ2", ref, tuple(table[c] for c in col))
    vals = _search_group_flow(g, GROUP_MODULI["Z2xZ2"])
    return None if vals is None else GroupFlow("Z2xZ2", ref, tuple(vals))


def find_z2z3_flow(g: Graph) -> Optional[GroupFlow]:
    vals = _search_group_flow(g, GROUP_MODULI["Z2xZ3"])
    return None if vals is None else GroupFlow("Z2xZ3", Orientation(g, [0] * g.m), tuple(vals))


# ---------------------------------------------------------------------------
# circuits and smooth orientations

def peel_circuits(g: Graph, edge_set: Iterable[int]) -> list[list[tuple[int, int]]]:
    """Split an even subgraph into edge-disjoint circuits.

    Walks from the lowest vertex with unused edges, always taking the lowest
    unused incident edge, and cuts off a circuit whenever the walk revisits a
    vertex.  Each circuit is a list of ``(tail, edge)`` steps, already smoothly
    oriented and rotated to start at its lowest vertex.
    """
    unused = set(edge_set)
    inc = [sorted(e for _, e in g.adj[v] if e in unused) for v in range(g.n)]
    if any(len(x) % 2 for x in inc):
        raise ValueError("edge set is not even")
    circuits = []
    while unused:
        start = min(v for v in range(g.n) if any(e in unused for e in inc[v]))
        walk_v = [start]
        walk_e = []
        pos = {start: 0}
        cur = start
        while True:
            e = next((x for x in inc[cur] if x in unused), None)
            if e is None:
                break
            unused.discard(e)
            nxt = g.other(e, cur)
            walk_e.append(e)
            if nxt in pos:
                i = pos[nxt]
                verts = walk_v[i:]
                es = walk_e[i:]
                for v in verts[1:]:
                    del pos[v]
                del walk_v[i + 1:]
                del walk_e[i:]
                circuits.append(_rotate(verts, es))
                cur = nxt
            else:
                pos[nxt] = len(walk_v)
                walk_v.append(nxt)
                cur = nxt
    return circuits


def _rotate(verts, es):
    k = verts.index(min(verts))
    return [(verts[(k + j) % len(verts)], es[(k + j) % len(es)]) for j in range(len(es))]


def smooth_arcs(g: Graph, circuits) -> dict:
    """Edge -> orientation bit for circuits given as ``(tail, edge)`` steps."""
    return {e: arc_bit(g, e, t) for circ in circuits for t, e in circ}


# ---------------------------------------------------------------------------
# two complementary 4-flows from a Z2xZ2 flow

def complementary_4flows(g: Graph, gf: GroupFlow) -> tuple[IntFlow, IntFlow, dict]:
    """The two all-positive 4-flows whose value-1 edges together cover E(G).

    Returns the flows and the colour classes ``{"A", "B", "C"}``.
    """
    if gf.group != "Z2xZ2" or not gf.is_nowhere_zero() or not verify_flow(gf):
        raise PreconditionViolated("need a nowhere-zero Z2xZ2-flow")
    cls = {"A": set(), "B": set(), "C": set()}
    for e, v in enumerate(gf.value):
        cls[{(0, 1): "A", (1, 0): "B", (1, 1): "C"}[v]].add(e)
    o1 = smooth_arcs(g, peel_circuits(g, cls["A"] | cls["C"]))
    o2 = smooth_arcs(g, peel_circuits(g, cls["B"] | cls["C"]))
    first = positive_combination(IntFlow.on_circuits(g, o1, 1), IntFlow.on_circuits(g, o2, 2))
    second = positive_combination(IntFlow.on_circuits(g, o1, 2), IntFlow.on_circuits(g, o2, -1))
    return first, second, cls


def orientations_from_4flow(g: Graph, gf: GroupFlow) -> FrankCertificate:
    if not topology.edge_connectivity_at_least(g, 3):
        raise PreconditionViolated("graph must be 3-edge-connected")
    first, second, _ = complementary_4flows(g, gf)
    for fl in (first, second):
        if not verify_flow(fl) or fl.max_abs() > 3:
            raise InternalContradiction("constructed flow is not a 4-flow")
    return FrankCertificate(
        [first.orientation, second.orientation],
        [flow_deletable_lower_bound(f, check_connectivity=False) for f in (first, second)],
        "flow-4flow",
    )


# ---------------------------------------------------------------------------
# four flows from a Z2xZ3 flow

# rows: (g_D, g_A, g_B, g_C) and the edge classes that receive value 1
FOUR_FLOW_COEFFS = (
    ((1, 2, 2, -4), ("D0", "A-", "B-")),
    ((3, 1, 1, -2), ("A0", "B0", "C+")),
    ((2, 3, -4, 1), ("C0", "A-", "C-")),
    ((2, -3, -1, 4), ("A+", "B+", "B0")),
)


@dataclass
class SixFlowConstruction:
    flows: list
    classes: dict  # class name -> edge set
    colour: dict  # H' edge -> "A" | "B" | "C"


def _colour_multigraph(nodes: int, ends: Sequence[tuple[int, int]]) -> Optional[list[int]]:
    col = [-1] * len(ends)
    used = [0] * nodes

    def rec(i):
        if i == len(ends):
            return True
        a, b = ends[i]
        for c in range(3):
            bit = 1 << c
            if (used[a] | used[b]) & bit:
                continue
            col[i] = c
            used[a] |= bit
            used[b] |= bit
            if rec(i + 1):
                return True
            used[a] &= ~bit
            used[b] &= ~bit
        return False

    return col if rec(0) else None


def six_flow_construction(g: Graph, gf: GroupFlow) -> SixFlowConstruction:
    """Four all-positive flows from a nowhere-zero Z2xZ3-flow on a cubic graph."""
    if not g.is_cubic():
        raise PreconditionViolated("graph must be cubic")
    if gf.group != "Z2xZ3" or not gf.is_nowhere_zero() or not verify_flow(gf):
        raise PreconditionViolated("need a nowhere-zero Z2xZ3-flow")
    d_edges = {e for e, (x, _) in enumerate(gf.value) if x}
    h_edges = {e for e, (_, y) in enumerate(gf.value) if y}
    o_d = smooth_arcs(g, peel_circuits(g, d_edges))

    hdeg = [sum(1 for _, e in g.adj[v] if e in h_edges) for v in range(g.n)]
    if any(d == 1 for d in hdeg):
        raise InternalContradiction("second coordinate has a degree-1 vertex")
    branch = [v for v in range(g.n) if hdeg[v] == 3]
    node = {v: i for i, v in enumerate(branch)}
    # paths of H' between branch vertices are the edges of the cubic multigraph H
    h_paths = []
    seen = set()
    for s in branch:
        for w, e in g.adj[s]:
            if e not in h_edges or e in seen:
                continue
            verts, es = [s], [e]
            seen.add(e)
            cur, ce = w, e
            while hdeg[cur] == 2:
                verts.append(cur)
                ce = next(x for _, x in g.adj[cur] if x in h_edges and x != ce)
                seen.add(ce)
                es.append(ce)
                cur = g.other(ce, cur)
            verts.append(cur)
            h_paths.append((verts, es))
    ends = [(node[p[0][0]], node[p[0][-1]]) for p in h_paths]
    if any(a == b for a, b in ends):
        raise InternalContradiction("H has a loop")
    side = [-1] * len(branch)
    nbr = [[] for _ in branch]
    for a, b in ends:
        nbr[a].append(b)
        nbr[b].append(a)
    for s in range(len(branch)):
        if side[s] >= 0:
            continue
        side[s] = 0
        q = deque([s])
        while q:
            x = q.popleft()
            for y in nbr[x]:
                if side[y] < 0:
                    side[y] = 1 - side[x]
                    q.append(y)
                elif side[y] == side[x]:
                    raise InternalContradiction("H is not bipartite")
    hcol = _colour_multigraph(len(branch), ends)
    if hcol is None:
        raise InternalContradiction("cubic bipartite H has no 3-edge-colouring")

    colour = {}
    o_h = {}
    for (verts, es), c, (a, b) in zip(h_paths, hcol, ends):
        if side[a] == 1:
            verts, es = verts[::-1], es[::-1]
        for t, e in zip(verts, es):
            o_h[e] = arc_bit(g, e, t)
            colour[e] = "ABC"[c]
    circuit_edges = h_edges - set(colour)
    for e, bit in smooth_arcs(g, peel_circuits(g, circuit_edges)).items():
        o_h[e] = bit
        colour[e] = "A"

    classes = {f"{c}{s}": set() for c in "ABC" for s in "0+-"}
    classes["D0"] = set()
    for e in range(g.m):
        if e not in h_edges:
            classes["D0"].add(e)
        elif e not in d_edges:
            classes[colour[e] + "0"].add(e)
        elif o_d[e] == o_h[e]:
            classes[colour[e] + "+"].add(e)
        else:
            classes[colour[e] + "-"].add(e)

    flows = []
    for (gd, ga, gb, gc), ones in FOUR_FLOW_COEFFS:
        per = {"A": ga, "B": gb, "C": gc}
        fd = IntFlow.on_circuits(g, o_d, gd)
        fh = IntFlow(
            Orientation(g, [o_h.get(e, 0) for e in range(g.m)]),
            tuple(per[colour[e]] if e in h_edges else 0 for e in range(g.m)),
        )
        fl = positive_combination(fd, fh)
        if not verify_flow(fl) or fl.max_abs() > 6:
            raise InternalContradiction("combined flow violates conservation or exceeds 6")
        expected = set().union(*(classes[c] for c in ones))
        if {e for e, v in enumerate(fl.value) if v == 1} != expected:
            raise InternalContradiction("value-1 edges differ from the class prediction")
        flows.append(fl)
    return SixFlowConstruction(flows, {k: frozenset(v) for k, v in classes.items()}, colour)


def four_orientations(g: Graph, gf: GroupFlow) -> FrankCertificate:
    if not topology.edge_connectivity_at_least(g, 3):
        raise PreconditionViolated("graph must be 3-edge-connected")
    con = six_flow_construction(g, gf)
    return FrankCertificate(
        [f.orientation for f in con.flows],
        [flow_deletable_lower_bound(f, check_connectivity=False) for f in con.flows],
        "flow-6flow",
    )
