"""Orientations, strong connectivity, deletable edges and Frank certificates."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import NotStrong
from .graphio import Graph, parse_graph6, write_graph6


class Orientation:
    """Total orientation; ``bits[e] == 0`` means u->v for the stored pair u<v."""

    __slots__ = ("graph", "bits")

    def __init__(self, graph: Graph, bits: Sequence[int]):
        if len(bits) != graph.m:
            raise ValueError(f"orientation has {len(bits)} entries, graph has {graph.m} edges")
        self.graph = graph
        self.bits = tuple(1 if b else 0 for b in bits)

    @classmethod
    def from_arcs(cls, g: Graph, arcs: Iterable[tuple[int, int]]) -> "Orientation":
        bits = [None] * g.m
        for a, b in arcs:
            e = g.edge_id(a, b)
            bits[e] = 0 if a < b else 1
        if None in bits:
            raise ValueError("arcs do not cover every edge")
        return cls(g, bits)

    def tail(self, e: int) -> int:
        return self.graph.edges[e][self.bits[e]]

    def head(self, e: int) -> int:
        return self.graph.edges[e][1 - self.bits[e]]

    def arc(self, e: int) -> tuple[int, int]:
        return self.tail(e), self.head(e)

    def bitstring(self) -> str:
        return "".join(map(str, self.bits))

    def __eq__(self, other):
        return isinstance(other, Orientation) and self.graph == other.graph and self.bits == other.bits

    def __hash__(self):
        return hash(self.bits)

    def __repr__(self):
        return f"Orientation({self.bitstring()})"


def arc_bit(g: Graph, e: int, tail: int) -> int:
    return 0 if g.edges[e][0] == tail else 1


def _out_lists(g: Graph, bits) -> tuple[list, list]:
    out = [[] for _ in range(g.n)]
    inn = [[] for _ in range(g.n)]
    for e, (a, b) in enumerate(g.edges):
        if bits[e]:
            a, b = b, a
        out[a].append((b, e))
        inn[b].append((a, e))
    return out, inn


def _reaches_all(n, lists, root, skip=-1) -> bool:
    seen = [False] * n
    seen[root] = True
    stack = [root]
    count = 1
    while stack:
        x = stack.pop()
        for y, e in lists[x]:
            if not seen[y] and e != skip:
                seen[y] = True
                count += 1
                stack.append(y)
    return count == n


def _has_path(lists, src, dst, skip) -> bool:
    seen = {src}
    stack = [src]
    while stack:
        x = stack.pop()
        for y, e in lists[x]:
            if e == skip or y in seen:
                continue
            if y == dst:
                return True
            seen.add(y)
            stack.append(y)
    return False


def is_strong_bits(g: Graph, bits) -> bool:
    if g.n <= 1:
        return True
    out, inn = _out_lists(g, bits)
    return _reaches_all(g.n, out, 0) and _reaches_all(g.n, inn, 0)


def is_strong(g: Graph, o: Orientation) -> bool:
    return is_strong_bits(g, o.bits)


def is_deletable(g: Graph, o: Orientation, e: int) -> bool:
    """Whether e = u->v is deletable: some u->v path avoids e (o must be strong)."""
    if not is_strong(g, o):
        raise NotStrong("is_deletable needs a strong orientation")
    out, _ = _out_lists(g, o.bits)
    return _has_path(out, o.tail(e), o.head(e), e)


def deletable_mask(g: Graph, bits, edges: Optional[Iterable[int]] = None) -> int:
    """Bitmask of deletable edges among ``edges`` (default all); 0 if not strong."""
    out, inn = _out_lists(g, bits)
    if g.n > 1 and not (_reaches_all(g.n, out, 0) and _reaches_all(g.n, inn, 0)):
        return 0
    mask = 0
    ends = g.edges
    for e in range(g.m) if edges is None else edges:
        a, b = ends[e]
        if bits[e]:
            a, b = b, a
        if _has_path(out, a, b, e):
            mask |= 1 << e
    return mask


def deletable_edges(g: Graph, o: Orientation) -> frozenset:
    mask = deletable_mask(g, o.bits)
    return frozenset(e for e in range(g.m) if mask >> e & 1)


def reverse(o: Orientation) -> Orientation:
    return Orientation(o.graph, [1 - b for b in o.bits])


PROVENANCES = ("heuristic-2odd", "heuristic-2odd1even", "exact", "oracle", "flow-4flow", "flow-6flow")


@dataclass
class FrankCertificate:
    orientations: list
    deletable: list = field(default_factory=list)
    provenance: str = "exact"

    def to_json(self, g: Graph) -> str:
        return json.dumps({
            "graph6": write_graph6(g),
            "provenance": self.provenance,
            "orientations": [o.bitstring() for o in self.orientations],
            "deletable": [sorted(d) for d in self.deletable],
        }, indent=1)

    @classmethod
    def from_json(cls, text: str) -> tuple[Graph, "FrankCertificate"]:
        doc = json.loads(text)
        g = parse_graph6(doc["graph6"])
        ors = [Orientation(g, [int(c) for c in s]) for s in doc["orientations"]]
        dels = [frozenset(d) for d in doc.get("deletable", [])]
        return g, cls(ors, dels, doc.get("provenance", "exact"))


def first_uncovered_edge(g: Graph, c: FrankCertificate) -> Optional[int]:
    """Lowest edge deletable in none of the orientations, recomputed from scratch."""
    covered = 0
    for o in c.orientations:
        if o.graph.m != g.m:
            raise ValueError("orientation belongs to a different graph")
        covered |= deletable_mask(g, o.bits)
    for e in range(g.m):
        if not covered >> e & 1:
            return e
    return None


def verify_certificate(g: Graph, c: FrankCertificate) -> bool:
    return len(c.orientations) >= 1 and first_uncovered_edge(g, c) is None
