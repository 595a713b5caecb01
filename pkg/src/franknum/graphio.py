"""Simple undirected graphs, graph6 I/O and instance classification.

Edges are stored as pairs ``(u, v)`` with ``u < v`` and indexed in
lexicographic order of the pair.  Certificates refer to edges by this index,
so the indexing is part of the external format.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from .errors import GraphFormatError

GRAPH6_HEADER = ">>graph6<<"


class Graph:
    """Immutable simple graph on vertices ``0..n-1``."""

    __slots__ = ("n", "edges", "adj", "_index")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        norm = set()
        for a, b in edges:
            if a == b:
                raise ValueError(f"loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a}, {b}) out of range for n={n}")
            e = (a, b) if a < b else (b, a)
            if e in norm:
                raise ValueError(f"parallel edge {e}")
            norm.add(e)
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(norm))

    @classmethod
    def _from_sorted(cls, n: int, edges: list) -> "Graph":
        """Build from already validated, sorted, distinct pairs u < v."""
        g = cls.__new__(cls)
        g.n = n
        g.edges = tuple(edges)
        return g

    def __getattr__(self, name):
        # adjacency and the edge index are built on first use
        if name == "adj":
            adj = [[] for _ in range(self.n)]
            for i, (a, b) in enumerate(self.edges):
                adj[a].append((b, i))
                adj[b].append((a, i))
            self.adj = tuple(tuple(x) for x in adj)
            return self.adj
        if name == "_index":
            self._index = {e: i for i, e in enumerate(self.edges)}
            return self._index
        raise AttributeError(name)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edge_id(self, a: int, b: int) -> int:
        """Index of edge ab; KeyError if absent."""
        return self._index[(a, b) if a < b else (b, a)]

    def has_edge(self, a: int, b: int) -> bool:
        return ((a, b) if a < b else (b, a)) in self._index

    def other(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        return b if v == a else a

    def neighbors(self, v: int) -> list[int]:
        return [w for w, _ in self.adj[v]]

    def incident(self, v: int) -> list[int]:
        return [e for _, e in self.adj[v]]

    def is_cubic(self) -> bool:
        return all(len(a) == 3 for a in self.adj)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _decode_size(data: bytes, pos: int) -> tuple[int, int]:
    def sextets(start, count):
        if start + count > len(data):
            raise GraphFormatError("truncated length field", start)
        val = 0
        for i in range(start, start + count):
            c = data[i]
            if not 63 <= c <= 126:
                raise GraphFormatError(f"character {chr(c)!r} out of range", i)
            val = (val << 6) | (c - 63)
        return val

    if pos >= len(data):
        raise GraphFormatError("empty graph6 string", pos)
    c = data[pos]
    if c < 63 or c > 126:
        raise GraphFormatError(f"character {chr(c)!r} out of range", pos)
    if c != 126:
        return c - 63, pos + 1
    if pos + 1 < len(data) and data[pos + 1] == 126:
        n = sextets(pos + 2, 6)
        if n <= 258047:
            raise GraphFormatError("non-canonical 8-byte length field", pos)
        return n, pos + 8
    n = sextets(pos + 1, 3)
    if n <= 62:
        raise GraphFormatError("non-canonical 4-byte length field", pos)
    return n, pos + 4


_SEXTETS = {c: format(c - 63, "06b") for c in range(63, 127)}


@lru_cache(maxsize=64)
def _column_pairs(n: int) -> tuple:
    """Vertex pairs in graph6 bit order: (0,1), (0,2), (1,2), (0,3), ..."""
    return tuple((u, v) for v in range(1, n) for u in range(v))


def parse_graph6(line) -> Graph:
    """Decode one graph6 string (an optional ``>>graph6<<`` header is skipped)."""
    if isinstance(line, str):
        line = line.encode("ascii", errors="replace")
    data = line.strip()
    pos = 0
    if data.startswith(GRAPH6_HEADER.encode()):
        pos = len(GRAPH6_HEADER)
    if data[pos:pos + 1] == b":":
        raise GraphFormatError("sparse6 input is not supported", pos)
    if data[pos:pos + 1] == b"&":
        raise GraphFormatError("digraph6 input is not supported", pos)
    n, pos = _decode_size(data, pos)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != nbytes:
        at = pos + min(len(body), nbytes)
        raise GraphFormatError(f"expected {nbytes} data bytes for n={n}, got {len(body)}", at)
    for i, c in enumerate(body):
        if not 63 <= c <= 126:
            raise GraphFormatError(f"character {chr(c)!r} out of range", pos + i)
    bits = "".join([_SEXTETS[c] for c in body])
    if "1" in bits[nbits:]:
        raise GraphFormatError("nonzero padding bits", pos + nbytes - 1)
    pairs = _column_pairs(n)
    edges = [pairs[k] for k in range(nbits) if bits[k] == "1"]
    edges.sort()
    return Graph._from_sorted(n, edges)


def write_graph6(g: Graph) -> str:
    n = g.n
    if n <= 62:
        out = [n + 63]
    elif n <= 258047:
        out = [126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)]
    else:
        out = [126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)]
    nbits = n * (n - 1) // 2
    body = bytearray((nbits + 5) // 6)
    for u, v in g.edges:
        k = v * (v - 1) // 2 + u
        body[k // 6] |= 32 >> (k % 6)
    out.extend(x + 63 for x in body)
    return bytes(out).decode("ascii")


def read_graph6_lines(lines: Iterable) -> Iterator[tuple[int, object]]:
    """Yield ``(index, Graph or GraphFormatError)`` for each non-blank line."""
    idx = 0
    for raw in lines:
        text = raw.decode("ascii", "replace") if isinstance(raw, bytes) else raw
        text = text.strip()
        if not text or text == GRAPH6_HEADER:
            continue
        try:
            yield idx, parse_graph6(text)
        except GraphFormatError as exc:
            yield idx, exc
        idx += 1


@dataclass(frozen=True)
class InstanceClass:
    is_cubic: bool
    is_connected: bool
    is_3_edge_connected: bool
    is_cyclically_4_edge_connected: bool
    is_3_edge_colourable: Optional[bool] = None

    def as_dict(self):
        return {
            "cubic": self.is_cubic,
            "connected": self.is_connected,
            "3ec": self.is_3_edge_connected,
            "cyclic4ec": self.is_cyclically_4_edge_connected,
            "3col": self.is_3_edge_colourable,
        }


def classify(g: Graph) -> InstanceClass:
    from . import topology

    cubic = g.is_cubic()
    connected = topology.edge_connectivity_at_least(g, 1)
    return InstanceClass(
        is_cubic=cubic,
        is_connected=connected,
        is_3_edge_connected=topology.edge_connectivity_at_least(g, 3),
        is_cyclically_4_edge_connected=topology.cyclic_edge_connectivity_at_least(g, 4),
        is_3_edge_colourable=(topology.three_edge_colouring(g) is not None) if cubic else None,
    )
