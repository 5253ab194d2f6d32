"""Immutable simple graphs on vertices ``0..n-1``.

Adjacency is stored as one Python int bitmask per vertex, which keeps the
clique and independence searches cheap without any native dependency.
"""
from __future__ import annotations

import random
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, ParseError, SelfLoopError, VertexRangeError

MAX_N = 100_000


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Graph:
    """Simple undirected graph; never mutated after construction."""

    __slots__ = ("n", "_adj", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise DomainError(f"vertex count must be non-negative, got {n}")
        if n > MAX_N:
            raise DomainError(f"vertex count {n} exceeds supported maximum {MAX_N}")
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"edge ({u}, {v}) out of range for n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.n = n
        self._adj = tuple(adj)
        self._hash = None

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> "Graph":
        """Build from neighbour bitmasks; the masks must already be symmetric."""
        g = cls.__new__(cls)
        g.n = len(masks)
        g._adj = tuple(masks)
        g._hash = None
        for v, m in enumerate(g._adj):
            if m >> v & 1:
                raise SelfLoopError(f"self-loop at vertex {v}")
            if m >> g.n:
                raise VertexRangeError(f"neighbour of {v} out of range for n={g.n}")
            for u in bits(m):
                if not g._adj[u] >> v & 1:
                    raise DomainError(f"asymmetric adjacency between {v} and {u}")
        return g

    # -- queries ---------------------------------------------------------

    def adj_mask(self, v: int) -> int:
        return self._adj[v]

    @property
    def masks(self) -> tuple[int, ...]:
        return self._adj

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self._adj[v]))

    def degree(self, v: int) -> int:
        return self._adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [m.bit_count() for m in self._adj]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u] >> v & 1)

    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        for u, m in enumerate(self._adj):
            for v in bits(m >> (u + 1)):
                yield u, u + 1 + v

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        m = mask_of(vs)
        return all((self._adj[v] | (1 << v)) & m == m for v in vs)

    def check_vertices(self, vertices: Iterable[int]) -> list[int]:
        out = sorted(set(vertices))
        for v in out:
            if not 0 <= v < self.n:
                raise VertexRangeError(f"vertex {v} out of range for n={self.n}")
        return out

    def __eq__(self, other):
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._adj)
        return self._hash

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges()})"


def min_degree(g: Graph) -> int:
    if g.n == 0:
        raise DomainError("minimum degree of the empty graph is undefined")
    return min(g.degrees())


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, list[int]]:
    """Return ``(G[s], labels)`` where new vertex ``i`` is old vertex ``labels[i]``."""
    labels = g.check_vertices(s)
    index = {v: i for i, v in enumerate(labels)}
    keep = mask_of(labels)
    masks = []
    for v in labels:
        masks.append(mask_of(index[u] for u in bits(g.adj_mask(v) & keep)))
    return Graph.from_masks(masks), labels


def subgraph_mask(g: Graph, keep: int) -> Graph:
    """Induced subgraph on the bitmask ``keep`` (relabelled in increasing order)."""
    return induced_subgraph(g, bits(keep))[0]


# -- serialization ------------------------------------------------------

def _g6_size(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])


def to_graph6(g: Graph) -> str:
    out = bytearray(_g6_size(g.n))
    acc = nbits = 0
    for j in range(1, g.n):
        row = g.adj_mask(j)
        for i in range(j):
            acc = (acc << 1) | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return out.decode("ascii")


def from_graph6(text: str) -> Graph:
    s = text.strip()
    start = 0
    if s.startswith(">>graph6<<"):
        start = len(">>graph6<<")
    data = s.encode("ascii", errors="replace")
    for off in range(start, len(data)):
        if not 63 <= data[off] <= 126:
            raise ParseError(f"invalid graph6 character {chr(data[off])!r}", off)
    pos = start
    if pos >= len(data):
        raise ParseError("empty graph6 string", pos)
    if data[pos] < 126:
        n = data[pos] - 63
        pos += 1
    else:
        width = 3
        if pos + 1 < len(data) and data[pos + 1] == 126:
            width = 6
            pos += 1
        pos += 1
        if pos + width > len(data):
            raise ParseError("truncated graph6 size header", pos)
        n = 0
        for b in data[pos:pos + width]:
            n = (n << 6) | (b - 63)
        pos += width
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(data) - pos != need:
        raise ParseError(f"expected {need} body bytes for n={n}, found {len(data) - pos}",
                         pos + min(need, len(data) - pos))
    if n > MAX_N:
        raise DomainError(f"vertex count {n} exceeds supported maximum {MAX_N}")
    adj = [0] * n
    k = 0
    i, j = 0, 1
    for b in data[pos:]:
        v = b - 63
        for shift in range(5, -1, -1):
            if k == nbits:
                break
            if v >> shift & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
            i += 1
            if i == j:
                i, j = 0, j + 1
    return Graph.from_masks(adj)


def to_edge_list(g: Graph) -> str:
    """Edge-list text; a leading ``# n=...`` comment preserves isolated vertices."""
    lines = [f"# n={g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def from_edge_list(text: str, n: int | None = None) -> Graph:
    edges = []
    declared = n
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)
        if len(body) == 2 and declared is None:
            tag = body[1].strip()
            if tag.startswith("n="):
                try:
                    declared = int(tag[2:])
                except ValueError:
                    raise ParseError(f"bad vertex-count comment {tag!r}", offset) from None
        fields = body[0].split()
        if fields:
            if len(fields) != 2:
                raise ParseError(f"expected 'u v', got {body[0].strip()!r}", offset)
            try:
                u, v = int(fields[0]), int(fields[1])
            except ValueError:
                raise ParseError(f"non-integer vertex in {body[0].strip()!r}", offset) from None
            if u < 0 or v < 0:
                raise VertexRangeError(f"negative vertex in edge ({u}, {v})")
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u} (byte offset {offset})")
            edges.append((u, v))
        offset += len(line.encode("utf-8"))
    top = max((max(e) for e in edges), default=-1) + 1
    if declared is None:
        declared = top
    elif top > declared:
        raise VertexRangeError(f"vertex {top - 1} out of range for n={declared}")
    return Graph(declared, edges)


def parse_graph(text: str, format: str = "auto") -> Graph:
    """Parse ``text`` as ``graph6``, ``edge-list`` or ``auto`` (sniffed)."""
    if format == "auto":
        stripped = text.strip()
        single = stripped and "\n" not in stripped and " " not in stripped
        format = "graph6" if single and not stripped.lstrip("-").isdigit() else "edge-list"
    if format == "graph6":
        return from_graph6(text)
    if format in ("edge-list", "edgelist"):
        return from_edge_list(text)
    raise DomainError(f"unknown graph format {format!r}")


def serialize_graph(g: Graph, format: str = "graph6") -> str:
    if format == "graph6":
        return to_graph6(g)
    if format in ("edge-list", "edgelist"):
        return to_edge_list(g)
    raise DomainError(f"unknown graph format {format!r}")


# -- standard families --------------------------------------------------

def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph.from_masks([full ^ (1 << v) for v in range(n)])


def empty_graph(n: int) -> Graph:
    return Graph(n)


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen_graph() -> Graph:
    """Outer 5-cycle 0..4, spokes i--i+5, inner pentagram on 5..9."""
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def disjoint_union(*graphs: Graph) -> Graph:
    masks = []
    shift = 0
    for g in graphs:
        masks.extend(m << shift for m in g.masks)
        shift += g.n
    return Graph.from_masks(masks)


def complement(g: Graph) -> Graph:
    full = g.all_mask
    return Graph.from_masks([(full ^ m) & ~(1 << v) for v, m in enumerate(g.masks)])


def gnp(n: int, p: float, seed) -> Graph:
    rng = random.Random(seed)
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def blowup_of(g: Graph, sizes: Sequence[int]) -> Graph:
    """Replace vertex ``v`` by an independent set of ``sizes[v]`` vertices."""
    starts = []
    total = 0
    for s in sizes:
        starts.append(total)
        total += s
    class_mask = [((1 << s) - 1) << st for s, st in zip(sizes, starts)]
    masks = [0] * total
    for v in range(g.n):
        nb = 0
        for u in bits(g.adj_mask(v)):
            nb |= class_mask[u]
        for w in range(starts[v], starts[v] + sizes[v]):
            masks[w] = nb
    return Graph.from_masks(masks)
