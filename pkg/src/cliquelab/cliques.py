"""Fixed-size clique enumeration and K_l-freeness tests."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .errors import DomainError
from .graph import Graph, bits


@dataclass(frozen=True)
class CliqueList:
    r: int
    cliques: list[tuple[int, ...]] = field(default_factory=list)
    truncated: bool = False

    def __len__(self):
        return len(self.cliques)

    def __iter__(self):
        return iter(self.cliques)


def iter_cliques_in(g: Graph, r: int, within: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield r-cliques inside the vertex bitmask ``within`` in lexicographic order.

    Vertices are extended in increasing order, so each clique appears once with
    sorted members; branches whose candidate pool is too small are cut.
    """
    if r < 0:
        raise DomainError(f"clique order must be non-negative, got {r}")
    if within is None:
        within = g.all_mask
    if r == 0:
        yield ()
        return
    adj = g.masks
    stack: list[int] = []

    def extend(cand: int, need: int):
        if need == 0:
            yield tuple(stack)
            return
        while cand:
            if cand.bit_count() < need:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            nxt = cand & adj[v]
            if need == 1 or nxt.bit_count() >= need - 1:
                stack.append(v)
                yield from extend(nxt, need - 1)
                stack.pop()

    yield from extend(within, r)


def enumerate_r_cliques(g: Graph, r: int, cap: int | None = None) -> CliqueList:
    if r < 1:
        raise DomainError(f"clique order must be at least 1, got {r}")
    if cap is not None and cap < 1:
        raise DomainError(f"cap must be at least 1, got {cap}")
    out = []
    truncated = False
    for c in iter_cliques_in(g, r):
        if cap is not None and len(out) == cap:
            truncated = True
            break
        out.append(c)
    return CliqueList(r, out, truncated)


def find_clique(g: Graph, r: int, within: int | None = None) -> tuple[int, ...] | None:
    """First r-clique in canonical order inside ``within``, or None."""
    return next(iter_cliques_in(g, r, within), None)


def cliques_containing(g: Graph, v: int, r: int, within: int | None = None) -> Iterator[tuple[int, ...]]:
    """r-cliques through ``v`` (inside ``within``), each as a sorted tuple."""
    nb = g.adj_mask(v)
    if within is not None:
        nb &= within
    for rest in iter_cliques_in(g, r - 1, nb):
        yield tuple(sorted(rest + (v,)))


def is_kl_free(g: Graph, ell: int, within: int | None = None) -> tuple[bool, tuple[int, ...] | None]:
    """Return ``(free, witness)``; ``witness`` is the first K_ell found, if any."""
    if ell < 1:
        raise DomainError(f"ell must be at least 1, got {ell}")
    w = find_clique(g, ell, within)
    return w is None, w


def count_cliques(g: Graph, r: int) -> int:
    return sum(1 for _ in iter_cliques_in(g, r))


def vertices_in_no_clique(g: Graph, r: int, within: int | None = None) -> list[int]:
    if within is None:
        within = g.all_mask
    return [v for v in bits(within) if find_clique(g, r - 1, g.adj_mask(v) & within) is None]
