"""K_r-factors, maximum K_r-tilings, split tilings and the cover property."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

from .cliques import find_clique, iter_cliques_in, vertices_in_no_clique
from .errors import DomainError, PreconditionError
from .graph import Graph, bits, mask_of

FACTOR = "factor"
NO_FACTOR = "no-factor"
UNKNOWN = "unknown"

EXACT_TILING_LIMIT = 40


@dataclass(frozen=True)
class Budget:
    """Search limits. Node limits are deterministic; wall-clock limits are not."""

    max_nodes: int | None = 1_000_000
    time_ms: int | None = None
    max_cliques: int = 2_000_000

    def deadline(self) -> float | None:
        return None if self.time_ms is None else time.monotonic() + self.time_ms / 1000


class _BudgetOut(Exception):
    pass


class _Meter:
    def __init__(self, budget: Budget):
        self.budget = budget
        self.nodes = 0
        self.start = time.monotonic()
        self.deadline = budget.deadline()

    def tick(self) -> None:
        self.nodes += 1
        if self.budget.max_nodes is not None and self.nodes > self.budget.max_nodes:
            raise _BudgetOut
        if self.deadline is not None and not self.nodes & 255 and time.monotonic() > self.deadline:
            raise _BudgetOut

    @property
    def elapsed_ms(self) -> float:
        return (time.monotonic() - self.start) * 1000


@dataclass
class Tiling:
    r: int
    parts: list[tuple[int, ...]] = field(default_factory=list)
    # True when the tiling is certified maximum; False for greedy/heuristic output
    exact: bool = True

    @property
    def covered(self) -> list[int]:
        return sorted(v for p in self.parts for v in p)

    def __len__(self):
        return len(self.parts)

    def validate(self, g: Graph) -> None:
        seen = 0
        for p in self.parts:
            if len(p) != self.r or not g.is_clique(p):
                raise AssertionError(f"part {p} is not an {self.r}-clique")
            m = mask_of(p)
            if m & seen:
                raise AssertionError(f"part {p} overlaps an earlier part")
            seen |= m

    def to_dict(self) -> dict:
        return {"r": self.r, "parts": [list(p) for p in self.parts], "exact": self.exact}


@dataclass
class FactorCertificate:
    outcome: str
    tiling: Tiling | None = None
    note: str = ""
    nodes: int = 0
    elapsed_ms: float = 0.0

    @property
    def is_factor(self) -> bool:
        return self.outcome == FACTOR

    def to_dict(self, timings: bool = True) -> dict:
        d = {"outcome": self.outcome, "note": self.note, "nodes": self.nodes}
        if self.tiling is not None:
            d["parts"] = [list(p) for p in self.tiling.parts]
        if timings:
            d["elapsed_ms"] = round(self.elapsed_ms, 3)
        return d


def _check_r(r: int) -> None:
    if r < 2:
        raise DomainError(f"r must be at least 2, got {r}")


def _clique_table(g: Graph, r: int, within: int, limit: int):
    masks: list[int] = []
    members: list[tuple[int, ...]] = []
    for c in iter_cliques_in(g, r, within):
        if len(masks) >= limit:
            return None
        members.append(c)
        masks.append(mask_of(c))
    by_vertex: dict[int, list[int]] = {v: [] for v in bits(within)}
    for i, c in enumerate(members):
        for v in c:
            by_vertex[v].append(i)
    return masks, members, by_vertex


def has_kr_factor(g: Graph, r: int, budget: Budget | None = None) -> FactorCertificate:
    """Exact-cover search for a K_r-factor.

    The uncovered vertex with the fewest surviving candidate cliques is
    branched on first (lowest index breaks ties); a clique survives while all
    its vertices are uncovered. Running out of budget yields ``unknown``.
    """
    _check_r(r)
    budget = budget or Budget()
    meter = _Meter(budget)
    n = g.n
    if n % r:
        return FactorCertificate(NO_FACTOR, note=f"{r} does not divide n={n}")
    if n == 0:
        return FactorCertificate(FACTOR, Tiling(r, []))
    lonely = vertices_in_no_clique(g, r)
    if lonely:
        return FactorCertificate(NO_FACTOR, note=f"vertex {lonely[0]} lies in no K_{r}",
                                 elapsed_ms=meter.elapsed_ms)
    table = _clique_table(g, r, g.all_mask, budget.max_cliques)
    if table is None:
        return FactorCertificate(UNKNOWN, note="clique candidate list exceeds max_cliques",
                                 elapsed_ms=meter.elapsed_ms)
    masks, members, by_vertex = table
    chosen: list[int] = []

    def search(uncovered: int) -> bool:
        meter.tick()
        if not uncovered:
            return True
        best_v, best_opts = -1, None
        for v in bits(uncovered):
            opts = [i for i in by_vertex[v] if masks[i] & uncovered == masks[i]]
            if best_opts is None or len(opts) < len(best_opts):
                best_v, best_opts = v, opts
                if not opts:
                    return False
        for i in best_opts:
            chosen.append(i)
            if search(uncovered & ~masks[i]):
                return True
            chosen.pop()
        return False

    try:
        found = search(g.all_mask)
    except _BudgetOut:
        return FactorCertificate(UNKNOWN, note="search budget exhausted",
                                 nodes=meter.nodes, elapsed_ms=meter.elapsed_ms)
    if found:
        parts = sorted(members[i] for i in chosen)
        return FactorCertificate(FACTOR, Tiling(r, parts), nodes=meter.nodes,
                                 elapsed_ms=meter.elapsed_ms)
    return FactorCertificate(NO_FACTOR, note="exhaustive search found no factor",
                             nodes=meter.nodes, elapsed_ms=meter.elapsed_ms)


def factor_outcome(g: Graph, r: int, budget: Budget | None = None) -> str:
    return has_kr_factor(g, r, budget).outcome


# -- maximum tilings ------------------------------------------------------

def _greedy_tiling(g: Graph, r: int, masks, members, by_vertex) -> list[int]:
    """Repeatedly take the first clique through the most constrained vertex."""
    free = g.all_mask
    picked: list[int] = []
    while True:
        best = None
        for v in bits(free):
            opts = [i for i in by_vertex[v] if masks[i] & free == masks[i]]
            if opts and (best is None or len(opts) < best[0]):
                best = (len(opts), opts[0])
        if best is None:
            return picked
        picked.append(best[1])
        free &= ~masks[best[1]]


def _local_swap(g: Graph, r: int, picked: list[int], masks) -> list[int]:
    """Replace one part by two disjoint cliques while that grows the tiling."""
    improved = True
    while improved:
        improved = False
        covered = 0
        for i in picked:
            covered |= masks[i]
        for idx, i in enumerate(picked):
            free = (g.all_mask & ~covered) | masks[i]
            cands = [j for j, m in enumerate(masks) if m & free == m]
            pair = None
            for a in range(len(cands)):
                ma = masks[cands[a]]
                for b in range(a + 1, len(cands)):
                    if not ma & masks[cands[b]]:
                        pair = (cands[a], cands[b])
                        break
                if pair:
                    break
            if pair:
                picked = picked[:idx] + picked[idx + 1:] + list(pair)
                improved = True
                break
    return picked


def max_kr_tiling(g: Graph, r: int, budget: Budget | None = None,
                  exact_limit: int = EXACT_TILING_LIMIT) -> Tiling:
    """Largest K_r-tiling; ``exact`` on the result says whether optimality is proven.

    Branch and bound over the lowest available vertex: cover it by one of its
    surviving cliques or leave it uncovered. The bound adds ``floor(k / r)``
    for the ``k`` available vertices that still lie in a surviving clique.
    """
    _check_r(r)
    budget = budget or Budget()
    table = _clique_table(g, r, g.all_mask, budget.max_cliques)
    if table is None:
        raise PreconditionError("clique candidate list exceeds max_cliques")
    masks, members, by_vertex = table
    picked = _local_swap(g, r, _greedy_tiling(g, r, masks, members, by_vertex), masks)
    ceiling = g.n // r

    def result(idx: list[int], exact: bool) -> Tiling:
        return Tiling(r, sorted(members[i] for i in idx), exact=exact)

    if len(picked) == ceiling:
        return result(picked, True)
    if g.n > exact_limit:
        return result(picked, False)

    meter = _Meter(budget)
    best = list(picked)
    chosen: list[int] = []

    def live(avail: int) -> int:
        m = 0
        for i, cm in enumerate(masks):
            if cm & avail == cm:
                m |= cm
        return m

    def search(avail: int) -> bool:
        meter.tick()
        avail = live(avail)
        if len(chosen) + avail.bit_count() // r <= len(best):
            return False
        if not avail:
            best[:] = chosen
            return len(best) == ceiling
        v = (avail & -avail).bit_length() - 1
        for i in by_vertex[v]:
            if masks[i] & avail == masks[i]:
                chosen.append(i)
                done = search(avail & ~masks[i])
                chosen.pop()
                if done:
                    return True
        return search(avail & ~(1 << v))

    try:
        search(g.all_mask)
    except _BudgetOut:
        return result(best, False)
    return result(best, True)


def cross_tiling(g: Graph, X: Iterable[int], Y: Iterable[int], r: int, a: int) -> Tiling:
    """Greedy family of disjoint K_r's, each with ``a`` vertices in X and ``r - a`` in Y.

    Each step takes the first a-clique ``W`` of the remaining X whose common
    neighbourhood in the remaining Y still holds an (r-a)-clique.
    """
    xs = g.check_vertices(X)
    ys = g.check_vertices(Y)
    xm, ym = mask_of(xs), mask_of(ys)
    if xm & ym:
        raise PreconditionError("X and Y must be disjoint")
    if not 0 <= a <= r:
        raise DomainError(f"split a={a} must lie in [0, r={r}]")
    parts: list[tuple[int, ...]] = []
    if a > len(xs) or r - a > len(ys):
        return Tiling(r, parts, exact=False)
    while True:
        found = None
        for w in iter_cliques_in(g, a, xm):
            common = ym
            for v in w:
                common &= g.adj_mask(v)
            z = find_clique(g, r - a, common)
            if z is not None:
                found = tuple(sorted(w + z))
                break
        if found is None:
            return Tiling(r, parts, exact=False)
        parts.append(found)
        fm = mask_of(found)
        xm &= ~fm
        ym &= ~fm


def cover_check(g: Graph, r: int, W: Iterable[int] = ()) -> list[int]:
    """Vertices outside W that lie in no K_r of G - W (empty: cover property holds)."""
    _check_r(r)
    wm = mask_of(g.check_vertices(W))
    return vertices_in_no_clique(g, r, g.all_mask & ~wm)
