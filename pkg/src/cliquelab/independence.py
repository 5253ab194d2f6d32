"""The l-independence number: size of a largest induced K_l-free subgraph."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .cliques import find_clique
from .errors import DomainError, PreconditionError
from .graph import Graph, bits, mask_of

EXACT_LIMIT = 30


@dataclass
class AlphaResult:
    lower: int
    upper: int
    witness: list[int]
    exact: bool
    nodes: int = 0
    # set by the threshold predicate: did the search stop once it exceeded m?
    stopped_early: bool = field(default=False)

    @property
    def value(self) -> int | None:
        return self.lower if self.exact else None

    def to_dict(self) -> dict:
        d = {"witness": self.witness, "exact": self.exact}
        if self.exact:
            d["value"] = self.lower
        else:
            d["interval"] = [self.lower, self.upper]
        return d


def clique_packing(g: Graph, ell: int, within: int) -> int:
    """Size of a greedy family of disjoint K_ell inside ``within``."""
    count = 0
    rest = within
    while True:
        q = find_clique(g, ell, rest)
        if q is None:
            return count
        count += 1
        rest &= ~mask_of(q)


def _check_ell(ell: int) -> None:
    if ell < 2:
        raise DomainError(f"ell must be at least 2, got {ell}")


def greedy_kfree_set(g: Graph, ell: int, order) -> int:
    """Add vertices in ``order`` while the chosen set stays K_ell-free; return its mask."""
    chosen = 0
    for v in order:
        if find_clique(g, ell - 1, g.adj_mask(v) & chosen) is None:
            chosen |= 1 << v
    return chosen


def alpha_ell_exact(g: Graph, ell: int, threshold: int | None = None,
                    max_nodes: int | None = None) -> AlphaResult:
    """Branch and bound for alpha_ell.

    Each node keeps a live vertex set ``C`` and a forced-in subset ``F``. If
    ``G[C]`` still contains a K_ell ``Q``, some unforced vertex of ``Q`` must
    go: the k-th branch deletes the k-th unforced vertex and forces the ones
    before it. Vertices that would close a K_ell with forced vertices are
    deleted eagerly. The bound is ``|C|`` minus a greedy disjoint K_ell
    packing, since every packed clique costs at least one deletion.

    With ``threshold=m`` the search stops as soon as a K_ell-free set larger
    than ``m`` is found; the returned result then has ``stopped_early`` set
    and only certifies ``alpha_ell > m``.
    """
    _check_ell(ell)
    n = g.n
    if n > EXACT_LIMIT:
        raise PreconditionError(
            f"exact mode supports n <= {EXACT_LIMIT} (got n={n}); use bounds mode instead")
    adj = g.masks
    # a decent incumbent makes the bound bite from the start
    best = greedy_kfree_set(g, ell, sorted(range(n), key=lambda v: (g.degree(v), v)))
    state = {"best": best, "nodes": 0, "stop": False}

    def propagate(C: int, F: int) -> int:
        changed = True
        while changed:
            changed = False
            for v in bits(C & ~F):
                if find_clique(g, ell - 1, adj[v] & F) is not None:
                    C &= ~(1 << v)
                    changed = True
        return C

    def rec(C: int, F: int) -> None:
        if state["stop"]:
            return
        state["nodes"] += 1
        if max_nodes is not None and state["nodes"] > max_nodes:
            state["stop"] = True
            return
        C = propagate(C, F)
        size = C.bit_count()
        if size <= state["best"].bit_count():
            return
        q = find_clique(g, ell, C)
        if q is None:
            state["best"] = C
            if threshold is not None and size > threshold:
                state["stop"] = True
            return
        if size - clique_packing(g, ell, C) <= state["best"].bit_count():
            return
        forced = F
        for v in q:
            if forced >> v & 1:
                continue
            rec(C & ~(1 << v), forced)
            forced |= 1 << v

    if threshold is not None and best.bit_count() > threshold:
        state["stop"] = True
    else:
        rec(g.all_mask, 0)
    best = state["best"]
    size = best.bit_count()
    exceeded = threshold is not None and size > threshold
    return AlphaResult(
        lower=size,
        upper=n if state["stop"] else size,
        witness=list(bits(best)),
        exact=not state["stop"],
        nodes=state["nodes"],
        stopped_early=exceeded,
    )


def alpha_ell_at_most(g: Graph, ell: int, m: int) -> tuple[bool, list[int] | None]:
    """Decide ``alpha_ell(g) <= m``; on failure return a K_ell-free set of size > m."""
    res = alpha_ell_exact(g, ell, threshold=m)
    if res.lower > m:
        return False, res.witness
    return True, None


def alpha_ell_bounds(g: Graph, ell: int, restarts: int = 32, seed=0) -> AlphaResult:
    """Interval for alpha_ell from randomized greedy (lower) and clique packing (upper)."""
    _check_ell(ell)
    n = g.n
    best = greedy_kfree_set(g, ell, range(n))
    for i in range(restarts):
        order = list(range(n))
        random.Random(f"{seed}:{i}").shuffle(order)
        cand = greedy_kfree_set(g, ell, order)
        if cand.bit_count() > best.bit_count():
            best = cand
    upper = n - clique_packing(g, ell, g.all_mask)
    return AlphaResult(lower=best.bit_count(), upper=upper, witness=list(bits(best)), exact=False)


def alpha_ell(g: Graph, ell: int, seed=0, restarts: int = 32) -> AlphaResult:
    """Exact when ``n`` is within the exact limit, bounds otherwise."""
    if g.n <= EXACT_LIMIT:
        return alpha_ell_exact(g, ell)
    return alpha_ell_bounds(g, ell, restarts=restarts, seed=seed)
