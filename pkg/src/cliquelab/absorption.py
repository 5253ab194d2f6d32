"""Absorbers, reachable sets, absorbing sets, index vectors and transferrals.

Predicates that rest on factor searches are ternary: ``True``, ``False`` or
``None`` for unknown (a search ran out of budget). Unknown is never folded
into ``False``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .cliques import iter_cliques_in
from .errors import DomainError, PreconditionError
from .factor import FACTOR, UNKNOWN, Budget, has_kr_factor
from .graph import Graph, bits, induced_subgraph, mask_of
from .lattice import IntegerLattice, transferral

PACKING_EXACT_LIMIT = 10_000


@dataclass(frozen=True)
class Partition:
    parts: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, parts: Iterable[Iterable[int]], n: int | None = None) -> "Partition":
        p = cls(tuple(tuple(sorted(part)) for part in parts))
        if n is not None:
            p.validate(n)
        return p

    @property
    def k(self) -> int:
        return len(self.parts)

    def validate(self, n: int) -> None:
        seen: set[int] = set()
        for part in self.parts:
            if not part:
                raise PreconditionError("partition parts must be nonempty")
            for v in part:
                if not 0 <= v < n:
                    raise PreconditionError(f"vertex {v} out of range for n={n}")
                if v in seen:
                    raise PreconditionError(f"vertex {v} appears in two parts")
                seen.add(v)
        if len(seen) != n:
            raise PreconditionError(f"partition covers {len(seen)} of {n} vertices")

    def part_index(self) -> dict[int, int]:
        return {v: i for i, part in enumerate(self.parts) for v in part}


def index_vector(S: Iterable[int], P: Partition) -> tuple[int, ...]:
    where = P.part_index()
    coords = [0] * P.k
    for v in set(S):
        if v not in where:
            raise PreconditionError(f"vertex {v} is not covered by the partition")
        coords[where[v]] += 1
    return tuple(coords)


# -- census ---------------------------------------------------------------

def _pack(masks: list[int], need: int, r: int) -> list[int] | None:
    """Indices of ``need`` pairwise disjoint masks, or None if impossible."""
    chosen: list[int] = []

    def rec(start: int, used: int) -> bool:
        if len(chosen) == need:
            return True
        avail = [i for i in range(start, len(masks)) if not masks[i] & used]
        if not avail:
            return False
        union = 0
        for i in avail:
            union |= masks[i]
        if len(chosen) + union.bit_count() // r < need:
            return False
        for i in avail:
            chosen.append(i)
            if rec(i + 1, used | masks[i]):
                return True
            chosen.pop()
            # any packing avoiding i lives among the later candidates
        return False

    return list(chosen) if rec(0, 0) else None


def _greedy_pack(masks: list[int], need: int) -> list[int]:
    used = 0
    out = []
    for i, m in enumerate(masks):
        if not m & used:
            out.append(i)
            used |= m
            if len(out) == need:
                break
    return out


@dataclass
class Census:
    """Index vectors realised by at least ``need`` disjoint r-cliques, with certificates."""

    k: int
    r: int
    need: int
    packings: dict[tuple[int, ...], list[tuple[int, ...]]] = field(default_factory=dict)
    exact: bool = True

    @property
    def vectors(self) -> list[tuple[int, ...]]:
        return sorted(self.packings)

    def lattice(self) -> IntegerLattice:
        return IntegerLattice(self.vectors, k=self.k)

    def to_dict(self) -> dict:
        return {"k": self.k, "r": self.r, "need": self.need, "exact": self.exact,
                "vectors": [{"index": list(v), "packing": [list(c) for c in self.packings[v]]}
                            for v in self.vectors]}


def index_census(g: Graph, P: Partition, r: int, beta: float,
                 exact_limit: int = PACKING_EXACT_LIMIT) -> Census:
    """All r-vectors ``i`` for which G has ceil(beta*n) disjoint r-cliques of index ``i``."""
    P.validate(g.n)
    need = math.ceil(beta * g.n - 1e-9)
    if need < 1:
        raise DomainError(f"beta*n must be at least 1, got {beta * g.n}")
    groups: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    where = P.part_index()
    for c in iter_cliques_in(g, r):
        coords = [0] * P.k
        for v in c:
            coords[where[v]] += 1
        groups.setdefault(tuple(coords), []).append(c)
    census = Census(P.k, r, need)
    for vec in sorted(groups):
        cl = groups[vec]
        masks = [mask_of(c) for c in cl]
        got = _greedy_pack(masks, need)
        if len(got) < need:
            if len(cl) <= exact_limit:
                got = _pack(masks, need, r) or []
            else:
                census.exact = False
        if len(got) == need:
            census.packings[vec] = [cl[i] for i in got]
    return census


@dataclass
class TransferralResult:
    pairwise: bool
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None
    in_lattice: bool


def has_transferral(census: Iterable[Sequence[int]], i: int, j: int,
                    k: int | None = None) -> TransferralResult:
    """Is ``u_i - u_j`` a difference ``s - t`` of census vectors? (0-based i, j)

    Lattice membership is reported separately: ``u_i - u_j`` lies in the
    subgroup generated by the census. A witness pair implies membership; the
    converse can fail.
    """
    if i == j:
        raise DomainError("transferral needs distinct coordinates")
    vecs = sorted({tuple(v) for v in census})
    if k is None:
        if not vecs:
            return TransferralResult(False, None, False)
        k = len(vecs[0])
    target = transferral(k, i, j)
    present = set(vecs)
    witness = None
    for s in vecs:
        t = tuple(a - b for a, b in zip(s, target))
        if t in present:
            witness = (s, t)
            break
    in_lattice = bool(vecs) and target in IntegerLattice(vecs, k=k)
    return TransferralResult(witness is not None, witness, in_lattice)


# -- absorbers and reachability -------------------------------------------

def _factor_on(g: Graph, vertices: Iterable[int], r: int, budget: Budget | None) -> bool | None:
    sub, _ = induced_subgraph(g, vertices)
    out = has_kr_factor(sub, r, budget).outcome
    if out == UNKNOWN:
        return None
    return out == FACTOR


def _and3(a: bool | None, b: bool | None) -> bool | None:
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


def verify_absorber(g: Graph, S: Iterable[int], A: Iterable[int], r: int, t: int,
                    budget: Budget | None = None) -> bool | None:
    """Is A an (S, t)-absorber: |A| = rt and both G[A] and G[A + S] have K_r-factors?"""
    s = g.check_vertices(S)
    a = g.check_vertices(A)
    if len(s) != r:
        raise PreconditionError(f"|S| must equal r={r}, got {len(s)}")
    if set(s) & set(a):
        raise PreconditionError("A and S must be disjoint")
    if len(a) != r * t:
        return False
    first = _factor_on(g, a, r, budget)
    if first is False:
        return False
    return _and3(first, _factor_on(g, a + s, r, budget))


def is_reachable_set(g: Graph, u: int, v: int, S: Sequence[int], r: int,
                     budget: Budget | None = None) -> bool | None:
    """Do both G[{u} + S] and G[{v} + S] have K_r-factors?"""
    first = _factor_on(g, [u, *S], r, budget)
    if first is False:
        return False
    return _and3(first, _factor_on(g, [v, *S], r, budget))


def reachable_packing(g: Graph, u: int, v: int, r: int, t: int,
                      budget: Budget | None = None,
                      max_candidates: int = 200_000) -> list[tuple[int, ...]]:
    """Greedy maximal family of disjoint K_r-reachable sets for ``{u, v}``.

    Sizes ``r*s - 1`` are tried for ``s = 1..t`` in turn; candidates come in
    lexicographic order and each accepted set passes both factor searches.
    For ``s = 1`` the candidates are the (r-1)-cliques in the common
    neighbourhood, which is exactly when ``{u} + S`` and ``{v} + S`` are cliques.
    """
    if u == v:
        raise PreconditionError("u and v must be distinct")
    g.check_vertices([u, v])
    if r < 2 or t < 1:
        raise DomainError(f"need r >= 2 and t >= 1, got r={r}, t={t}")
    avail = g.all_mask & ~(1 << u) & ~(1 << v)
    family: list[tuple[int, ...]] = []
    examined = 0
    for s in range(1, t + 1):
        size = r * s - 1
        progress = True
        while progress:
            progress = False
            if s == 1:
                cands = iter_cliques_in(g, r - 1, avail & g.adj_mask(u) & g.adj_mask(v))
            else:
                cands = combinations(list(bits(avail)), size)
            for cand in cands:
                examined += 1
                if examined > max_candidates:
                    return family
                if is_reachable_set(g, u, v, cand, r, budget) is True:
                    family.append(tuple(cand))
                    avail &= ~mask_of(cand)
                    progress = True
                    break
    return family


# -- absorbing sets ---------------------------------------------------------

HOLDS = "holds"
FAILS = "fails"
HOLDS_ON_SAMPLE = "holds-on-sample"


@dataclass
class AbsorbingCheck:
    status: str
    witness: list[int] | None = None
    checked: int = 0
    qualifying: int = 0

    def to_dict(self) -> dict:
        return {"status": self.status, "witness": self.witness, "checked": self.checked,
                "qualifying": self.qualifying}


def verify_absorbing_set(g: Graph, A: Iterable[int], r: int, xi: float,
                         sample: int = 2000, seed=0,
                         budget: Budget | None = None) -> AbsorbingCheck:
    """Check that every R outside A with |R| <= xi*n and r | |A + R| leaves G[A + R]
    with a K_r-factor.

    All qualifying R are tried when there are at most ``sample`` of them,
    otherwise ``sample`` of them are drawn uniformly with the given seed.
    """
    a = g.check_vertices(A)
    outside = [v for v in range(g.n) if v not in set(a)]
    cap = math.floor(xi * g.n + 1e-9)
    sizes = [s for s in range(0, min(cap, len(outside)) + 1) if (len(a) + s) % r == 0]
    counts = [math.comb(len(outside), s) for s in sizes]
    total = sum(counts)
    res = AbsorbingCheck(HOLDS, qualifying=total)
    if total == 0:
        return res
    unknown = False

    def test(R) -> bool:
        nonlocal unknown
        res.checked += 1
        ok = _factor_on(g, a + list(R), r, budget)
        if ok is None:
            unknown = True
        if ok is False:
            res.status = FAILS
            res.witness = sorted(R)
            return False
        return True

    if total <= sample:
        for s in sizes:
            for R in combinations(outside, s):
                if not test(R):
                    return res
    else:
        rng = random.Random(seed)
        for _ in range(sample):
            s = rng.choices(sizes, weights=counts)[0]
            if not test(rng.sample(outside, s)):
                return res
        res.status = HOLDS_ON_SAMPLE
    if unknown:
        res.status = UNKNOWN
    return res
