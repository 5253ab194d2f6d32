"""Integer lattices in Z^k via Hermite-style row echelon form."""
from __future__ import annotations

from typing import Iterable, Sequence


def hermite_rows(generators: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    """Canonical echelon basis of the subgroup spanned by ``generators``.

    Pivots are positive and entries above each pivot are reduced into
    ``[0, pivot)``, so equal subgroups give equal bases.
    """
    rows = [list(g) for g in generators]
    if not rows:
        return []
    k = len(rows[0])
    if any(len(r) != k for r in rows):
        raise ValueError("generators must all have the same length")
    basis: list[list[int]] = []
    for col in range(k):
        active = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q = r[col] // piv[col]
                red = [a - q * b for a, b in zip(r, piv)]
                (nxt if red[col] else rest).append(red)
            active = nxt
        if active:
            piv = active[0]
            if piv[col] < 0:
                piv = [-a for a in piv]
            basis.append(piv)
        rows = rest
    for i, row in enumerate(basis):
        c = _pivot(row)
        for j in range(i):
            q = basis[j][c] // row[c]
            if q:
                basis[j] = [a - q * b for a, b in zip(basis[j], row)]
    return [tuple(r) for r in basis]


def _pivot(row: Sequence[int]) -> int:
    return next(i for i, a in enumerate(row) if a)


class IntegerLattice:
    """Additive subgroup of Z^k generated by a finite set of integer vectors."""

    def __init__(self, generators: Iterable[Sequence[int]], k: int | None = None):
        self.generators = [tuple(g) for g in generators]
        if k is None:
            if not self.generators:
                raise ValueError("dimension k is required when there are no generators")
            k = len(self.generators[0])
        self.k = k
        self.basis = hermite_rows(self.generators)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __contains__(self, vec: Sequence[int]) -> bool:
        v = list(vec)
        if len(v) != self.k:
            raise ValueError(f"vector has length {len(v)}, lattice lives in Z^{self.k}")
        for row in self.basis:
            c = _pivot(row)
            if any(v[:c]):
                return False
            q, rem = divmod(v[c], row[c])
            if rem:
                return False
            v = [a - q * b for a, b in zip(v, row)]
        return not any(v)

    def __repr__(self):
        return f"IntegerLattice(k={self.k}, basis={self.basis})"


def unit(k: int, i: int) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(k))


def transferral(k: int, i: int, j: int) -> tuple[int, ...]:
    return tuple(a - b for a, b in zip(unit(k, i), unit(k, j)))
