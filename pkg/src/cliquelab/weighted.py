"""Edge-weighted complete graphs and the random disjoint-set partition search.

Vertices are 0-based. With ``exact=True`` weights and parameters are held as
:class:`fractions.Fraction` (decimal strings convert without rounding), which
makes boundary cases such as a zero-sum condition check reproducible.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Sequence

from .errors import DomainError, PreconditionError, RetryBudgetExhausted


def _num(x, exact: bool):
    if not exact:
        return float(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


class WeightedReducedGraph:
    """Symmetric weights ``d[i][j]`` in [0, 1]; missing pairs weigh 0."""

    def __init__(self, k: int, triples: Iterable[tuple[int, int, object]] = (), exact: bool = False):
        if k < 1:
            raise DomainError(f"k must be positive, got {k}")
        self.k = k
        self.exact = exact
        zero = _num(0, exact)
        self.d = [[zero] * k for _ in range(k)]
        for i, j, w in triples:
            if i == j:
                raise DomainError(f"diagonal weight ({i}, {i}) is not allowed")
            if not (0 <= i < k and 0 <= j < k):
                raise DomainError(f"pair ({i}, {j}) out of range for k={k}")
            w = _num(w, exact)
            if not 0 <= w <= 1:
                raise DomainError(f"weight {w} for ({i}, {j}) outside [0, 1]")
            self.d[i][j] = self.d[j][i] = w

    @classmethod
    def uniform(cls, k: int, w, exact: bool = False) -> "WeightedReducedGraph":
        return cls(k, [(i, j, w) for i in range(k) for j in range(i + 1, k)], exact)

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence], exact: bool = False) -> "WeightedReducedGraph":
        k = len(rows)
        return cls(k, [(i, j, rows[i][j]) for i in range(k) for j in range(i + 1, k)], exact)

    @classmethod
    def random(cls, k: int, low: float, high: float, seed, exact: bool = False) -> "WeightedReducedGraph":
        rng = random.Random(seed)
        trip = [(i, j, round(rng.uniform(low, high), 6)) for i in range(k) for j in range(i + 1, k)]
        return cls(k, trip, exact)

    @classmethod
    def from_json(cls, text: str, exact: bool = False) -> "WeightedReducedGraph":
        obj = json.loads(text)
        # decimal strings keep their exact value in exact mode
        trip = [(int(i), int(j), w if isinstance(w, str) else (repr(w) if exact else w))
                for i, j, w in obj["triples"]]
        return cls(int(obj["k"]), trip, exact)

    def to_json(self) -> str:
        trip = [[i, j, str(self.d[i][j]) if self.exact else self.d[i][j]]
                for i in range(self.k) for j in range(i + 1, self.k) if self.d[i][j]]
        return json.dumps({"k": self.k, "triples": trip})


def _params(R: WeightedReducedGraph, c, mu):
    if not 0 < float(mu) < 1:
        raise DomainError(f"mu must lie in (0, 1), got {mu}")
    if not 0 <= float(c) < 1:
        raise DomainError(f"c must lie in [0, 1), got {c}")
    c, mu = _num(c, R.exact), _num(mu, R.exact)
    return c, mu, c + mu / 6


def pair_sum(R: WeightedReducedGraph, i: int, j: int, over: Iterable[int], coef):
    """sum over p in ``over`` minus {i, j} of d_ip * d_jp - coef * d_ip."""
    di, dj = R.d[i], R.d[j]
    total = _num(0, R.exact)
    for p in over:
        if p != i and p != j:
            total += di[p] * dj[p] - coef * di[p]
    return total


@dataclass
class InequalityResult:
    passed: bool
    pair: tuple[int, int]
    slack: object

    def to_dict(self) -> dict:
        return {"passed": self.passed, "pair": list(self.pair), "slack": float(self.slack)}


def check_inequality_one(R: WeightedReducedGraph, c, mu) -> InequalityResult:
    """Check, for every ordered pair (i, j), that the weighted codegree sum is
    at least ``mu * k / 24``.

    Returns the first failing pair (lexicographic) with its slack, or a pass
    carrying the pair of minimum slack.
    """
    if R.k < 3:
        raise DomainError(f"need k >= 3, got k={R.k}")
    c, mu, coef = _params(R, c, mu)
    rhs = mu * R.k / 24
    if R.exact:
        # scale to a common denominator so the inner loop runs on integers
        scale = math.lcm(coef.denominator, *(w.denominator for row in R.d for w in row))
        d = [[int(w * scale) for w in row] for row in R.d]
        cf = int(coef * scale)
        sums = _pair_sums(d, cf)
        slack_of = lambda i, j: Fraction(sums[i][j], scale * scale) - rhs  # noqa: E731
    else:
        sums = _pair_sums(R.d, coef)
        slack_of = lambda i, j: sums[i][j] - rhs  # noqa: E731
    worst = None
    for i, j in permutations(range(R.k), 2):
        slack = slack_of(i, j)
        if slack < 0:
            return InequalityResult(False, (i, j), slack)
        if worst is None or slack < worst[1]:
            worst = ((i, j), slack)
    return InequalityResult(True, worst[0], worst[1])


def _pair_sums(d, coef):
    """All ordered-pair sums over p != i, j; the diagonal of ``d`` is zero so p = i drops out."""
    k = len(d)
    out = [[None] * k for _ in range(k)]
    for i in range(k):
        di = d[i]
        for j in range(k):
            if i != j:
                dj = d[j]
                out[i][j] = sum(di[p] * dj[p] - coef * di[p] for p in range(k) if p != j)
    return out


def condition_E_failure(R: WeightedReducedGraph, S: Sequence[int], c, mu) -> tuple[int, int] | None:
    """First ordered pair of S whose in-set sum is not strictly positive, else None."""
    _, _, coef = _params(R, c, mu)
    members = sorted(S)
    for i, j in permutations(members, 2):
        if pair_sum(R, i, j, members, coef) <= 0:
            return (i, j)
    return None


def check_condition_E(R: WeightedReducedGraph, S: Sequence[int], c, mu) -> bool:
    if len(set(S)) < 3:
        raise PreconditionError(f"condition (E) needs |S| >= 3, got {len(set(S))}")
    return condition_E_failure(R, S, c, mu) is None


def q_bound(k: int, t: int, mu) -> Fraction:
    """(1 - mu / (8(t+1))) * floor(k / (t+1)), exactly."""
    mu = Fraction(repr(mu)) if isinstance(mu, float) else Fraction(mu)
    return (1 - mu / (8 * (t + 1))) * (k // (t + 1))


@dataclass
class PartitionResult:
    sets: list[tuple[int, ...]]
    trials: int
    Z: int
    bound: Fraction

    @property
    def Q(self) -> int:
        return len(self.sets)

    def to_dict(self) -> dict:
        return {"sets": [list(s) for s in self.sets], "Q": self.Q, "Z": self.Z,
                "bound": float(self.bound), "trials": self.trials}


def random_partition_search(R: WeightedReducedGraph, c, mu, t: int, seed=0,
                            retries: int = 1000, check_precondition: bool = True) -> PartitionResult:
    """Draw uniform random families of ``Z = floor(k/(t+1))`` disjoint (t+1)-sets
    until the sets satisfying condition (E) number at least the Q bound.

    Trial ``i`` uses its own RNG seeded from ``(seed, i)``, so the outcome does
    not depend on how trials are scheduled.
    """
    if t < 2:
        raise DomainError(f"need t >= 2 so that sets have at least 3 vertices, got t={t}")
    if t + 1 > R.k:
        raise PreconditionError(f"t+1={t + 1} exceeds k={R.k}")
    if check_precondition:
        res = check_inequality_one(R, c, mu)
        if not res.passed:
            raise PreconditionError(
                f"weights violate the codegree inequality at pair {res.pair} (slack {float(res.slack):.4g})")
    Z = R.k // (t + 1)
    bound = q_bound(R.k, t, mu)
    best = -1
    for trial in range(1, retries + 1):
        rng = random.Random(f"{seed}:{trial}")
        order = list(range(R.k))
        rng.shuffle(order)
        chunks = [tuple(sorted(order[q * (t + 1):(q + 1) * (t + 1)])) for q in range(Z)]
        good = [s for s in chunks if condition_E_failure(R, s, c, mu) is None]
        best = max(best, len(good))
        if len(good) >= bound:
            return PartitionResult(sorted(good), trial, Z, bound)
    raise RetryBudgetExhausted(
        f"no trial reached Q >= {float(bound):.3f} in {retries} retries (best Q = {best}); "
        f"t may be below the regime where the partition lemma applies", best=best)


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi


def lemma_bad_bound(t: int, mu: float) -> float:
    """C(t+1, 2) * exp(-mu^2 t / 1000): the per-set failure bound to compare against."""
    return math.comb(t + 1, 2) * math.exp(-float(mu) ** 2 * t / 1000)


@dataclass
class BadEstimate:
    estimate: float
    interval: tuple[float, float]
    bad: int
    trials: int
    lemma_bound: float

    def to_dict(self) -> dict:
        return {"estimate": self.estimate, "interval": list(self.interval), "bad": self.bad,
                "trials": self.trials, "lemma_bound": self.lemma_bound,
                "within_bound": self.estimate <= self.lemma_bound}


def estimate_bad_probability(R: WeightedReducedGraph, c, mu, t: int, trials: int = 10_000,
                             seed=0) -> BadEstimate:
    """Monte-Carlo rate at which a uniform random (t+1)-set fails condition (E)."""
    if trials < 100:
        raise PreconditionError(f"need at least 100 trials for a meaningful interval, got {trials}")
    if t < 2 or t + 1 > R.k:
        raise PreconditionError(f"need 2 <= t and t+1 <= k, got t={t}, k={R.k}")
    rng = random.Random(seed)
    bad = 0
    for _ in range(trials):
        s = rng.sample(range(R.k), t + 1)
        if condition_E_failure(R, s, c, mu) is not None:
            bad += 1
    return BadEstimate(bad / trials, wilson_interval(bad, trials), bad, trials, lemma_bad_bound(t, mu))
