"""Named graph families and the blow-up / degree-pruning transformations.

Every generator returns a :class:`LabeledInstance` whose ``provenance`` can be
fed back to :func:`build` to regenerate the identical graph.
"""
from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .cliques import find_clique, is_kl_free
from .errors import (CliqueLabError, ConstructionRefused, DomainError, PreconditionError,
                     RetryBudgetExhausted)
from .graph import (Graph, bits, blowup_of, complete_graph, cycle_graph, from_graph6, gnp,
                    induced_subgraph, mask_of, min_degree, to_graph6)
from .independence import EXACT_LIMIT, alpha_ell_bounds, alpha_ell_exact

FAMILIES = ("multipartite", "figure1", "blowup", "pruned", "core-search", "gnp")
CORE_RECIPES = ("random-greedy", "edgeless", "c5-blowup")


@dataclass(frozen=True)
class ConstructionSpec:
    family: str
    n: int | None = None
    r: int | None = None
    ell: int | None = None
    x: float | None = None
    rho: float | None = None
    seed: int | None = None
    core: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.n is not None and self.n < 1:
            raise DomainError(f"n must be at least 1, got {self.n}")
        if self.x is not None and not 0 < self.x <= 1:
            raise DomainError(f"x must lie in (0, 1], got {self.x}")
        if self.rho is not None and not 0 <= self.rho < 1:
            raise DomainError(f"rho must lie in [0, 1), got {self.rho}")

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None and v != {}}

    @classmethod
    def from_dict(cls, d: dict) -> "ConstructionSpec":
        return cls(**d)


@dataclass
class LabeledInstance:
    graph: Graph
    designated: dict[str, Any]
    provenance: ConstructionSpec

    def sidecar(self) -> dict:
        return {
            "graph6": to_graph6(self.graph),
            "n": self.graph.n,
            "designated": self.designated,
            "provenance": self.provenance.to_dict(),
        }


def complete_multipartite(sizes: Sequence[int]) -> LabeledInstance:
    sizes = list(sizes)
    if not sizes:
        raise DomainError("need at least one part")
    if any(s < 1 for s in sizes):
        raise DomainError(f"part sizes must be positive, got {sizes}")
    g = blowup_of(complete_graph(len(sizes)), sizes)
    parts = []
    start = 0
    for s in sizes:
        parts.append(list(range(start, start + s)))
        start += s
    return LabeledInstance(g, {"parts": parts},
                           ConstructionSpec("multipartite", n=start, extra={"sizes": sizes}))


# -- K_s-free cores ------------------------------------------------------

def random_greedy_kfree(m: int, forbid: int, seed) -> Graph:
    """Random greedy K_forbid-free process: scan pairs in random order, keep safe edges."""
    rng = random.Random(seed)
    pairs = [(u, v) for u in range(m) for v in range(u + 1, m)]
    rng.shuffle(pairs)
    adj = [0] * m
    g = Graph.from_masks(adj)
    for u, v in pairs:
        # the edge closes a K_forbid iff the common neighbourhood holds a K_{forbid-2}
        if forbid >= 2 and find_clique(g, forbid - 2, adj[u] & adj[v]) is None:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
            g = Graph.from_masks(adj)
    return g


def c5_blowup(m: int) -> Graph:
    """Balanced blow-up of C_5 on ``m`` vertices (triangle-free)."""
    sizes = [m // 5 + (1 if i < m % 5 else 0) for i in range(5)]
    return blowup_of(cycle_graph(5), sizes)


def make_core(recipe: str, m: int, r: int, seed) -> Graph:
    if recipe == "edgeless":
        return Graph(m)
    if recipe == "random-greedy":
        return random_greedy_kfree(m, r - 1, seed)
    if recipe == "c5-blowup":
        return c5_blowup(m)
    raise DomainError(f"unknown core recipe {recipe!r}; expected one of {CORE_RECIPES}")


def core_size(n: int, x: float) -> int:
    # tolerance absorbs binary rounding in e.g. 0.3 * 10
    return math.floor(x * n + 1e-9)


def figure1(n: int, r: int, x: float | None = None, core: Graph | None = None, *,
            rho: float | None = None, core_recipe: str = "random-greedy",
            seed: int = 0) -> LabeledInstance:
    """Apex ``v`` whose neighbourhood is a K_{r-1}-free core of size floor(xn),
    plus a clique on the other ``n - floor(xn) - 1`` vertices joined to the core.

    Layout: vertex 0 is the apex, 1..m the core, the rest the clique. When ``x``
    is omitted it defaults to ``1 / (2 - rho)``.
    """
    if r < 2:
        raise DomainError(f"r must be at least 2, got {r}")
    if x is None:
        if rho is None:
            raise DomainError("either x or rho must be given")
        x = 1 / (2 - rho)
    spec = ConstructionSpec("figure1", n=n, r=r, x=x, rho=rho, seed=seed,
                            core=None if core is not None else core_recipe)
    m = core_size(n, x)
    if m + 1 > n:
        raise PreconditionError(f"core of size {m} plus apex exceeds n={n}")
    if core is None:
        core = make_core(core_recipe, m, r, seed)
    else:
        spec = ConstructionSpec("figure1", n=n, r=r, x=x, rho=rho, seed=seed,
                                extra={"core_graph6": to_graph6(core)})
    if core.n != m:
        raise PreconditionError(f"core has {core.n} vertices, expected floor(x*n) = {m}")
    free, witness = is_kl_free(core, r - 1)
    if not free:
        raise ConstructionRefused(f"core contains a K_{r - 1}", witness=list(witness))

    core_ids = list(range(1, m + 1))
    clique_ids = list(range(m + 1, n))
    core_m = mask_of(core_ids)
    clique_m = mask_of(clique_ids)
    masks = [0] * n
    masks[0] = core_m
    for i, v in enumerate(core_ids):
        masks[v] = 1 | clique_m | (core.adj_mask(i) << 1)
    for v in clique_ids:
        masks[v] = core_m | (clique_m & ~(1 << v))
    g = Graph.from_masks(masks)
    return LabeledInstance(g, {"apex": 0, "core": core_ids, "clique": clique_ids}, spec)


# -- transformations -----------------------------------------------------

def blow_up(g: Graph, n: int, eps: float, seed=0, max_retries: int = 1000) -> LabeledInstance:
    """Replace each vertex by an independent class of size ceil or floor of n/n'.

    The ``n mod n'`` large classes are assigned to a uniformly random vertex
    subset; the draw is repeated until the result has minimum degree at least
    ``(delta(g)/n' - eps) * n``.
    """
    n1 = g.n
    if n1 < 1 or n < n1:
        raise PreconditionError(f"need n >= n' >= 1, got n={n}, n'={n1}")
    q, rem = divmod(n, n1)
    base = min_degree(g)
    target = (Fraction(base, n1) - Fraction(eps)) * n
    spec = ConstructionSpec("blowup", n=n, seed=seed,
                            extra={"base_graph6": to_graph6(g), "eps": eps,
                                   "max_retries": max_retries})
    rng = random.Random(seed)
    best = None
    for attempt in range(1, max_retries + 1):
        big = sorted(rng.sample(range(n1), rem)) if rem else []
        bigset = set(big)
        sizes = [q + 1 if v in bigset else q for v in range(n1)]
        degs = [sum(sizes[u] for u in bits(g.adj_mask(v))) for v in range(n1)]
        low = min(degs)
        if best is None or low > best[0]:
            best = (low, sizes)
        if low >= target:
            out = blowup_of(g, sizes)
            classes = []
            start = 0
            for s in sizes:
                classes.append(list(range(start, start + s)))
                start += s
            return LabeledInstance(out, {"classes": classes, "large": big,
                                         "attempts": attempt}, spec)
        if not rem:
            break
    raise RetryBudgetExhausted(
        f"no split reached minimum degree {float(target):.3f}; best was {best[0]} "
        f"(deficiency {float(target - best[0]):.3f}); eps is too small for n={n}, n'={n1}",
        best=best)


def degree_prune(g: Graph, delta: float, eta: float, require_large_n: bool = False) -> LabeledInstance:
    """Delete low-degree vertices until every survivor has degree >= (delta - eta)|G_i|.

    The violating vertex of minimum degree (lowest index on ties) goes first.
    ``require_large_n`` additionally refuses graphs with ``n < 8 / eta``, the
    regime where the size guarantee ``n' >= eta * n / 4`` is meant to apply.
    """
    n = g.n
    d, e = Fraction(delta), Fraction(eta)
    if not 0 < e < d / 2:
        raise PreconditionError(f"need 0 < eta < delta/2, got delta={delta}, eta={eta}")
    if require_large_n and n < 8 / e:
        raise PreconditionError(f"need n >= 8/eta = {float(8 / e):.1f}, got n={n}")
    if g.num_edges() < d * n * (n - 1) / 2:
        raise PreconditionError(
            f"graph has {g.num_edges()} edges, fewer than delta*C(n,2) = {float(d * n * (n - 1) / 2):.2f}")
    alive = g.all_mask
    size = n
    order: list[int] = []
    thr = d - e
    while True:
        worst = None
        for v in bits(alive):
            dv = (g.adj_mask(v) & alive).bit_count()
            if dv < thr * size and (worst is None or dv < worst[0]):
                worst = (dv, v)
        if worst is None:
            break
        alive &= ~(1 << worst[1])
        order.append(worst[1])
        size -= 1
        if not alive:
            raise CliqueLabError("pruning emptied the graph; this contradicts the pruning "
                                 "lemma and indicates a bug")
    sub, labels = induced_subgraph(g, bits(alive))
    spec = ConstructionSpec("pruned", n=n, extra={"base_graph6": to_graph6(g),
                                                  "delta": delta, "eta": eta,
                                                  "require_large_n": require_large_n})
    return LabeledInstance(sub, {"survivors": labels, "deleted": order, "n_prime": len(labels)},
                           spec)


# -- core search ---------------------------------------------------------

@dataclass
class CoreSearchResult:
    success: bool
    instance: LabeledInstance
    min_degree: int
    alpha: int
    iterations: int
    reason: str = ""


def _alpha_for_search(g: Graph, ell: int) -> int:
    if g.n <= 16:
        return alpha_ell_exact(g, ell).lower
    res = alpha_ell_exact(g, ell, max_nodes=20_000)
    if res.exact:
        return res.lower
    return alpha_ell_bounds(g, ell, restarts=8).lower


def kfree_core_search(m: int, ell: int, forbid: int, target_mindeg: float = 0.0,
                      alpha_cap: int | None = None, seed=0, iterations: int = 4000,
                      t_start: float = 2.0, cooling: float = 0.998) -> CoreSearchResult:
    """Simulated annealing over single-edge toggles for a K_forbid-free graph on
    ``m`` vertices with minimum degree >= target_mindeg * m and alpha_ell <= alpha_cap.

    Toggles that would create a K_forbid are rejected outright. The cost is
    the total degree deficit plus the alpha excess; temperature decays
    geometrically from ``t_start`` by ``cooling`` per move.
    """
    if forbid < 2 or ell < 2:
        raise DomainError(f"need forbid >= 2 and ell >= 2, got forbid={forbid}, ell={ell}")
    if m < 1 or m > EXACT_LIMIT:
        raise PreconditionError(f"m must lie in [1, {EXACT_LIMIT}] so alpha can be verified exactly")
    need = math.ceil(target_mindeg * m - 1e-9)
    cap = m if alpha_cap is None else alpha_cap
    spec = ConstructionSpec("core-search", n=m, ell=ell, seed=seed,
                            extra={"forbid": forbid, "target_mindeg": target_mindeg,
                                   "alpha_cap": alpha_cap, "iterations": iterations})

    def finish(g: Graph, it: int, reason: str = "") -> CoreSearchResult:
        free, _ = is_kl_free(g, forbid)
        assert free, "search produced a forbidden clique"
        alpha = alpha_ell_exact(g, ell).lower
        mindeg = min_degree(g)
        ok = free and mindeg >= need and alpha <= cap
        inst = LabeledInstance(g, {"min_degree": mindeg, "alpha": alpha}, spec)
        return CoreSearchResult(ok, inst, mindeg, alpha, it,
                                "" if ok else (reason or "targets not met"))

    if need > m - 1:
        return finish(Graph(m), 0, f"minimum degree {need} impossible on {m} vertices")

    rng = random.Random(seed)
    adj = list(random_greedy_kfree(m, forbid, rng.random()).masks)

    def cost(g: Graph) -> int:
        deficit = sum(max(0, need - d) for d in g.degrees())
        excess = max(0, _alpha_for_search(g, ell) - cap) if cap < m else 0
        return 2 * deficit + excess

    cur = Graph.from_masks(adj)
    cur_cost = cost(cur)
    best, best_cost = cur, cur_cost
    temp = t_start
    it = 0
    pairs = [(u, v) for u in range(m) for v in range(u + 1, m)]
    while best_cost > 0 and it < iterations and pairs:
        it += 1
        u, v = pairs[rng.randrange(len(pairs))]
        if adj[u] >> v & 1:
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
        else:
            if find_clique(cur, forbid - 2, adj[u] & adj[v]) is not None:
                temp *= cooling
                continue
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        cand = Graph.from_masks(adj)
        c = cost(cand)
        if c <= cur_cost or rng.random() < math.exp((cur_cost - c) / max(temp, 1e-9)):
            cur, cur_cost = cand, c
            if c < best_cost:
                best, best_cost = cand, c
        else:
            adj = list(cur.masks)
        temp *= cooling
    return finish(best, it, "iteration budget exhausted" if best_cost else "")


# -- replay --------------------------------------------------------------

def build(spec: ConstructionSpec) -> LabeledInstance:
    """Regenerate an instance from its provenance record."""
    ex = spec.extra
    if spec.family == "multipartite":
        return complete_multipartite(ex["sizes"])
    if spec.family == "figure1":
        core = from_graph6(ex["core_graph6"]) if "core_graph6" in ex else None
        return figure1(spec.n, spec.r, spec.x, core, rho=spec.rho,
                       core_recipe=spec.core or "random-greedy", seed=spec.seed or 0)
    if spec.family == "blowup":
        return blow_up(from_graph6(ex["base_graph6"]), spec.n, ex["eps"], seed=spec.seed or 0,
                       max_retries=ex.get("max_retries", 1000))
    if spec.family == "pruned":
        return degree_prune(from_graph6(ex["base_graph6"]), ex["delta"], ex["eta"],
                            require_large_n=ex.get("require_large_n", False))
    if spec.family == "core-search":
        res = kfree_core_search(spec.n, spec.ell, ex["forbid"], ex.get("target_mindeg", 0.0),
                                ex.get("alpha_cap"), seed=spec.seed or 0,
                                iterations=ex.get("iterations", 4000))
        inst = res.instance
        inst.designated["success"] = res.success
        return inst
    if spec.family == "gnp":
        p = ex["p"]
        return LabeledInstance(gnp(spec.n, p, spec.seed or 0), {}, spec)
    raise DomainError(f"unknown family {spec.family!r}")
