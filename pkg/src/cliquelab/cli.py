"""Command-line interface.

Exit codes: 0 success (factor found / predicate true), 1 no-factor or predicate
false, 2 precondition violation, 3 budget exhausted or unknown, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import fields
from pathlib import Path

from . import __version__
from .absorption import (FAILS, Partition, has_transferral, index_census, reachable_packing,
                         verify_absorber, verify_absorbing_set)
from .cliques import enumerate_r_cliques
from .constructions import ConstructionSpec, build
from .errors import PreconditionError, RetryBudgetExhausted
from .factor import FACTOR, NO_FACTOR, UNKNOWN, Budget, cover_check, has_kr_factor, max_kr_tiling
from .graph import parse_graph, to_graph6
from .independence import EXACT_LIMIT, alpha_ell_bounds, alpha_ell_exact
from .sweep import SweepConfig, load_records, report, report_csv, report_text, run_sweep
from .weighted import (WeightedReducedGraph, check_inequality_one, condition_E_failure,
                       estimate_bad_probability, random_partition_search)

EXIT_OK, EXIT_NEGATIVE, EXIT_PRECONDITION, EXIT_UNKNOWN, EXIT_IO = 0, 1, 2, 3, 4


def _read_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    return Path(source).read_text()


def load_graph(source: str, fmt: str = "auto"):
    """Read a graph from a file, stdin (``-``), or an inline graph6 string."""
    if source == "-" or os.path.exists(source):
        return parse_graph(_read_text(source), fmt)
    return parse_graph(source, "graph6" if fmt == "auto" else fmt)


def _ints(text: str | None) -> list[int]:
    if not text:
        return []
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _emit(args, payload: dict, lines: list[str] | None = None) -> None:
    if args.json or lines is None:
        print(json.dumps(payload, sort_keys=True))
    else:
        print("\n".join(lines))


def _budget(args) -> Budget:
    return Budget(max_nodes=args.max_nodes, time_ms=args.budget_ms)


def _ternary_exit(value) -> int:
    return EXIT_OK if value is True else EXIT_UNKNOWN if value is None else EXIT_NEGATIVE


# -- subcommands ------------------------------------------------------------

def cmd_gen(args) -> int:
    params = {}
    for item in args.params or []:
        if "=" not in item:
            raise PreconditionError(f"--params entries look like key=value, got {item!r}")
        k, v = item.split("=", 1)
        params[k.replace("-", "_")] = _value(v)
    top = {f.name for f in fields(ConstructionSpec)} - {"family", "extra"}
    spec_kw = {k: v for k, v in params.items() if k in top}
    extra = {k: v for k, v in params.items() if k not in top}
    if "seed" not in spec_kw and args.family in ("figure1", "blowup", "core-search", "gnp"):
        spec_kw["seed"] = args.seed
    if args.base:
        extra["base_graph6"] = to_graph6(load_graph(args.base, args.format))
    if args.core_graph:
        extra["core_graph6"] = to_graph6(load_graph(args.core_graph, args.format))
    inst = build(ConstructionSpec(args.family, extra=extra, **spec_kw))
    side = inst.sidecar()
    if args.out:
        Path(args.out + ".g6").write_text(side["graph6"] + "\n")
        Path(args.out + ".json").write_text(json.dumps(side, indent=2, sort_keys=True) + "\n")
    if args.json:
        print(json.dumps(side, sort_keys=True))
    else:
        print(side["graph6"])
    if inst.designated.get("success") is False:
        return EXIT_UNKNOWN
    return EXIT_OK


def cmd_alpha(args) -> int:
    g = load_graph(args.graph, args.format)
    if args.threshold is not None:
        res = alpha_ell_exact(g, args.ell, threshold=args.threshold)
        payload = res.to_dict()
        payload["threshold"] = args.threshold
        payload["at_most"] = res.lower <= args.threshold
        _emit(args, payload, [f"alpha_{args.ell} <= {args.threshold}: {payload['at_most']}"])
        return EXIT_OK if payload["at_most"] else EXIT_NEGATIVE
    use_exact = args.exact or (args.budget is None and g.n <= EXACT_LIMIT)
    if use_exact:
        res = alpha_ell_exact(g, args.ell)
    else:
        res = alpha_ell_bounds(g, args.ell, restarts=args.budget or 32, seed=args.seed)
    payload = res.to_dict()
    text = f"{res.lower}" if res.exact else f"[{res.lower}, {res.upper}]"
    _emit(args, payload, [text, " ".join(map(str, res.witness))])
    return EXIT_OK


def cmd_cliques(args) -> int:
    g = load_graph(args.graph, args.format)
    cl = enumerate_r_cliques(g, args.r, args.cap)
    if args.json:
        print(json.dumps([list(c) for c in cl.cliques]))
    else:
        for c in cl.cliques:
            print(" ".join(map(str, c)))
    if cl.truncated:
        print(f"truncated at cap={args.cap}", file=sys.stderr)
    return EXIT_OK


def cmd_factor(args) -> int:
    g = load_graph(args.graph, args.format)
    cert = has_kr_factor(g, args.r, _budget(args))
    lines = [cert.outcome]
    if cert.tiling is not None:
        lines += [" ".join(map(str, p)) for p in cert.tiling.parts]
    elif cert.note:
        lines.append(cert.note)
    _emit(args, cert.to_dict(), lines)
    return {FACTOR: EXIT_OK, NO_FACTOR: EXIT_NEGATIVE, UNKNOWN: EXIT_UNKNOWN}[cert.outcome]


def cmd_tiling(args) -> int:
    g = load_graph(args.graph, args.format)
    t = max_kr_tiling(g, args.r, _budget(args), exact_limit=args.exact_limit)
    lines = [f"{len(t)} parts ({'exact' if t.exact else 'heuristic'})"]
    lines += [" ".join(map(str, p)) for p in t.parts]
    _emit(args, t.to_dict(), lines)
    return EXIT_OK


def cmd_cover(args) -> int:
    g = load_graph(args.graph, args.format)
    bad = cover_check(g, args.r, _ints(args.exclude))
    _emit(args, {"uncovered": bad, "holds": not bad},
          ["cover property holds" if not bad else " ".join(map(str, bad))])
    return EXIT_OK if not bad else EXIT_NEGATIVE


def cmd_absorb(args) -> int:
    if args.absorb_cmd == "transferral":
        vectors = _value(_read_text(args.census) if os.path.exists(args.census) else args.census)
        if isinstance(vectors, dict):
            vectors = [v["index"] for v in vectors["vectors"]]
        res = has_transferral(vectors, args.i, args.j, k=args.k)
        payload = {"pairwise": res.pairwise, "in_lattice": res.in_lattice,
                   "witness": [list(w) for w in res.witness] if res.witness else None}
        _emit(args, payload, [f"pairwise: {res.pairwise}", f"in lattice: {res.in_lattice}"])
        return EXIT_OK if res.pairwise else EXIT_NEGATIVE
    g = load_graph(args.graph, args.format)
    if args.absorb_cmd == "verify":
        if args.S:
            ok = verify_absorber(g, _ints(args.S), _ints(args.A), args.r, args.t, _budget(args))
            _emit(args, {"absorber": ok}, [str({True: "true", False: "false", None: "unknown"}[ok])])
            return _ternary_exit(ok)
        res = verify_absorbing_set(g, _ints(args.A), args.r, args.xi, sample=args.sample,
                                   seed=args.seed, budget=_budget(args))
        _emit(args, res.to_dict(), [res.status] + ([" ".join(map(str, res.witness))] if res.witness else []))
        return EXIT_NEGATIVE if res.status == FAILS else EXIT_UNKNOWN if res.status == UNKNOWN else EXIT_OK
    if args.absorb_cmd == "reach":
        fam = reachable_packing(g, args.u, args.v, args.r, args.t, _budget(args))
        _emit(args, {"family": [list(s) for s in fam], "size": len(fam), "beta": len(fam) / g.n},
              [f"{len(fam)} reachable sets"] + [" ".join(map(str, s)) for s in fam])
        return EXIT_OK
    if args.absorb_cmd == "census":
        parts = [_ints(p) for p in args.parts.split(";")]
        census = index_census(g, Partition.of(parts, g.n), args.r, args.beta)
        _emit(args, census.to_dict(), [" ".join(map(str, v)) for v in census.vectors])
        return EXIT_OK
    raise PreconditionError(f"unknown absorb command {args.absorb_cmd!r}")


def cmd_wpart(args) -> int:
    R = WeightedReducedGraph.from_json(_read_text(args.weights), exact=args.exact)
    if args.wpart_cmd == "check":
        if args.S:
            bad = condition_E_failure(R, _ints(args.S), args.c, args.mu)
            _emit(args, {"condition_E": bad is None, "failing_pair": list(bad) if bad else None},
                  [str(bad is None).lower()])
            return EXIT_OK if bad is None else EXIT_NEGATIVE
        res = check_inequality_one(R, args.c, args.mu)
        _emit(args, res.to_dict(), [f"{'pass' if res.passed else 'fail'} pair={res.pair} "
                                    f"slack={float(res.slack):.6g}"])
        return EXIT_OK if res.passed else EXIT_NEGATIVE
    if args.wpart_cmd == "search":
        res = random_partition_search(R, args.c, args.mu, args.t, seed=args.seed, retries=args.retries)
        _emit(args, res.to_dict(), [f"Q={res.Q} Z={res.Z} trials={res.trials}"]
              + [" ".join(map(str, s)) for s in res.sets])
        return EXIT_OK
    res = estimate_bad_probability(R, args.c, args.mu, args.t, trials=args.trials, seed=args.seed)
    _emit(args, res.to_dict(), [f"estimate={res.estimate:.6f} "
                                f"ci=[{res.interval[0]:.6f}, {res.interval[1]:.6f}] "
                                f"bound={res.lemma_bound:.6g}"])
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = json.loads(_read_text(args.config))
    if args.out:
        cfg["output"] = args.out
    cfg.setdefault("master_seed", args.seed)
    if args.max_nodes is not None:
        cfg.setdefault("max_nodes", args.max_nodes)
    if args.budget_ms is not None:
        cfg.setdefault("time_ms", args.budget_ms)
    config = SweepConfig.from_dict(cfg)
    records = run_sweep(config, threads=args.threads, resume=not args.no_resume)
    rows = report(records)
    if args.json:
        print(json.dumps(rows, sort_keys=True))
    else:
        sys.stdout.write(report_text(rows))
    return EXIT_OK


def cmd_report(args) -> int:
    rows = report(load_records(args.records))
    if args.json:
        print(json.dumps(rows, sort_keys=True))
    elif args.csv:
        sys.stdout.write(report_csv(rows))
    else:
        sys.stdout.write(report_text(rows))
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS lets a global flag given before the subcommand survive the
    # subparser; real defaults are filled in by main()
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int)
    common.add_argument("--budget-ms", type=int, help="wall-clock search budget")
    common.add_argument("--max-nodes", type=int, help="search node budget")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int)
    common.add_argument("--format", choices=("auto", "graph6", "edge-list"))

    p = argparse.ArgumentParser(prog="cliquelab", parents=[common],
                                description="Clique factors, tilings and absorption checks.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)

    def graph_cmd(name, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("graph", help="file, '-' for stdin, or an inline graph6 string")
        return sp

    sp = sub.add_parser("gen", parents=[common], help="generate a named construction")
    sp.add_argument("--family", required=True)
    sp.add_argument("--params", nargs="*", metavar="KEY=VALUE")
    sp.add_argument("--base", help="base graph for blowup/pruned")
    sp.add_argument("--core-graph", help="explicit core graph for figure1")
    sp.add_argument("--out", help="write OUT.g6 and OUT.json")
    sp.set_defaults(func=cmd_gen)

    sp = graph_cmd("alpha", "l-independence number")
    sp.add_argument("--ell", type=int, required=True)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--budget", type=int, help="greedy restarts for bounds mode")
    sp.add_argument("--threshold", type=int, help="decide alpha_l <= M")
    sp.set_defaults(func=cmd_alpha)

    sp = graph_cmd("cliques", "list r-cliques")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--cap", type=int)
    sp.set_defaults(func=cmd_cliques)

    sp = graph_cmd("factor", "decide K_r-factor existence")
    sp.add_argument("--r", type=int, required=True)
    sp.set_defaults(func=cmd_factor)

    sp = graph_cmd("tiling", "maximum K_r-tiling")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--exact-limit", type=int, default=40)
    sp.set_defaults(func=cmd_tiling)

    sp = graph_cmd("cover", "vertices in no K_r")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--exclude", help="comma-separated set W removed first")
    sp.set_defaults(func=cmd_cover)

    sp = sub.add_parser("absorb", parents=[common], help="absorption toolkit")
    asub = sp.add_subparsers(dest="absorb_cmd", required=True)
    a = asub.add_parser("verify", parents=[common], help="absorber (with --S) or absorbing set")
    a.add_argument("graph")
    a.add_argument("--r", type=int, required=True)
    a.add_argument("--A", required=True)
    a.add_argument("--S")
    a.add_argument("--t", type=int, default=1)
    a.add_argument("--xi", type=float, default=0.0)
    a.add_argument("--sample", type=int, default=2000)
    a = asub.add_parser("reach", parents=[common], help="disjoint reachable sets for u, v")
    a.add_argument("graph")
    a.add_argument("--u", type=int, required=True)
    a.add_argument("--v", type=int, required=True)
    a.add_argument("--r", type=int, required=True)
    a.add_argument("--t", type=int, default=1)
    a = asub.add_parser("census", parents=[common], help="index-vector census")
    a.add_argument("graph")
    a.add_argument("--parts", required=True, help="parts as '0,1,2;3,4,5'")
    a.add_argument("--r", type=int, required=True)
    a.add_argument("--beta", type=float, required=True)
    a = asub.add_parser("transferral", parents=[common], help="transferral detection")
    a.add_argument("--census", required=True, help="JSON vector list, or a census JSON file")
    a.add_argument("--i", type=int, required=True)
    a.add_argument("--j", type=int, required=True)
    a.add_argument("--k", type=int)
    sp.set_defaults(func=cmd_absorb)

    sp = sub.add_parser("wpart", parents=[common], help="weighted reduced graph tools")
    wsub = sp.add_subparsers(dest="wpart_cmd", required=True)
    for name in ("check", "search", "estimate"):
        w = wsub.add_parser(name, parents=[common])
        w.add_argument("weights", help="JSON {k, triples: [[i, j, d], ...]}")
        w.add_argument("--c", type=float, required=True)
        w.add_argument("--mu", type=float, required=True)
        w.add_argument("--exact", action="store_true", help="rational arithmetic")
        if name == "check":
            w.add_argument("--S", help="check condition (E) on this set instead")
        else:
            w.add_argument("--t", type=int, required=True)
        if name == "search":
            w.add_argument("--retries", type=int, default=1000)
        if name == "estimate":
            w.add_argument("--trials", type=int, default=10_000)
    sp.set_defaults(func=cmd_wpart)

    sp = sub.add_parser("sweep", parents=[common], help="run a threshold sweep")
    sp.add_argument("config", help="sweep config JSON")
    sp.add_argument("--out", help="output prefix for .csv/.json/.ckpt.jsonl")
    sp.add_argument("--no-resume", action="store_true")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("report", parents=[common], help="summarize sweep records")
    sp.add_argument("records", help="sweep .csv or .json")
    sp.add_argument("--csv", action="store_true")
    sp.set_defaults(func=cmd_report)
    return p


GLOBAL_DEFAULTS = {"seed": 0, "budget_ms": None, "max_nodes": 1_000_000, "json": False,
                   "threads": 1, "format": "auto"}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    for key, val in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, val)
    try:
        return args.func(args)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except RetryBudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
