"""Threshold sweeps: generate instances over a parameter grid, measure, solve, report.

CSV output carries only deterministic columns (search node counts instead of
wall-clock times) so identical configs give byte-identical files; timings go
to the JSON mirror.
"""
from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

from .constructions import complete_multipartite, figure1
from .errors import DomainError, PreconditionError
from .factor import FACTOR, NO_FACTOR, UNKNOWN, Budget, cover_check, has_kr_factor
from .graph import gnp, min_degree, to_graph6
from .independence import alpha_ell

SCHEMA_VERSION = 1
SWEEP_FAMILIES = ("figure1", "multipartite", "gnp")


@dataclass
class SweepConfig:
    family: str
    grid: dict[str, list]
    seeds: int = 1
    master_seed: int = 0
    max_nodes: int | None = 1_000_000
    time_ms: int | None = None
    core: str = "random-greedy"
    output: str | None = None

    def __post_init__(self):
        if self.family not in SWEEP_FAMILIES:
            raise DomainError(f"sweep family must be one of {SWEEP_FAMILIES}, got {self.family!r}")
        if not self.grid or any(not isinstance(v, list) or not v for v in self.grid.values()):
            raise PreconditionError("sweep grid must be nonempty with nonempty value lists")
        if "n" not in self.grid:
            raise PreconditionError("sweep grid needs an 'n' axis")
        if self.seeds < 1:
            raise PreconditionError("seeds per cell must be positive")
        if (self.max_nodes is not None and self.max_nodes < 1) or (self.time_ms is not None and self.time_ms < 1):
            raise PreconditionError("budgets must be positive")

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise PreconditionError(f"unknown sweep config keys: {sorted(extra)}")
        return cls(**d)

    def digest(self) -> str:
        d = asdict(self)
        d.pop("output")
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:16]

    def cells(self) -> list[dict[str, Any]]:
        keys = sorted(self.grid)
        return [dict(zip(keys, combo)) for combo in itertools.product(*(self.grid[k] for k in keys))]

    def budget(self) -> Budget:
        return Budget(max_nodes=self.max_nodes, time_ms=self.time_ms)


@dataclass
class SweepRecord:
    cell: int
    seed_index: int
    seed: int
    family: str
    params: str
    n: int
    r: int
    ell: int
    graph6: str
    min_degree: int
    delta_over_n: float
    alpha_lower: int
    alpha_upper: int
    alpha_exact: bool
    outcome: str
    cover_size: int
    factor_nodes: int
    timings: dict = field(default_factory=dict)

    CSV_COLUMNS = ("cell", "seed_index", "seed", "family", "params", "n", "r", "ell", "graph6",
                   "min_degree", "delta_over_n", "alpha_lower", "alpha_upper", "alpha_exact",
                   "outcome", "cover_size", "factor_nodes")

    def csv_row(self) -> list[str]:
        row = []
        for col in self.CSV_COLUMNS:
            v = getattr(self, col)
            row.append(f"{v:.6f}" if isinstance(v, float) else str(v))
        return row

    @classmethod
    def from_dict(cls, d: dict) -> "SweepRecord":
        return cls(**d)


def derive_seed(*parts) -> int:
    h = hashlib.sha256(":".join(map(str, parts)).encode()).digest()
    return int.from_bytes(h[:4], "big")


def _instance(family: str, cell: dict, seed: int, core: str):
    n = cell["n"]
    r = cell.get("r", 3)
    if family == "figure1":
        inst = figure1(n, r, cell.get("x"), rho=cell.get("rho"), core_recipe=core, seed=seed)
        return inst.graph
    if family == "multipartite":
        parts = cell.get("parts", r)
        sizes = [n // parts + (1 if i < n % parts else 0) for i in range(parts)]
        return complete_multipartite(sizes).graph
    return gnp(n, cell.get("p", 0.5), seed)


def run_instance(config: SweepConfig, cell_index: int, cell: dict, seed_index: int) -> SweepRecord:
    seed = derive_seed(config.master_seed, cell_index, seed_index)
    r = cell.get("r", 3)
    ell = cell.get("ell", max(2, r - 1))
    t0 = time.monotonic()
    g = _instance(config.family, cell, seed, config.core)
    t1 = time.monotonic()
    a = alpha_ell(g, ell, seed=seed)
    t2 = time.monotonic()
    cover = cover_check(g, r)
    t3 = time.monotonic()
    cert = has_kr_factor(g, r, config.budget())
    t4 = time.monotonic()
    return SweepRecord(
        cell=cell_index, seed_index=seed_index, seed=seed, family=config.family,
        params=json.dumps(cell, sort_keys=True), n=g.n, r=r, ell=ell, graph6=to_graph6(g),
        min_degree=min_degree(g), delta_over_n=min_degree(g) / g.n,
        alpha_lower=a.lower, alpha_upper=a.upper, alpha_exact=a.exact,
        outcome=cert.outcome, cover_size=len(cover), factor_nodes=cert.nodes,
        timings={"generate_ms": round((t1 - t0) * 1000, 3), "alpha_ms": round((t2 - t1) * 1000, 3),
                 "cover_ms": round((t3 - t2) * 1000, 3), "factor_ms": round((t4 - t3) * 1000, 3)},
    )


def _run_job(args):
    config, ci, cell, si = args
    return run_instance(config, ci, cell, si)


def _check_writable(path: Path) -> None:
    parent = path.parent if str(path.parent) else Path(".")
    if not parent.is_dir() or not os.access(parent, os.W_OK):
        raise OSError(f"output directory {parent} is not writable")
    if path.exists() and not os.access(path, os.W_OK):
        raise OSError(f"output file {path} is not writable")


def output_paths(prefix: str) -> tuple[Path, Path, Path]:
    base = Path(prefix)
    return (base.with_name(base.name + ".csv"), base.with_name(base.name + ".json"),
            base.with_name(base.name + ".ckpt.jsonl"))


def run_sweep(config: SweepConfig, threads: int = 1, resume: bool = True,
              stop_after: int | None = None) -> list[SweepRecord]:
    """Run every (cell, seed) job, persisting CSV/JSON when ``config.output`` is set.

    Finished jobs are appended to a checkpoint file keyed by (config digest,
    cell, seed); a later run with the same config skips them. ``stop_after``
    simulates an interruption after that many new jobs.
    """
    digest = config.digest()
    csv_path = json_path = ckpt_path = None
    if config.output:
        csv_path, json_path, ckpt_path = output_paths(config.output)
        for p in (csv_path, json_path, ckpt_path):
            _check_writable(p)
    done: dict[tuple[int, int], SweepRecord] = {}
    if ckpt_path is not None and resume and ckpt_path.exists():
        for line in ckpt_path.read_text().splitlines():
            entry = json.loads(line)
            if entry["key"][0] == digest:
                done[(entry["key"][1], entry["key"][2])] = SweepRecord.from_dict(entry["record"])
    elif ckpt_path is not None and ckpt_path.exists():
        ckpt_path.unlink()

    jobs = [(config, ci, cell, si) for ci, cell in enumerate(config.cells())
            for si in range(config.seeds) if (ci, si) not in done]
    if stop_after is not None:
        jobs = jobs[:stop_after]
    ckpt = open(ckpt_path, "a") if ckpt_path is not None else None
    try:
        if threads > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                results = pool.map(_run_job, jobs)
                for rec in results:
                    done[(rec.cell, rec.seed_index)] = rec
                    if ckpt:
                        _append(ckpt, digest, rec)
        else:
            for job in jobs:
                rec = _run_job(job)
                done[(rec.cell, rec.seed_index)] = rec
                if ckpt:
                    _append(ckpt, digest, rec)
    finally:
        if ckpt:
            ckpt.close()
    records = [done[k] for k in sorted(done)]
    if csv_path is not None and stop_after is None:
        csv_path.write_text(records_csv(records))
        json_path.write_text(json.dumps([asdict(r) for r in records], indent=2, sort_keys=True) + "\n")
    return records


def _append(fh, digest: str, rec: SweepRecord) -> None:
    fh.write(json.dumps({"key": [digest, rec.cell, rec.seed_index], "record": asdict(rec)},
                        sort_keys=True) + "\n")
    fh.flush()


def records_csv(records: list[SweepRecord]) -> str:
    buf = io.StringIO()
    buf.write(f"# cliquelab sweep schema v{SCHEMA_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SweepRecord.CSV_COLUMNS)
    for rec in records:
        w.writerow(rec.csv_row())
    return buf.getvalue()


def load_records(path: str | Path) -> list[SweepRecord]:
    """Read records from a sweep JSON mirror or CSV file."""
    p = Path(path)
    text = p.read_text()
    if p.suffix == ".json":
        return [SweepRecord.from_dict(d) for d in json.loads(text)]
    rows = [line for line in text.splitlines() if not line.startswith("#")]
    out = []
    for row in csv.DictReader(rows):
        out.append(SweepRecord(
            cell=int(row["cell"]), seed_index=int(row["seed_index"]), seed=int(row["seed"]),
            family=row["family"], params=row["params"], n=int(row["n"]), r=int(row["r"]),
            ell=int(row["ell"]), graph6=row["graph6"], min_degree=int(row["min_degree"]),
            delta_over_n=float(row["delta_over_n"]), alpha_lower=int(row["alpha_lower"]),
            alpha_upper=int(row["alpha_upper"]), alpha_exact=row["alpha_exact"] == "True",
            outcome=row["outcome"], cover_size=int(row["cover_size"]),
            factor_nodes=int(row["factor_nodes"])))
    return out


REPORT_COLUMNS = ("family", "params", "count", "factor", "no_factor", "unknown", "factor_rate",
                  "mean_alpha_over_n", "mean_delta_over_n")


def report(records: list[SweepRecord]) -> list[dict]:
    """Per-cell aggregates. Rates are over decided instances; unknowns are counted apart.

    ``mean_alpha_over_n`` uses the exact value where known and the lower bound otherwise.
    """
    cells: dict[tuple, list[SweepRecord]] = {}
    for rec in records:
        cells.setdefault((rec.family, rec.params), []).append(rec)
    rows = []
    for (family, params), recs in sorted(cells.items()):
        fac = sum(r.outcome == FACTOR for r in recs)
        nof = sum(r.outcome == NO_FACTOR for r in recs)
        unk = sum(r.outcome == UNKNOWN for r in recs)
        decided = fac + nof
        rows.append({
            "family": family, "params": params, "count": len(recs), "factor": fac,
            "no_factor": nof, "unknown": unk,
            "factor_rate": fac / decided if decided else None,
            "mean_alpha_over_n": sum(r.alpha_lower / r.n for r in recs) / len(recs),
            "mean_delta_over_n": sum(r.delta_over_n for r in recs) / len(recs),
        })
    return rows


def _fmt(v) -> str:
    if v is None:
        return "NA"
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


def report_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in REPORT_COLUMNS])
    return buf.getvalue()


def report_text(rows: list[dict]) -> str:
    table = [list(REPORT_COLUMNS)] + [[_fmt(row[c]) for c in REPORT_COLUMNS] for row in rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(REPORT_COLUMNS))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip()
                     for r in table) + "\n"
