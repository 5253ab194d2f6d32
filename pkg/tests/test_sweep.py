import json
import os

import pytest

from cliquelab.errors import DomainError, PreconditionError
from cliquelab.factor import FACTOR, NO_FACTOR, UNKNOWN
from cliquelab.sweep import (SweepConfig, SweepRecord, load_records, output_paths, records_csv,
                             report, report_csv, report_text, run_sweep)

FIG1 = {"family": "figure1", "grid": {"n": [20, 30, 40], "r": [3], "x": [0.5]}, "seeds": 5}


def test_figure1_sweep():
    recs = run_sweep(SweepConfig.from_dict(FIG1))
    assert len(recs) == 15
    assert all(r.outcome == NO_FACTOR and r.cover_size == 1 for r in recs)
    assert [(r.cell, r.seed_index) for r in recs] == sorted((r.cell, r.seed_index) for r in recs)
    rows = report(recs)
    assert [row["factor_rate"] for row in rows] == [0.0, 0.0, 0.0]


def test_multipartite_sweep():
    cfg = SweepConfig("multipartite", {"n": [12, 15, 18, 21, 24], "r": [3]})
    recs = run_sweep(cfg)
    assert len(recs) == 5 and all(r.outcome == FACTOR for r in recs)
    assert all(r.cover_size == 0 for r in recs)
    assert [r.min_degree for r in recs] == [2 * n // 3 for n in (12, 15, 18, 21, 24)]


def test_config_validation():
    with pytest.raises(PreconditionError):
        SweepConfig("figure1", {})
    with pytest.raises(PreconditionError):
        SweepConfig("figure1", {"n": []})
    with pytest.raises(PreconditionError):
        SweepConfig("figure1", {"r": [3]})
    with pytest.raises(PreconditionError):
        SweepConfig("figure1", {"n": [20]}, max_nodes=0)
    with pytest.raises(DomainError):
        SweepConfig("petersen", {"n": [20]})
    with pytest.raises(PreconditionError):
        SweepConfig.from_dict({"family": "gnp", "grid": {"n": [5]}, "colour": "red"})


def test_cells_order():
    cfg = SweepConfig("gnp", {"p": [0.3, 0.6], "n": [5, 6]})
    assert cfg.cells() == [{"n": 5, "p": 0.3}, {"n": 5, "p": 0.6}, {"n": 6, "p": 0.3}, {"n": 6, "p": 0.6}]


def _record(outcome, cell="{}"):
    return SweepRecord(0, 0, 1, "gnp", cell, 10, 3, 2, "I????????", 3, 0.3, 4, 4, True, outcome, 0, 5)


def test_report_examples():
    assert report([_record(NO_FACTOR)] * 15)[0]["factor_rate"] == 0.0
    mixed = [_record(FACTOR), _record(FACTOR), _record(NO_FACTOR), _record(UNKNOWN)]
    row = report(mixed)[0]
    assert (row["factor"], row["no_factor"], row["unknown"], row["count"]) == (2, 1, 1, 4)
    assert row["factor_rate"] == pytest.approx(2 / 3)
    assert report([_record(UNKNOWN)])[0]["factor_rate"] is None
    assert report_csv(report([])).strip().count("\n") == 0
    assert report_text([]).startswith("family")


def test_report_ordering_deterministic():
    recs = [_record(FACTOR, '{"n": 9}'), _record(NO_FACTOR, '{"n": 10}'), _record(FACTOR, '{"n": 9}')]
    assert report(recs) == report(list(reversed(recs)))


def test_byte_identical_rerun(tmp_path):
    cfg = dict(FIG1, seeds=2, output=str(tmp_path / "a"))
    run_sweep(SweepConfig.from_dict(cfg), resume=False)
    first = (tmp_path / "a.csv").read_bytes()
    run_sweep(SweepConfig.from_dict(cfg), resume=False)
    assert (tmp_path / "a.csv").read_bytes() == first
    assert first.startswith(b"# cliquelab sweep schema v1\n")


def test_threads_match_serial(tmp_path):
    cfg = SweepConfig("gnp", {"n": [9, 12], "p": [0.5, 0.8], "r": [3]}, seeds=2)
    assert records_csv(run_sweep(cfg, threads=3)) == records_csv(run_sweep(cfg))


def test_resume_matches_uninterrupted(tmp_path):
    full = run_sweep(SweepConfig.from_dict(FIG1))
    cfg = SweepConfig.from_dict(dict(FIG1, output=str(tmp_path / "b")))
    partial = run_sweep(cfg, stop_after=6)
    assert len(partial) == 6
    _, _, ckpt = output_paths(cfg.output)
    assert len(ckpt.read_text().splitlines()) == 6
    resumed = run_sweep(cfg)
    assert records_csv(resumed) == records_csv(full)
    assert len(ckpt.read_text().splitlines()) == 15


def test_load_records_round_trip(tmp_path):
    cfg = SweepConfig.from_dict(dict(FIG1, seeds=1, output=str(tmp_path / "c")))
    recs = run_sweep(cfg)
    csv_path, json_path, _ = output_paths(cfg.output)
    assert records_csv(load_records(csv_path)) == records_csv(recs)
    from_json = load_records(json_path)
    assert all("factor_ms" in r.timings for r in from_json)
    assert records_csv(from_json) == records_csv(recs)
    assert json.loads(json_path.read_text())[0]["graph6"] == recs[0].graph6


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores directory permissions")
def test_unwritable_output_permission(tmp_path):
    locked = tmp_path / "locked"
    locked.mkdir()
    locked.chmod(0o500)
    with pytest.raises(OSError):
        run_sweep(SweepConfig.from_dict(dict(FIG1, output=str(locked / "x"))))


def test_unwritable_output_missing_dir(tmp_path, monkeypatch):
    calls = []
    import cliquelab.sweep as sweep_mod
    monkeypatch.setattr(sweep_mod, "run_instance", lambda *a: calls.append(a))
    with pytest.raises(OSError):
        run_sweep(SweepConfig.from_dict(dict(FIG1, output=str(tmp_path / "nope" / "x"))))
    assert calls == []
