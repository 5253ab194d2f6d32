import json

import pytest

from cliquelab.cli import main
from cliquelab.graph import complete_graph, cycle_graph, from_graph6, gnp, petersen_graph, to_graph6

K6 = to_graph6(complete_graph(6))
C5 = to_graph6(cycle_graph(5))
PETERSEN = to_graph6(petersen_graph())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_factor_exit_codes(capsys):
    code, out, _ = run(capsys, "factor", K6, "--r", "3")
    assert code == 0 and out.startswith("factor")
    code, out, _ = run(capsys, "factor", C5, "--r", "5")
    assert code == 1 and out.startswith("no-factor")
    code, out, _ = run(capsys, "--max-nodes", "1", "factor", to_graph6(complete_graph(12)), "--r", "3")
    assert code == 3 and out.startswith("unknown")


def test_factor_unknown_then_decided(capsys):
    g6 = to_graph6(gnp(30, 0.6, 4))
    code, out, _ = run(capsys, "factor", g6, "--r", "3", "--max-nodes", "1", "--json")
    assert code == 3 and json.loads(out)["outcome"] == "unknown"
    code, out, _ = run(capsys, "factor", g6, "--r", "3", "--json")
    assert code == 0 and json.loads(out)["outcome"] == "factor"


def test_global_flag_before_subcommand(capsys):
    code, out, _ = run(capsys, "--json", "factor", K6, "--r", "2")
    assert code == 0 and json.loads(out)["outcome"] == "factor"


def test_precondition_exit(capsys):
    code, _, err = run(capsys, "alpha", K6, "--ell", "0")
    assert code == 2 and err.startswith("error:")
    code, _, _ = run(capsys, "factor", "not graph6 at all!", "--r", "3")
    assert code == 2


def test_io_exit(capsys, tmp_path):
    code, _, _ = run(capsys, "sweep", str(tmp_path / "missing.json"))
    assert code == 4


def test_alpha(capsys):
    code, out, _ = run(capsys, "alpha", PETERSEN, "--ell", "2", "--exact")
    assert code == 0 and out.splitlines()[0] == "4"
    code, out, _ = run(capsys, "alpha", PETERSEN, "--ell", "2", "--threshold", "3")
    assert code == 1
    code, out, _ = run(capsys, "alpha", PETERSEN, "--ell", "2", "--threshold", "4")
    assert code == 0
    code, out, _ = run(capsys, "--json", "alpha", PETERSEN, "--ell", "2", "--budget", "8")
    payload = json.loads(out)
    lo, hi = payload["interval"]
    assert code == 0 and lo <= 4 <= hi and not payload["exact"]


def test_cliques(capsys):
    code, out, _ = run(capsys, "cliques", K6, "--r", "5")
    assert code == 0 and len(out.splitlines()) == 6
    code, out, err = run(capsys, "cliques", K6, "--r", "3", "--cap", "2")
    assert len(out.splitlines()) == 2 and "truncated" in err


def test_tiling_and_cover(capsys):
    code, out, _ = run(capsys, "tiling", PETERSEN, "--r", "2")
    assert code == 0 and out.startswith("5 parts")
    code, out, _ = run(capsys, "cover", K6, "--r", "3")
    assert code == 0 and "holds" in out
    code, out, _ = run(capsys, "cover", PETERSEN, "--r", "3", "--json")
    assert code == 1 and json.loads(out)["uncovered"] == list(range(10))


def test_gen_figure1_and_replay(capsys, tmp_path):
    prefix = str(tmp_path / "fig")
    code, out, _ = run(capsys, "--seed", "3", "gen", "--family", "figure1",
                       "--params", "n=20", "r=3", "x=0.5", "--out", prefix)
    assert code == 0
    side = json.loads((tmp_path / "fig.json").read_text())
    assert side["graph6"] == out.strip() == (tmp_path / "fig.g6").read_text().strip()
    assert side["provenance"]["seed"] == 3
    code, out, _ = run(capsys, "cover", prefix + ".g6", "--r", "3")
    assert code == 1 and out.strip() == "0"
    code, again, _ = run(capsys, "--seed", "3", "gen", "--family", "figure1",
                         "--params", "n=20", "r=3", "x=0.5")
    assert again.strip() == side["graph6"]


def test_gen_multipartite_and_blowup(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--family", "multipartite", "--params", "sizes=[3,3,3]")
    assert code == 0 and from_graph6(out.strip()).num_edges() == 27
    base = tmp_path / "k3.g6"
    base.write_text(to_graph6(complete_graph(3)) + "\n")
    code, out, _ = run(capsys, "gen", "--family", "blowup", "--base", str(base),
                       "--params", "n=10", "eps=0.05")
    assert code == 3
    code, out, _ = run(capsys, "gen", "--family", "blowup", "--base", str(base),
                       "--params", "n=10", "eps=0.1")
    assert code == 0 and from_graph6(out.strip()).n == 10


def test_gen_refusals(capsys):
    code, _, _ = run(capsys, "gen", "--family", "figure1", "--params", "n=20", "r=3", "x=2")
    assert code == 2
    code, _, _ = run(capsys, "gen", "--family", "figure1", "--params", "n")
    assert code == 2


def test_absorb_commands(capsys, tmp_path):
    k9 = to_graph6(complete_graph(9))
    code, out, _ = run(capsys, "absorb", "census", k9, "--parts", "0,1,2;3,4,5;6,7,8",
                       "--r", "3", "--beta", "0.1111111111111111")
    assert code == 0 and len(out.splitlines()) == 10
    code, out, _ = run(capsys, "--json", "absorb", "census", k9, "--parts", "0,1,2;3,4,5;6,7,8",
                       "--r", "3", "--beta", "0.1111111111111111")
    census_file = tmp_path / "census.json"
    census_file.write_text(out)
    code, out, _ = run(capsys, "absorb", "transferral", "--census", str(census_file), "--i", "0", "--j", "1")
    assert code == 0 and "pairwise: True" in out
    code, _, _ = run(capsys, "absorb", "transferral", "--census", "[[3,0],[0,3]]", "--i", "0", "--j", "1")
    assert code == 1
    code, out, _ = run(capsys, "absorb", "verify", K6, "--r", "3", "--S", "0,1,2", "--A", "3,4,5")
    assert code == 0 and out.strip() == "true"
    code, out, _ = run(capsys, "absorb", "verify", C5, "--r", "3", "--A", "0,1,2")
    assert code == 1 and out.startswith("fails")
    code, out, _ = run(capsys, "absorb", "reach", to_graph6(complete_graph(7)), "--u", "0", "--v", "1",
                       "--r", "3")
    assert code == 0 and out.startswith("2 reachable sets")


def test_wpart_commands(capsys, tmp_path):
    uni = tmp_path / "uniform.json"
    uni.write_text(json.dumps({"k": 30, "triples": [[i, j, 1] for i in range(30) for j in range(i + 1, 30)]}))
    zero = tmp_path / "zero.json"
    zero.write_text(json.dumps({"k": 30, "triples": []}))
    path = tmp_path / "path.json"
    path.write_text(json.dumps({"k": 4, "triples": [[0, 1, "1"], [1, 2, "1"], [2, 3, "1"]]}))
    assert run(capsys, "wpart", "check", str(uni), "--c", "0.5", "--mu", "0.3")[0] == 0
    assert run(capsys, "wpart", "check", str(zero), "--c", "0.5", "--mu", "0.3")[0] == 1
    code, out, _ = run(capsys, "wpart", "check", str(path), "--c", "0.1", "--mu", "0.06", "--exact",
                       "--S", "0,1,2")
    assert code == 1 and out.strip() == "false"
    code, out, _ = run(capsys, "--json", "wpart", "search", str(uni), "--c", "0.5", "--mu", "0.3", "--t", "2")
    assert code == 0 and json.loads(out)["Q"] == 10
    assert run(capsys, "wpart", "search", str(zero), "--c", "0.5", "--mu", "0.3", "--t", "2")[0] == 2
    code, out, _ = run(capsys, "wpart", "estimate", str(zero), "--c", "0.5", "--mu", "0.3", "--t", "2",
                       "--trials", "200")
    assert code == 0 and out.startswith("estimate=1.000000")


def test_sweep_and_report(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"family": "figure1", "grid": {"n": [20, 30], "r": [3], "x": [0.5]},
                               "seeds": 2}))
    prefix = str(tmp_path / "run")
    code, out, _ = run(capsys, "sweep", str(cfg), "--out", prefix)
    assert code == 0 and out.startswith("family")
    code, out, _ = run(capsys, "report", prefix + ".csv", "--csv")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3 and all(",0.0000," in l for l in lines[1:])
    code, out, _ = run(capsys, "--json", "report", prefix + ".json")
    assert [row["no_factor"] for row in json.loads(out)] == [2, 2]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"family": "figure1", "grid": {}}))
    assert run(capsys, "sweep", str(bad))[0] == 2
    assert run(capsys, "sweep", str(cfg), "--out", str(tmp_path / "no" / "dir" / "x"))[0] == 4


def test_stdin_graph(capsys, monkeypatch):
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO("# n=4\n0 1\n1 2\n2 3\n3 0\n"))
    code, out, _ = run(capsys, "factor", "-", "--r", "2")
    assert code == 0
