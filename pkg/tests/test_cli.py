import json

import pytest

from iqamis.cli import main
from iqamis.graph import petersen_graph, read_graph, write_graph


def test_gen_and_oracle(tmp_path, capsys):
    out = tmp_path / "g.txt"
    assert main(["gen", "--n", "8", "--q", "auto", "--seed", "3", "--out", str(out)]) == 0
    g = read_graph(out)
    assert g.n == 8 and g.is_connected() and not g.is_weighted
    assert main(["gen", "--n", "8", "--q", "auto", "--seed", "3", "--out", str(tmp_path / "h.txt")]) == 0
    assert out.read_text() == (tmp_path / "h.txt").read_text()
    main(["gen", "--n", "6", "--q", "0.5", "--weighted", "--wlo", "1", "--whi", "3",
          "--seed", "1", "--out", str(tmp_path / "w.txt")])
    assert all(1 <= w <= 3 for w in read_graph(tmp_path / "w.txt").weights)
    write_graph(petersen_graph(), tmp_path / "p.txt")
    capsys.readouterr()
    assert main(["oracle", "--graph", str(tmp_path / "p.txt")]) == 0
    assert "value: 4" in capsys.readouterr().out


@pytest.mark.parametrize(
    "alg, extra",
    [("MIN", []), ("WMAX", []), ("MINQ", ["--p", "1"]), ("MMQ", ["--tau", "1"]),
     ("EDGE_ANTI", ["--lambda", "0.5"]), ("MINQ:mimic", []), ("QAOA", ["--p", "2"])],
)
def test_solve_json(tmp_path, capsys, alg, extra):
    write_graph(petersen_graph(), tmp_path / "p.txt")
    capsys.readouterr()
    assert main(["solve", "--graph", str(tmp_path / "p.txt"), "--alg", alg, "--json", *extra]) == 0
    out = json.loads(capsys.readouterr().out)
    if alg == "QAOA":
        assert 0 < out["ratio"] <= 1
    else:
        assert out["value"] <= 4 and "trace" in out


def test_solve_text_and_errors(tmp_path, capsys):
    write_graph(petersen_graph(), tmp_path / "p.txt")
    assert main(["solve", "--graph", str(tmp_path / "p.txt"), "--alg", "MIN"]) == 0
    assert "feasible: True" in capsys.readouterr().out
    assert main(["solve", "--graph", str(tmp_path / "missing.txt"), "--alg", "MIN"]) == 2
    assert main(["solve", "--graph", str(tmp_path / "p.txt"), "--alg", "BOGUS"]) == 2
    with pytest.raises(SystemExit):
        main(["solve", "--graph", "x", "--alg", "MIN", "--p", "1", "--tau", "2"])
    with pytest.raises(SystemExit):
        main(["gen", "--n", "3", "--q", "2", "--out", "x"])


@pytest.mark.parametrize("suite", ["analytic-p2", "appc", "mixer"])
def test_verify(capsys, suite):
    assert main(["verify", "--suite", suite]) == 0
    assert "[PASS]" in capsys.readouterr().out


def test_experiment(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("algorithms = MIN, MINQ:p=1\nn = 4..5\ninstances = 3\nrestarts = 2\n")
    assert main(["experiment", "--config", str(cfg), "--out-dir", str(tmp_path / "o1")]) == 0
    assert main(["experiment", "--config", str(cfg), "--out-dir", str(tmp_path / "o2")]) == 0
    assert (tmp_path / "o1" / "rows.csv").read_bytes() == (tmp_path / "o2" / "rows.csv").read_bytes()
    assert "mean=" in capsys.readouterr().out
