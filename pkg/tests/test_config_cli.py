import json
from importlib import resources

import pytest
import yaml

from latticestat.cli import main
from latticestat.config import ConfigError, dumps, explain, loads, run

DATA = resources.files("latticestat") / "data"

SMALL = """
seed: 3
horizon: 500
spaces: {L: 2}
operators:
  I: {value: id(2), domain: L, codomain: L}
indexsets: {bad: squares}
sequences:
  R: piecewise(bad, scaled(n, I), scaled(1/n, I))
queries:
  - {id: o, kind: o, args: {sequence: R, target: 'zero(2,2)'}}
  - {id: soc, kind: soc, args: {sequence: R, target: 'zero(2,2)'}, cfg: {tolerance: 1/1000}}
"""


def write(tmp_path, text, name="c.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_round_trip():
    cfg = loads(SMALL)
    again = loads(dumps(cfg))
    assert again == cfg
    assert [q.resolved["sequence"] for q in again.queries] == [q.resolved["sequence"] for q in cfg.queries]


def test_run_and_explain():
    rep = run(loads(SMALL))
    status = {q["id"]: q["verdict"]["status"] for q in rep["queries"]}
    assert status == {"o": "Refuted", "soc": "Proven"}
    assert all(q["recheck"]["ok"] for q in rep["queries"])
    text = explain(rep, "soc")
    assert "complement(squares)" in text and "(1/n)·I" in text
    with pytest.raises(KeyError):
        explain(rep, "nope")


def test_classical_phrasing():
    rep = run(loads(SMALL.replace("piecewise(bad, scaled(n, I), scaled(1/n, I))", "scaled(1/n, I)")))
    assert "classical order convergence" in explain(rep, "soc")


def test_empty_queries_invalid():
    with pytest.raises(ConfigError):
        loads("queries: []")


def test_precondition_reported_not_raised():
    text = SMALL + "  - {id: w, kind: witness, args: {sequence: 'scaled(n, I)', target: 'zero(2,2)'}}\n"
    rep = run(loads(text))
    w = rep["queries"][-1]
    assert w["verdict"]["status"] == "Refuted" and "precondition" in w


@pytest.mark.parametrize(
    "text, code",
    [
        ("queries: []", 2),
        ("seed: [1\n", 2),
        ("queries:\n  - {kind: soc, args: {sequence: 'sum(', target: 'zero(1,1)'}}", 2),
        ("queries:\n  - {kind: soc, args: {sequence: X, target: 'zero(1,1)'}}", 3),
        ("queries:\n  - {kind: theorem, args: {theorem: nonsense}}", 3),
        ("queries:\n  - {kind: soc, args: {sequence: 'const(id(2))', target: 'zero(1,1)'}}", 4),
        ("spaces: {L: 3}\noperators:\n  A: {value: id(2), domain: L}\nqueries:\n  - {kind: o, args: {sequence: 'const(A)', target: A}}", 4),
        ("queries:\n  - {kind: magic, args: {}}", 2),
    ],
)
def test_exit_codes(tmp_path, text, code, capsys):
    assert main(["run", write(tmp_path, text)]) == code
    assert "latticestat:" in capsys.readouterr().err


def test_missing_file(capsys):
    assert main(["run", "/nonexistent.yaml"]) == 2


def test_cli_run_json_and_explain(tmp_path, capsys):
    cfg = write(tmp_path, SMALL)
    out = str(tmp_path / "r.json")
    assert main(["run", cfg, "--json", "--horizon", "200", "--seed", "5", "-o", out]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["seed"] == 5 and rep["overrides"]["horizon"] == 200
    assert rep["queries"][1]["verdict"]["horizon"] == 200
    assert main(["explain", out, "o"]) == 0
    assert "squares" in capsys.readouterr().out
    assert main(["explain", out, "missing"]) == 3


def test_quiet_and_list(tmp_path, capsys):
    assert main(["run", write(tmp_path, SMALL), "--quiet"]) == 0
    assert capsys.readouterr().out == ""
    assert main(["theorems", "--list"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 24


def test_theorem_query():
    rep = run(loads("queries:\n  - {id: t, kind: theorem, args: {theorem: wedge-zero, trials: 3}}"))
    t = rep["queries"][0]["theorem"]
    assert t["passed"] + t["vacuous"] == 3 and t["failed"] == 0
    assert "wedge-zero" in explain(rep, "t")


def test_bundled_configs_parse():
    names = sorted(p.name for p in DATA.iterdir() if p.name.endswith(".yaml"))
    assert names == ["coordfun_16.yaml", "coordfun_256.yaml", "coordfun_64.yaml", "unbounded_on_squares.yaml"]
    for n in names:
        loads((DATA / n).read_text())
