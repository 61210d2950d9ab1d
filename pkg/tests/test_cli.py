import json
import sys

import pytest

from crosshammer.cli import main
from crosshammer.fixtures import lists_a_path
from crosshammer.library import save_library
from crosshammer.matching import read_match_tsv


@pytest.fixture(scope="module")
def files(tmp_path_factory, twin):
    d = tmp_path_factory.mktemp("cli")
    save_library(twin.library, d / "b.lib")
    return {"a": str(lists_a_path()), "b": str(d / "b.lib"), "dir": d}


@pytest.fixture(scope="module")
def match_file(files):
    out = files["dir"] / "m.tsv"
    assert main(["match", "--int", files["a"], "--ext", files["b"], "--out", str(out)]) == 0
    return out


def test_equiv_lists_twins(files, capsys, lib_a):
    assert main(["equiv", "--lib", files["a"]]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines and all(len(l.split("\t")) > 1 for l in lines)
    assert main(["equiv", "--lib", files["a"], "--thm", "lists-A/APPEND_ASSOC"]) == 0
    assert "lists-A/APPEND_ASSOC" in capsys.readouterr().out.split()
    stmt = lib_a.thm("lists-A/APPEND_ASSOC").statement
    from crosshammer.kernel import print_term

    assert main(["equiv", "--lib", files["a"], "--term", print_term(stmt)]) == 0
    assert "lists-A/APPEND_ASSOC" in capsys.readouterr().out.split()


def test_match_recovers_twin(match_file, twin):
    state = read_match_tsv(match_file)
    right = sum(twin.const_map.get(a) == b for a, b in state.pairs.items())
    assert right >= 0.95 * len(twin.const_map)


def test_train_and_predict(files, match_file, capsys):
    model = files["dir"] / "model.json"
    assert main(["train", "--lib", files["a"], "--ext", files["b"], "--match", str(match_file),
                 "--out", str(model)]) == 0
    assert json.loads(model.read_text())["features_mode"] == "both"
    capsys.readouterr()
    conj = "(! (\\l:(lists-A/list 'a). (= (lists-A/APPEND l lists-A/NIL) l)))"
    assert main(["predict", "--model", str(model), "--conj", conj, "--k", "5"]) == 0
    rows = [l.split("\t") for l in capsys.readouterr().out.splitlines()]
    assert len(rows) == 5
    scores = [float(s) for _, s in rows]
    assert scores == sorted(scores, reverse=True)
    # the conjecture is APPEND_NIL_R, stated in internal names: its own
    # dependencies collect the most votes
    assert "lists-A/APPEND_CONS" in {tid for tid, _ in rows[:2]}


def test_advise_json(files, match_file, capsys):
    argv = ["advise", "--scenario", "ext-deps", "--int", files["a"], "--ext", files["b"],
            "--match", str(match_file), "--thm", "lists-A/APPEND_ASSOC"]
    assert main(argv) == 0
    checked = json.loads(capsys.readouterr().out)
    assert checked["applicable"] and checked["external"] == []
    assert set(checked["internal"]) == {"lists-A/list_INDUCT", "lists-A/APPEND_NIL", "lists-A/APPEND_CONS"}
    # every dependency of the twin has an internal equivalent, so nothing external is needed
    assert main(argv + ["--unchecked"]) == 0
    assert json.loads(capsys.readouterr().out)["internal"] == checked["internal"]


def test_theories(files, match_file, capsys):
    assert main(["theories", "--int", files["a"], "--ext", files["b"], "--match", str(match_file), "--top", "3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 3


def test_evolution(files, tmp_path):
    out = tmp_path / "e.csv"
    assert main(["evolution", "--int", files["a"], "--ext", files["b"], "--theory", "combin",
                 "--out", str(out), "--stride", "5"]) == 0
    assert out.read_text().startswith("seq,matched,declared")
    assert main(["evolution", "--int", files["a"], "--ext", files["b"], "--theory", "nope",
                 "--out", str(out)]) == 2


def test_tptp(files, tmp_path):
    out = tmp_path / "x.p"
    assert main(["tptp", "--lib", files["a"], "--thm", "lists-A/APPEND_ASSOC", "--deps", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.count("fof(") == len(text.splitlines()) and "conjecture" in text
    assert "lists-A/APPEND_NIL" in out.with_suffix(".map").read_text()


def test_simulate_and_report(files, tmp_path, capsys):
    stub = tmp_path / "stub.py"
    stub.write_text("print('% SZS status GaveUp')\n")
    (tmp_path / "run.toml").write_text(
        f'internal = "{files["a"]}"\nexternal = "{files["b"]}"\nscenarios = ["empty", "ext-deps"]\n'
        f'unchecked = true\nlimit = 5\nout = "out"\n[atp]\nbinary = "{sys.executable}"\nargs = "{stub}"\n')
    assert main(["simulate", "--config", str(tmp_path / "run.toml")]) == 0
    out = capsys.readouterr().out
    assert "external dependencies (unchecked)" in out
    assert (tmp_path / "out" / "summary.csv").exists()
    records = tmp_path / "out" / "records.jsonl"
    assert len(records.read_text().splitlines()) == 15
    assert main(["report", "--records", str(records), "--theories", "--csv", str(tmp_path / "r.csv")]) == 0
    assert "theory" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["equiv", "--lib", "/nonexistent.lib"],
    ["tptp", "--lib", "LISTS", "--thm", "lists-A/NOPE", "--out", "/tmp/x.p"],
    ["simulate", "--config", "/nonexistent.toml"],
    ["predict", "--model", "/nonexistent.json", "--conj", "p"],
])
def test_errors_exit_2(argv, files, capsys):
    argv = [files["a"] if a == "LISTS" else a for a in argv]
    assert main(argv) == 2
    assert capsys.readouterr().err


def test_bad_library_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.lib"
    bad.write_text("X garbage\n")
    assert main(["equiv", "--lib", str(bad)]) == 2


def test_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["advise", "--scenario", "nope"])
    assert e.value.code == 2
