from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from newtonstrata import preset
from newtonstrata.cli import UsageError, main, parse_group, parse_mu


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _csv_rows(text):
    return list(csv.DictReader(io.StringIO("".join(l for l in text.splitlines(True) if not l.startswith("#")))))


def test_table_examples(capsys):
    code, out, _ = run(capsys, "table", "gl:4", "--mu", "1,1,0,0")
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"]) == 5
    assert doc["schema_version"] == "1.0" and doc["config"]["seed"] == 0
    code, out, _ = run(capsys, "table", "gl:1", "--mu", "3")
    assert code == 0 and len(json.loads(out)["rows"]) == 1
    code, out, _ = run(capsys, "table", "gsp:4", "--mu", "1,1,1", "--format", "csv")
    rows = _csv_rows(out)
    assert code == 0 and [int(r["dim_stratum"]) for r in rows] == [3, 2, 1]


def test_table_markdown(capsys):
    code, out, _ = run(capsys, "table", "gl:2", "--mu", "1,0", "--format", "md")
    assert code == 0 and out.startswith("# Newton strata") and "| nu |" in out


def test_hasse(capsys):
    code, out, _ = run(capsys, "hasse", "gl:4", "--mu", "1,1,0,0")
    assert code == 0 and out.count("->") == 5 and out.count("[label=") == 5
    assert out.startswith("// schema: newtonstrata/hasse")
    code, out, _ = run(capsys, "hasse", "gl:3", "--mu", "1,1,1", "--format", "json")
    doc = json.loads(out)
    assert len(doc["nodes"]) == 1 and doc["edges"] == []
    code, out, _ = run(capsys, "hasse", "gl:2", "--mu", "1,0", "--format", "json")
    doc = json.loads(out)
    assert len(doc["nodes"]) == 2 and doc["edges"] == [["n0", "n1"]]


def test_check(capsys):
    code, out, _ = run(capsys, "check", "gl:4", "--mu", "1,1,0,0", "--verify")
    assert code == 0 and json.loads(out)["summary"]["failures"] == 0
    code, out, _ = run(capsys, "check", "pgl:2", "--mu", "1")
    doc = json.loads(out)
    assert code == 1 and doc["summary"] == {"findings": 1, "failures": 0, "warnings": 1}
    assert doc["runs"][0]["findings"][0]["check"] == "formula-domain"
    code, out, _ = run(capsys, "check", "gl:1", "--mu", "0")
    assert code == 0
    code, out, _ = run(capsys, "check", "gsp:4")
    assert code == 0 and len(json.loads(out)["runs"]) == 4


def test_oracle(capsys, tmp_path):
    path = tmp_path / "swap.json"
    path.write_text(json.dumps({"q": 3, "n": 2, "entries": [[[], [[1, [1]]]], [[[0, [1]]], []]]}))
    code, out, _ = run(capsys, "oracle", str(path), "--verify")
    doc = json.loads(out)
    assert code == 0
    assert doc["newton"] == ["1/2", "1/2"] and doc["newton_cartan_limit"] == ["1/2", "1/2"]
    assert doc["kappa"] == 1 and doc["cartan"] == [1, 0]
    code, out, _ = run(capsys, "oracle", str(path), "--format", "md")
    assert code == 0 and "| kappa | 1 |" in out


def test_mazur_and_kr(capsys, tmp_path):
    fig = tmp_path / "m.png"
    code, out, _ = run(capsys, "mazur", "gl:3", "--mu", "2,1,0", "--samples", "40", "--figure", str(fig))
    doc = json.loads(out)
    assert code == 0 and doc["violations"] == [] and fig.stat().st_size > 0
    code, out, _ = run(capsys, "kr", "gl:4", "--mu", "1,1,0,0")
    doc = json.loads(out)
    assert code == 0 and len(doc["witnesses"]) == 5
    assert all(w["status"] == "monomial" for w in doc["witnesses"])


@pytest.mark.parametrize("argv,needle", [
    (["table", "gl:4", "--mu", "0,1,0,0"], "not dominant"),
    (["table", "gl:4", "--mu", "1,x,0,0"], "entry 2"),
    (["table", "gl:4", "--mu", "1,1,0"], "needs 4"),
    (["table", "gl:4", "--mu", "1/2,0,0,0"], "not an integer"),
    (["table", "gl:4"], "--mu is required"),
    (["table", "foo:4", "--mu", "1"], "unknown family"),
    (["table", "gl:x", "--mu", "1"], "not an integer"),
    (["table", "gsp:5", "--mu", "1"], "even size"),
    (["mazur", "gsp:4", "--mu", "1,1,1"], "gl:n only"),
    (["hasse", "gl:2", "--mu", "1,0", "--format", "csv"], "not available"),
    (["oracle", "/nonexistent.json"], "cannot read"),
])
def test_usage_errors(capsys, argv, needle):
    code, out, err = run(capsys, *argv)
    assert code == 2 and needle in err and out == ""


def test_dominantize(capsys):
    code, out, _ = run(capsys, "table", "gl:4", "--mu", "0,1,0,1", "--dominantize")
    assert code == 0 and json.loads(out)["mu"] == ["1", "1", "0", "0"]


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 4, "samples": 12, "format": "csv"}))
    code, out, _ = run(capsys, "mazur", "gl:2", "--mu", "1,0", "--config", str(cfg))
    assert code == 0 and '"samples": 12' in out and '"seed": 4' in out
    code, out, _ = run(capsys, "mazur", "gl:2", "--mu", "1,0", "--config", str(cfg), "--samples", "3",
                       "--format", "json")
    assert json.loads(out)["config"]["samples"] == 3
    for bad in ({"sede": 1}, {"seed": "1"}, {"samples": -1}, {"format": "xml"}, [1]):
        cfg.write_text(json.dumps(bad))
        code, _, err = run(capsys, "table", "gl:2", "--mu", "1,0", "--config", str(cfg))
        assert code == 2 and "config" in err
    cfg.write_text("{")
    code, _, err = run(capsys, "table", "gl:2", "--mu", "1,0", "--config", str(cfg))
    assert code == 2 and "line 1" in err


def test_internal_assertion_exit_3(capsys, monkeypatch):
    from newtonstrata.errors import InvariantViolation

    def boom(*a, **k):
        raise InvariantViolation("forced")
    monkeypatch.setattr("newtonstrata.cli.run_checks", boom)
    code, _, err = run(capsys, "check", "gl:2", "--mu", "1,0")
    assert code == 3 and "forced" in err


def test_outputs_are_byte_identical(tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / f"t{k}.csv"
        svg = tmp_path / f"t{k}.svg"
        assert main(["table", "gl:4", "--mu", "1,1,0,0", "--format", "csv", "--out", str(out),
                     "--figure", str(svg)]) == 0
        outs.append((out.read_bytes(), svg.read_bytes()))
    assert outs[0] == outs[1]
    assert outs[0][1].startswith(b"<?xml")


def test_figures_for_all_groups(tmp_path):
    for token, mu in (("gl:4", "1,1,0,0"), ("gsp:4", "1,1,1"), ("u:3", "1,0,-1")):
        png = tmp_path / f"{token.replace(':', '')}.png"
        assert main(["hasse", token, "--mu", mu, "--figure", str(png), "--out", str(tmp_path / "h.dot")]) == 0
        assert png.read_bytes()[:4] == b"\x89PNG"


def test_parsers_directly():
    d = preset("gl", 3)
    assert parse_mu("2, 1, 0", d) == (2, 1, 0)
    with pytest.raises(UsageError):
        parse_group("gl")
    assert str(parse_group("GL:3")) == "gl:3"


def test_custom_group(capsys, tmp_path):
    path = tmp_path / "d.json"
    path.write_text(json.dumps(preset("gl", 2).to_dict()))
    code, out, _ = run(capsys, "table", f"custom:{path}", "--mu", "1,0")
    assert code == 0 and len(json.loads(out)["rows"]) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "newtonstrata", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "newtonstrata" in res.stdout
