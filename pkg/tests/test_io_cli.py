import json

import pytest

from perihom.cli import main
from perihom.io import (
    InputError, load_cycle, load_periodic, periodic_from_json,
    periodic_to_json,
)
from perihom.periodic import build_quotient

from conftest import corpus_path


def test_periodic_json_roundtrip():
    p = load_periodic(corpus_path("running.json"))
    doc = periodic_to_json(p)
    p2 = periodic_from_json(doc)
    assert p2.cells == p.cells
    assert p2.entries == p.entries
    assert p2.field == p.field


def test_load_cycle(running):
    g = build_quotient(running, 3)
    deg, chain = load_cycle(corpus_path("red_cycle_n3.json"), g)
    assert deg == 1
    assert sum(1 for x in chain if x != g.complex.field.zero) == 3


def test_load_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InputError):
        load_periodic(str(bad))
    missing = tmp_path / "missing.json"
    missing.write_text(json.dumps({"schema": "perihom/1"}))
    with pytest.raises(InputError):
        load_periodic(str(missing))


def test_cli_validate_ok(capsys):
    assert main(["validate", corpus_path("running.json")]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == "perihom/1"
    assert doc["valid"] is True


def test_cli_validate_bad_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "schema": "perihom/1", "field": {"kind": "Fp", "p": 2},
        "cells": [{"id": "e", "dim": 1}],
        "boundary": [{"cell": "e", "entries": [
            {"cell": "v", "shift": 0, "coeff": 1}]}]}))
    assert main(["validate", str(bad)]) == 1


def test_cli_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["homology"])  # missing file argument
    assert exc.value.code == 3


def test_cli_bad_n_is_invalid_input(capsys):
    assert main(["homology", corpus_path("running.json"), "--n", "0"]) == 1


def test_cli_monodromy_matrices(capsys):
    rc = main(["monodromy", corpus_path("running.json"), "--emit-matrices"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    deg0 = doc["monodromy"]["degrees"]["0"]
    assert deg0["M_V"] == [[1, 0, 1], [0, 0, 0], [0, 1, 0]]
    assert deg0["M_U"] == [[1, 1], [0, 0]]


def test_cli_deterministic_output(capsys):
    args = ["toroidal", corpus_path("running.json"), "--n", "3"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first


def test_cli_classify_verdicts(capsys):
    rc = main(["classify", corpus_path("running.json"), "--n", "3",
               "--cycle", corpus_path("red_cycle_n3.json")])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"]["toroidal"] is True
    rc = main(["classify", corpus_path("running.json"), "--n", "3",
               "--cycle", corpus_path("green_cycle_n3.json")])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"]["toroidal"] is False


def test_cli_persist(capsys):
    rc = main(["persist", corpus_path("running_filtered.json"),
               "--emit-matrices"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["persistence"]["unimodality"]["unimodal"] is True


def test_cli_oracle(capsys):
    rc = main(["oracle", corpus_path("running.json"), "--n", "3"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["oracle"]["mvss_agrees"] is True


def test_cli_text_format(capsys):
    rc = main(["homology", corpus_path("running.json"), "--n", "2",
               "--format", "text"])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("schema: perihom/1")


def test_cli_figures(tmp_path, capsys):
    rc = main(["toroidal", corpus_path("running.json"), "--n", "3",
               "--figures", str(tmp_path), "--quiet"])
    assert rc == 0
    pngs = list(tmp_path.glob("*.png"))
    assert pngs, "no figures rendered"
