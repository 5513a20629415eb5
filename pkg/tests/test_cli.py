from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from dgonlab.cli import main
from dgonlab.corpus import corpus_path


@pytest.fixture()
def runner():
    return CliRunner()


def fixture_file(name: str) -> str:
    return str(corpus_path(name))


def test_validate_report(runner):
    result = runner.invoke(main, ["validate", fixture_file("FIX-ANN4")])
    assert result.exit_code == 0
    assert json.loads(result.output) == {
        "b": 2, "c": 6, "g": 0, "m": 3, "n": 3, "self_folded": ["1"],
    }


def test_verify_commute_exit_zero(runner):
    result = runner.invoke(
        main,
        ["verify-commute", fixture_file("FIX-A3"), "--arc", "1", "--mode", "sign-relaxed"],
    )
    assert result.exit_code == 0
    assert json.loads(result.output)["pass"] is True


def test_flip_unknown_arc_exit_one(runner):
    result = runner.invoke(main, ["flip", fixture_file("FIX-A3"), "--arc", "99"])
    assert result.exit_code == 1
    assert json.loads(result.output)["error"]["message"] == "unknown arc '99'"


def test_usage_error_exit_two(runner):
    result = runner.invoke(main, ["flip", fixture_file("FIX-A3")])
    assert result.exit_code == 2


def test_orbit_and_times(runner):
    result = runner.invoke(
        main, ["orbit", fixture_file("FIX-DISK4"), "--arc", "1", "--times", "10"]
    )
    assert json.loads(result.output) == {"period": 3}


def test_qsp_output_deterministic(runner):
    a = runner.invoke(main, ["qsp", fixture_file("FIX-SELF4")])
    b = runner.invoke(main, ["qsp", fixture_file("FIX-SELF4")])
    assert a.exit_code == 0
    assert a.output == b.output


def test_flip_roundtrips_surface_format(runner, tmp_path):
    out = tmp_path / "flipped.json"
    result = runner.invoke(
        main, ["flip", fixture_file("FIX-A3"), "--arc", "1", "--out", str(out)]
    )
    assert result.exit_code == 0
    again = runner.invoke(main, ["validate", str(out)])
    assert again.exit_code == 0
    assert json.loads(again.output)["n"] == 3


def test_mutate_surface_mode(runner):
    result = runner.invoke(
        main, ["mutate", fixture_file("FIX-A3"), "--arc", "1", "--mode", "surface"]
    )
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["potential"] == []
    assert len(data["arrows"]) == 4
    assert len(data["superfluous_pairs"]) == 2


def test_reduce_emits_trace(runner):
    result = runner.invoke(main, ["reduce", fixture_file("FIX-A3"), "--arc", "1"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert len(data["trace"]) == 2


def test_homology_command(runner):
    result = runner.invoke(
        main, ["homology", fixture_file("FIX-A3"), "--degree", "0", "--length", "6"]
    )
    assert result.exit_code == 0
    assert json.loads(result.output)["dim"] == 6


def test_verify_all_arcs_with_jobs(runner):
    result = runner.invoke(
        main,
        [
            "verify-commute", fixture_file("FIX-A3"),
            "--all-arcs", "--mode", "sign-relaxed", "--jobs", "2",
        ],
    )
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["pass"] is True
    assert len(data["reports"]) == 3


def test_verify_all_signs_stress(runner):
    result = runner.invoke(
        main,
        [
            "verify-commute", fixture_file("FIX-DISK4"),
            "--arc", "1", "--all-signs",
        ],
    )
    assert result.exit_code == 0
    rows = json.loads(result.output)["all_signs"]
    assert rows and all(r["pass"] for r in rows)
