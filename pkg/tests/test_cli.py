"""CLI surface: subcommand wiring, exit codes, JSON output, reproducibility."""

from __future__ import annotations

import json

import pytest

from lelekfan import load_fan
from lelekfan.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_check_nc_accepts(capsys):
    code, data = run(capsys, "check-nc", "--r", "1/2", "--rho", "3")
    assert code == 0
    assert data == {"is_nc": True, "witness": None}


def test_check_nc_rejects_with_witness(capsys):
    code, data = run(capsys, "check-nc", "--r", "1/2", "--rho", "2")
    assert code == 2
    assert data == {"is_nc": False, "witness": [1, -1]}


def test_check_nc_precondition_exit(capsys):
    code = main(["check-nc", "--r", "3/2", "--rho", "3"])
    assert code == 3
    assert "0 < r < 1" in capsys.readouterr().err


def test_bad_scalar_literal_is_precondition_exit(capsys):
    assert main(["check-nc", "--r", "abc", "--rho", "3"]) == 3


def test_unknown_flag_exits_64():
    with pytest.raises(SystemExit) as info:
        main(["check-nc", "--nope"])
    assert info.value.code == 64


def test_unknown_command_exits_64():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 64


def test_build_writes_loadable_file(capsys, tmp_path):
    out = tmp_path / "legs.json"
    code, data = run(capsys, "build", "--r", "1/2", "--rho", "3", "--relation", "F", "--depth", "4", "--out", str(out))
    assert code == 0
    assert data["legs"] == 81
    fan = load_fan(out)
    assert fan.depth == 4
    assert len(fan.legs) == 81


def test_build_is_byte_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["build", "--depth", "3", "--out", str(a)])
    main(["build", "--depth", "3", "--out", str(b)])
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_build_gates_relation_f_on_nc(capsys):
    code = main(["build", "--r", "1/2", "--rho", "2", "--relation", "F", "--depth", "2", "--out", "/dev/null"])
    assert code == 2
    assert "dependent" in capsys.readouterr().err


def test_build_budget_exit(capsys):
    code = main(["build", "--depth", "14", "--out", "/dev/null"])
    assert code == 4
    assert "budget" in capsys.readouterr().err


def test_build_sampled(capsys, tmp_path):
    out = tmp_path / "sampled.json"
    code, data = run(capsys, "build", "--depth", "30", "--sample", "25", "--seed", "9", "--out", str(out))
    assert code == 0
    assert data["legs"] == 25
    assert len(load_fan(out).legs) == 25


def test_greedy_output(capsys):
    code, data = run(capsys, "greedy", "--x", "2/5", "--r", "1/2", "--rho", "3", "--steps", "4")
    assert code == 0
    assert data["symbols"] == ["1/2", "3", "1/2", "3"]
    assert data["partials"] == ["1/5", "3/5", "3/10", "9/10"]
    assert data["running_max"] == "9/10"


def test_greedy_domain_exit(capsys):
    assert main(["greedy", "--x", "0", "--steps", "4"]) == 3
    assert main(["greedy", "--x", "1/2", "--rho", "2", "--steps", "4"]) == 2


def test_endpoints_report(capsys, tmp_path):
    out = tmp_path / "legs.json"
    main(["build", "--relation", "G", "--depth", "5", "--out", str(out)])
    capsys.readouterr()
    code, data = run(capsys, "endpoints", "--in", str(out))
    assert code == 0
    assert data["total"] == 32
    assert data["exact"] == 32  # every finite leg tip touches a coordinate equal to 1
    assert data["degenerating"] == 0
    assert len(data["legs"]) == 32


def test_endpoints_degeneracy_flag(capsys):
    code, data = run(
        capsys,
        "endpoints", "--relation", "F", "--depth", "6", "--degeneracy-threshold", "1/600",
    )
    assert code == 0
    assert data["degenerating"] > 0  # all-rho words have t_max = 3^-6 < 1/600


def test_density_small_run(capsys, tmp_path):
    report_path = tmp_path / "density.json"
    code, data = run(
        capsys,
        "density", "--epsilon", "1/16", "--depth", "12", "--samples", "10", "--seed", "3",
        "--report", str(report_path),
    )
    assert code == 0
    assert data["pass"] is True
    assert data["failures"] == []
    assert json.loads(report_path.read_text()) == data


def test_embed_check_small_run(capsys, tmp_path):
    report_path = tmp_path / "report.json"
    code, data = run(
        capsys,
        "embed-check", "--r", "1/2", "--rho", "3", "--depth", "3", "--samples", "20",
        "--seed", "7", "--report", str(report_path),
    )
    assert code == 0
    assert data["pass"] is True
    for check in data["checks"]:
        assert set(check) == {"name", "pass", "counterexample"}
    assert json.loads(report_path.read_text()) == data


def test_embed_check_dependent_pair_exits_2(capsys):
    assert main(["embed-check", "--r", "1/2", "--rho", "2", "--depth", "2", "--samples", "5"]) == 2


def test_hausdorff_output(capsys):
    code, data = run(
        capsys,
        "hausdorff", "--a", "F", "--b", "G", "--depth", "3", "--grid", "6",
    )
    assert code == 0
    assert 0 <= data["lower"] <= data["upper"]
    assert data["resolution"] > 0


def test_render_from_file(capsys, tmp_path):
    legs = tmp_path / "legs.json"
    svg_a = tmp_path / "a.svg"
    svg_b = tmp_path / "b.svg"
    main(["build", "--relation", "G", "--depth", "4", "--out", str(legs)])
    capsys.readouterr()
    assert main(["render", "--in", str(legs), "--out", str(svg_a), "--angle-map", "cantor", "--sweep", "60"]) == 0
    assert main(["render", "--in", str(legs), "--out", str(svg_b), "--angle-map", "cantor", "--sweep", "60"]) == 0
    assert svg_a.read_bytes() == svg_b.read_bytes()
    assert svg_a.read_text().count("<line ") == 16


def test_render_missing_file_is_precondition_exit(capsys, tmp_path):
    legs = tmp_path / "legs.json"
    legs.write_text("{}")
    assert main(["render", "--in", str(legs), "--out", str(tmp_path / "x.svg")]) == 3


def test_fan_threads_validation(capsys, monkeypatch):
    monkeypatch.setenv("FAN_THREADS", "8")
    code, data = run(capsys, "check-nc", "--r", "1/2", "--rho", "3")
    assert code == 0
    monkeypatch.setenv("FAN_THREADS", "zero")
    assert main(["check-nc", "--r", "1/2", "--rho", "3"]) == 3
