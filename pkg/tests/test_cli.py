import json

import numpy as np
import pytest

from tomojoint.cli import (
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_USAGE,
    RunConfig,
    main,
)

COARSE = [
    "--grid", "X:-8,8,81",
    "--grid", "mu:-4.5,4.5,33",
    "--grid", "nu:-4.5,4.5,33",
    "--grid", "q:-8,8,81",
    "--grid", "p:-8,8,81",
]


def test_no_command_is_usage_error(capsys):
    assert main([]) == EXIT_USAGE


def test_missing_state_is_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["tomogram"])
    assert err.value.code == EXIT_USAGE


def test_tomogram_optical_writes_files(tmp_path, capsys):
    code = main([
        "--out", str(tmp_path), "tomogram",
        "--state", "fock:n=0", "--rep", "optical", "--prior", "p2-default",
    ])
    assert code == EXIT_OK
    csvs = list(tmp_path.glob("tomogram_*.csv"))
    joints = list(tmp_path.glob("joint_*.csv"))
    assert len(csvs) == 1 and len(joints) == 1
    header = json.loads(next(tmp_path.glob("tomogram_*.json")).read_text())
    # 161 x 181 grid and embedded slice-normalization metadata
    assert [a["count"] for a in header["axes"]] == [161, 181]
    assert header["metadata"]["max_slice_mass_deviation"] < 1e-3
    assert header["metadata"]["config"]["command"] == "tomogram"


def test_tomogram_coherent_peak(tmp_path, capsys):
    code = main(COARSE + [
        "--out", str(tmp_path), "tomogram",
        "--state", "coherent:re=0.70710678,im=0", "--rep", "symplectic",
    ])
    assert code == EXIT_OK
    from tomojoint.grids import load_gridfn

    grid = load_gridfn(next(tmp_path.glob("tomogram_*.csv")))
    mu = grid.axes[1].points
    nu = grid.axes[2].points
    imu = int(np.argmin(np.abs(mu - 1.0)))
    inu = int(np.argmin(np.abs(nu)))
    sl = grid.values[:, imu, inu]
    peak = grid.axes[0].points[int(np.argmax(sl))]
    assert abs(peak - 1.0) <= grid.axes[0].spacing + 1e-12


def test_expect_singular_one(tmp_path, capsys):
    code = main(COARSE + [
        "--json", "--out", str(tmp_path), "expect",
        "--op", "one", "--symbol", "singular", "--state", "fock:n=2",
    ])
    assert code == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert record["re"] == pytest.approx(1.0, abs=1e-2)
    assert record["config"]["command"] == "expect"


def test_expect_unsupported_combination(tmp_path, capsys):
    code = main([
        "--out", str(tmp_path), "expect",
        "--op", "q", "--symbol", "singular", "--state", "fock:n=0",
        "--rep", "optical", "--prior", "p2-default",
    ])
    assert code == EXIT_USAGE


def test_residual_requires_energy(tmp_path, capsys):
    code = main(COARSE + [
        "--out", str(tmp_path), "residual",
        "--check", "stationary", "--state", "fock:n=0",
    ])
    assert code == EXIT_USAGE


def test_residual_condition(tmp_path, capsys):
    code = main(COARSE + [
        "--json", "--out", str(tmp_path), "residual",
        "--check", "condition", "--state", "fock:n=0",
    ])
    assert code == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert record["relative"] < 5e-2


def test_evolve_writes_frames(tmp_path, capsys):
    code = main(COARSE + [
        "--out", str(tmp_path), "evolve",
        "--state", "coherent:re=0.7,im=0", "--dt", "0.01", "--steps", "4",
        "--snapshot-every", "2",
    ])
    assert code == EXIT_OK
    frames = sorted(tmp_path.glob("evolve_frame*.csv"))
    assert len(frames) == 2
    header = json.loads(frames[-1].with_suffix(".json").read_text())
    assert header["metadata"]["time"] == pytest.approx(0.04)
    assert header["metadata"]["total_mass"] == pytest.approx(1.0, abs=1e-2)


def test_evolve_unstable_dt_is_numeric_failure(tmp_path, capsys):
    code = main(COARSE + [
        "--out", str(tmp_path), "evolve",
        "--state", "fock:n=0", "--dt", "5.0", "--steps", "1",
    ])
    assert code == EXIT_NUMERIC


def test_reconstruct(tmp_path, capsys):
    code = main(COARSE + [
        "--json", "--out", str(tmp_path), "reconstruct", "--state", "fock:n=0",
    ])
    assert code == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert record["central_max_abs_error"] < 5e-3


def test_config_file_precedence(tmp_path, capsys):
    cfg_file = tmp_path / "run.json"
    cfg_file.write_text(json.dumps({"omega": 2.0, "state": "fock:n=0"}))
    code = main([
        "--config", str(cfg_file), "--omega", "3.0", "--json",
        "--out", str(tmp_path), "expect",
        "--op", "one", "--symbol", "regular",
        "--state", "coherent:re=0,im=0", "--rep", "optical",
        "--prior", "p2-default",
    ])
    assert code == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    # flag beats file, file beats default; the flag-provided state wins too
    assert record["config"]["omega"] == 3.0
    assert record["config"]["state"] == "coherent:re=0,im=0"


def test_unknown_config_key(tmp_path, capsys):
    cfg_file = tmp_path / "bad.json"
    cfg_file.write_text(json.dumps({"not_a_key": 1}))
    code = main(["--config", str(cfg_file), "verify", "--only", "3"])
    assert code == EXIT_USAGE


def test_determinism(tmp_path, capsys):
    args = [
        "--out", str(tmp_path), "tomogram",
        "--state", "fock:n=0", "--rep", "optical",
    ]
    assert main(args) == EXIT_OK
    first = {p.name: p.read_bytes() for p in tmp_path.glob("tomogram_*")}
    assert main(args) == EXIT_OK
    second = {p.name: p.read_bytes() for p in tmp_path.glob("tomogram_*")}
    assert first == second


def test_verify_single_criterion_json(tmp_path, capsys):
    code = main(["--json", "--out", str(tmp_path), "verify", "--only", "3"])
    assert code == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert record["passed"] is True
    assert len(record["notices"]) >= 2
    assert (tmp_path / "verify.json").exists()


def test_runconfig_round_trip():
    cfg = RunConfig(command="expect", omega=2.0, grids={"X": [-8, 8, 81]})
    clone = RunConfig(**json.loads(json.dumps(cfg.as_dict())))
    assert clone == cfg
