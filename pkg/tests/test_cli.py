"""End-to-end command line runs against temp directories."""

import csv
import json

import pytest

from nctorus import cli


def run_cli(tmp_path, name, config, *extra):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(config))
    out = tmp_path / "out"
    code = cli.main([name, "--config", str(cfg), "--out", str(out), *extra])
    report_path = out / f"{name}_report.json"
    report = json.loads(report_path.read_text()) if report_path.exists() else None
    return code, out, report


ROTATION = {
    "alpha": 0.30901699437494745,
    "truncation": {"K": 8, "M": 8, "G": 128},
    "seed": 7,
}

BENCH = {
    "diffeo": {"alpha": 0.30901699437494745,
               "conjugator": {"sin": [0.04774648292756861], "cos": []}},
    "truncation": {"K": 8, "M": 8, "G": 128},
    "seed": 7,
}


def read_csv(path):
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))


def test_star_command_writes_product(tmp_path):
    code, out, report = run_cli(tmp_path, "star", ROTATION)
    assert code == 0
    payload = json.loads((out / "star_product.json").read_text())
    assert payload["alpha"] == ROTATION["alpha"]
    assert report["config_echo"]["truncation"]["K"] == 8
    assert "tolerances" in report


def test_represent_command_reports_norms(tmp_path):
    code, out, report = run_cli(tmp_path, "represent", BENCH)
    assert code == 0
    rows = read_csv(out / "represent_terms.csv")
    assert {"shift", "n", "mode", "re", "im"} <= set(rows[0])
    assert report["vacuum_image_norm"] > 0.0


def test_fourier_command_emits_tables(tmp_path):
    code, out, report = run_cli(tmp_path, "fourier", BENCH)
    assert code == 0
    for name in ("fourier_hat.csv", "fourier_paren.csv",
                 "riemann_lebesgue.csv"):
        assert (out / name).exists(), name


def test_fejer_errors_strictly_decrease(tmp_path):
    code, out, report = run_cli(tmp_path, "fejer", BENCH)
    assert code == 0
    rows = read_csv(out / "fejer_convergence.csv")
    errs = [float(r["l2_error"]) for r in rows]
    assert all(a > b for a, b in zip(errs, errs[1:]))


def test_abel_errors_strictly_decrease(tmp_path):
    code, out, report = run_cli(tmp_path, "abel", BENCH)
    assert code == 0
    rows = read_csv(out / "abel_convergence.csv")
    errs = [float(r["l2_error"]) for r in rows]
    assert all(a > b for a, b in zip(errs, errs[1:]))


def test_dirac_rotation_closed_forms_hold(tmp_path):
    config = dict(ROTATION)
    config["dirac"] = {"etas": [0.5], "master_radius": 4}
    code, out, report = run_cli(tmp_path, "dirac", config)
    assert code == 0
    rows = read_csv(out / "dirac_elements.csv")
    assert rows, "element table must not be empty"
    assert max(float(r["deviation"]) for r in rows) <= 1e-12


def test_growth_command(tmp_path):
    code, out, report = run_cli(tmp_path, "growth", BENCH)
    assert code == 0
    rows = read_csv(out / "growth.csv")
    gammas = {int(r["n"]): float(r["gamma"]) for r in rows}
    assert gammas[0] == 1.0
    assert abs(gammas[1] - 1.7827124086389334) < 1e-9


def test_verify_rotation_passes(tmp_path):
    code, out, report = run_cli(tmp_path, "verify", ROTATION)
    assert code == 0
    rows = read_csv(out / "verify.csv")
    assert rows and all(int(r["passed"]) == 1 for r in rows)


def test_verify_is_deterministic(tmp_path):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(ROTATION))
    outputs = []
    for tag in ("a", "b"):
        out = tmp_path / tag
        assert cli.main(["verify", "--config", str(cfg),
                         "--out", str(out)]) == 0
        outputs.append(((out / "verify.csv").read_bytes(),
                        (out / "verify_report.json").read_bytes()))
    assert outputs[0] == outputs[1]


def test_tolerance_failure_exits_two(tmp_path):
    code, out, report = run_cli(tmp_path, "fourier", BENCH,
                                "--tol-scale", "1e-20")
    assert code == 2
    assert report["failures"]


def test_bad_config_exits_one(tmp_path):
    cfg = tmp_path / "broken.json"
    cfg.write_text("{not json")
    assert cli.main(["star", "--config", str(cfg),
                     "--out", str(tmp_path / "o")]) == 1
    missing = tmp_path / "nope.json"
    assert cli.main(["star", "--config", str(missing),
                     "--out", str(tmp_path / "o2")]) == 1


def test_alpha_zero_requires_classical_flag(tmp_path):
    bad = {"alpha": 0.0, "truncation": {"K": 4, "M": 4, "G": 64}}
    code, _, _ = run_cli(tmp_path, "star", bad)
    assert code == 1
    good = dict(bad)
    good["classical_mode"] = True
    code, _, _ = run_cli(tmp_path, "star", good)
    assert code == 0


def test_threads_flag_and_env(tmp_path, monkeypatch):
    config = dict(ROTATION)
    config["dirac"] = {"etas": [0.0], "master_radius": 2}
    code, _, _ = run_cli(tmp_path, "dirac", config, "--threads", "2")
    assert code == 0
    monkeypatch.setenv("NCTORUS_THREADS", "2")
    code, _, _ = run_cli(tmp_path, "dirac", config)
    assert code == 0


def test_unknown_command_exits_nonzero(capsys):
    # argparse signals usage errors through SystemExit
    with pytest.raises(SystemExit) as info:
        cli.main(["frobnicate"])
    assert info.value.code != 0
