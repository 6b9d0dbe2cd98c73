import json

import numpy as np

from toruswavelets import io
from toruswavelets.cli import main
from toruswavelets.modular import ModularMatrix, index_action


def run(argv):
    return main(argv)


def test_orbit_command(capsys):
    assert run(["orbit", "4", "5"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["g"] == 1
    assert payload["check"] == [1, 1]
    mat = ModularMatrix(*[payload["rep"][0][0], payload["rep"][0][1],
                          payload["rep"][1][0], payload["rep"][1][1]])
    assert index_action(4, 5, mat) == (1, 1)


def test_orbit_gcd_two(capsys):
    assert run(["orbit", "6", "4"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["g"] == 2
    assert payload["check"] == [2, 2]


def test_orbit_rejects_zero(capsys):
    assert run(["orbit", "0", "0"]) == 2


def test_make_signal_and_round_trip(tmp_path, capsys):
    signal = tmp_path / "signal.csv"
    assert run(["make-signal", "--grid", "12", "--window", "3", "--seed", "1",
                str(signal)]) == 0
    out = tmp_path / "run"
    assert run([
        "analyze", "--signal", str(signal), "--out", str(out),
        "--grid", "12", "--window", "3",
        "--u-min", "-5", "--u-max", "5", "--nodes-per-unit", "6",
        "--theta-panels", "32", "--theta-nodes", "6",
    ]) == 0
    assert (out / "coefficients.csv").exists()
    assert (out / "manifest.json").exists()
    capsys.readouterr()
    rec_dir = tmp_path / "rec"
    assert run(["synthesize", "--coeffs", str(out), "--original", str(signal),
                "--out", str(rec_dir)]) == 0
    printed = capsys.readouterr().out
    assert "relative_error=" in printed
    err = float(printed.strip().split("=")[1])
    assert err < 1e-2
    assert (rec_dir / "reconstruction.csv").exists()


def test_analyze_missing_signal(tmp_path):
    assert run(["analyze", "--signal", str(tmp_path / "missing.csv")]) == 2


def test_analyze_modular_requires_diagonal(tmp_path):
    signal = tmp_path / "signal.csv"
    run(["make-signal", "--grid", "10", "--window", "2", str(signal)])
    code = run(["analyze", "--signal", str(signal), "--modular",
                "--wavelet", "dog1d_tensor", "--out", str(tmp_path / "o")])
    assert code == 1


def test_admissibility_verdict_pass(tmp_path, capsys):
    out = tmp_path / "adm"
    code = run([
        "admissibility", "--wavelet", "dog1d_tensor", "--alpha", "2",
        "--window", "3", "--out", str(out),
        "--u-min", "-5", "--u-max", "5", "--nodes-per-unit", "8",
        "--theta-panels", "32", "--theta-nodes", "6",
    ])
    assert code == 0
    report = json.loads((out / "admissibility.json").read_text())
    assert report["verdict"] is True
    assert abs(complex(*report["necessary_condition"])) < 1e-4
    assert (out / "spectrum.csv").exists()


def test_admissibility_zero_wavelet_fails(tmp_path):
    # alpha = 1 makes the difference of Gaussians identically zero
    code = run([
        "admissibility", "--wavelet", "dog1d_tensor", "--alpha", "1",
        "--window", "2", "--out", str(tmp_path / "zero"),
        "--u-min", "-3", "--u-max", "3", "--nodes-per-unit", "4",
        "--theta-panels", "16", "--theta-nodes", "4",
    ])
    assert code == 1


def test_malformed_config(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["admissibility", "--config", str(bad)]) == 2


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "wavelet": "dog1d_tensor", "alpha": 2.0, "window": 2,
        "u_min": -4, "u_max": 4, "nodes_per_unit": 6,
        "theta_panels": 24, "theta_nodes": 4,
    }))
    out = tmp_path / "cfgout"
    assert run(["admissibility", "--config", str(cfg), "--out", str(out)]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["window"] == 2


def test_plotdata_outputs(tmp_path):
    out = tmp_path / "plots"
    assert run(["plotdata", "--out", str(out)]) == 0
    curves = (out / "theta_dilation.csv").read_text().splitlines()
    assert curves[0] == "a,theta,theta_a,linear"
    # theta_a = a*theta + (a - a^3) theta^3/12 + ..., so the a=0.1 curve sits
    # above the linear one near 0 and the a=10 curve below
    data = np.array([[float(v) for v in line.split(",")] for line in curves[1:]])
    small = data[data[:, 0] == 0.1]
    big = data[data[:, 0] == 10.0]
    at = lambda rows, t: rows[np.abs(rows[:, 1] - t).argmin()]
    assert at(small, 1.0)[2] > at(small, 1.0)[3]
    assert at(big, 0.2)[2] < at(big, 0.2)[3]
    ident = at(small, 0.0)
    assert abs(ident[2]) < 1e-12
    for name in ("dog_axisymmetric_a1_1_a2_1.csv", "dog_axisymmetric_a1_2_a2_1.csv",
                 "dog_axisymmetric_a1_1_a2_2.csv", "diagonal_dog_I.csv",
                 "diagonal_dog_M_1_0.csv", "diagonal_dog_M_0_1.csv",
                 "diagonal_dog_M_4_5.csv"):
        assert (out / name).exists()


def test_plotdata_modular_images_are_permutations(tmp_path):
    out = tmp_path / "plots2"
    run(["plotdata", "--out", str(out)])
    base = io.read_signal(out / "diagonal_dog_I.csv")
    moved = io.read_signal(out / "diagonal_dog_M_4_5.csv")
    a = np.sort_complex(np.round(base.samples.ravel(), 10) + 0j)
    b = np.sort_complex(np.round(moved.samples.ravel(), 10) + 0j)
    assert np.array_equal(a, b)
