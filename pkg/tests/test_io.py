import numpy as np
import pytest

from toruswavelets import io
from toruswavelets.admissibility import ScaleQuadrature, lambda_spectrum
from toruswavelets.grids import (
    PanelQuadrature,
    fourier_coefficients,
    make_grid,
    random_bandlimited,
)
from toruswavelets import transform as tr
from toruswavelets.wavelets import tensor_dog


def test_signal_round_trip(tmp_path):
    sig = random_bandlimited(make_grid(6, 8), 2, 3, seed=0)
    path = io.write_signal(tmp_path / "sig.csv", sig)
    back = io.read_signal(path)
    assert back.grid == sig.grid
    assert np.max(np.abs(back.samples - sig.samples)) < 1e-15
    assert (tmp_path / "sig.csv.json").exists()


def test_fourier_table_round_trip(tmp_path):
    sig = random_bandlimited(make_grid(12, 12), 3, 2, seed=1)
    table = fourier_coefficients(sig, 3, 2)
    path = io.write_fourier_table(tmp_path / "table.csv", table)
    back = io.read_fourier_table(path)
    assert (back.l1, back.l2) == (3, 2)
    assert np.max(np.abs(back.coeffs - table.coeffs)) < 1e-15


def test_spectrum_export(tmp_path):
    spec = lambda_spectrum(tensor_dog(2.0), 2, 2, ScaleQuadrature(-2, 2, 4),
                           PanelQuadrature(16, 4))
    path = io.write_spectrum(tmp_path / "spec.csv", spec)
    text = path.read_text().splitlines()
    assert text[0] == "n1,n2,lambda"
    assert len(text) == 1 + 25


def test_coefficient_export_counts(tmp_path):
    grid = make_grid(6, 6)
    gamma = tensor_dog(2.0)
    params = tr.two_dilation_grid(grid, ScaleQuadrature(-1, 1, 2))
    psi = random_bandlimited(grid, 2, 2, seed=2)
    coeffs = tr.analyze(psi, gamma, params, 2, PanelQuadrature(16, 4))
    path = io.write_coefficients(tmp_path / "coeffs.csv", coeffs)
    lines = path.read_text().splitlines()
    assert lines[0] == "t1,t2,a1,a2,m,n,p,q,re,im"
    assert len(lines) == 1 + params.n_cells * 36


def test_reproducible_formatting(tmp_path):
    sig = random_bandlimited(make_grid(4, 4), 1, 1, seed=3)
    a = io.write_signal(tmp_path / "a.csv", sig).read_text()
    b = io.write_signal(tmp_path / "b.csv", sig).read_text()
    assert a == b


def test_scale_quad_json_round_trip():
    squad = ScaleQuadrature(-3.5, 2.0, 7, "gauss_panels")
    back = io.scale_quad_from_dict(io.scale_quad_to_dict(squad))
    assert back == squad


def test_frame_report_json(tmp_path):
    import json

    from toruswavelets.frames import BandLimit, DiagonalWavelet, bandlimited_frame_bounds

    report = bandlimited_frame_bounds(DiagonalWavelet.indicator(3), BandLimit(3, 3))
    path = io.write_frame_report(tmp_path / "frame.json", report)
    payload = json.loads(path.read_text())
    assert payload["tight"] is True
    assert payload["c"] == payload["C"] == 1.0
    assert len(payload["per_g"]) == 4
