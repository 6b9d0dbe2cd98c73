"""File formats: signal/table CSVs, spectrum exports, manifests.

Numbers are written with 17 significant digits so runs reproduce
byte-for-byte given the same configuration and seed.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .admissibility import LambdaSpectrum, ScaleQuadrature
from .grids import FourierTable, TorusGrid, TorusSignal
from .transform import CwtCoefficients
from .modular import identity_matrix


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_signal(path, signal: TorusSignal):
    """Signal CSV `k1,k2,re,im` (row-major) plus a `.json` grid sidecar."""
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["k1", "k2", "re", "im"])
        for k1 in range(signal.grid.n1):
            for k2 in range(signal.grid.n2):
                v = signal.samples[k1, k2]
                writer.writerow([k1, k2, _fmt(v.real), _fmt(v.imag)])
    sidecar = path.with_suffix(path.suffix + ".json")
    sidecar.write_text(json.dumps({"n1": signal.grid.n1, "n2": signal.grid.n2}))
    return path


def read_signal(path) -> TorusSignal:
    path = Path(path)
    sidecar = path.with_suffix(path.suffix + ".json")
    meta = json.loads(sidecar.read_text())
    grid = TorusGrid(int(meta["n1"]), int(meta["n2"]))
    samples = np.zeros((grid.n1, grid.n2), dtype=complex)
    with path.open(newline="") as handle:
        for row in csv.DictReader(handle):
            samples[int(row["k1"]), int(row["k2"])] = float(row["re"]) + 1j * float(row["im"])
    return TorusSignal(grid, samples)


def write_fourier_table(path, table: FourierTable):
    """Coefficient CSV `n1,n2,re,im`."""
    path = Path(path)
    n1_idx, n2_idx = table.index_arrays()
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["n1", "n2", "re", "im"])
        for i, n1 in enumerate(n1_idx):
            for j, n2 in enumerate(n2_idx):
                v = table.coeffs[i, j]
                writer.writerow([int(n1), int(n2), _fmt(v.real), _fmt(v.imag)])
    return path


def read_fourier_table(path) -> FourierTable:
    rows = []
    with Path(path).open(newline="") as handle:
        for row in csv.DictReader(handle):
            rows.append((int(row["n1"]), int(row["n2"]),
                         float(row["re"]) + 1j * float(row["im"])))
    l1 = max(abs(r[0]) for r in rows)
    l2 = max(abs(r[1]) for r in rows)
    coeffs = np.zeros((2 * l1 + 1, 2 * l2 + 1), dtype=complex)
    for n1, n2, v in rows:
        coeffs[n1 + l1, n2 + l2] = v
    return FourierTable(l1, l2, coeffs)


def write_spectrum(path, spectrum: LambdaSpectrum):
    """Spectrum CSV `n1,n2,lambda`."""
    path = Path(path)
    n1_idx, n2_idx = spectrum.index_arrays()
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["n1", "n2", "lambda"])
        for i, n1 in enumerate(n1_idx):
            for j, n2 in enumerate(n2_idx):
                writer.writerow([int(n1), int(n2), _fmt(spectrum.values[i, j])])
    return path


def write_coefficients(path, coeffs: CwtCoefficients):
    """Coefficient CSV `t1,t2,a1,a2,m,n,p,q,re,im` over all cells."""
    path = Path(path)
    params = coeffs.params
    t1, t2 = params.grid.angles()
    ident = identity_matrix()
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t1", "t2", "a1", "a2", "m", "n", "p", "q", "re", "im"])

        def emit(a1, a2, mat, block):
            for k1 in range(params.grid.n1):
                for k2 in range(params.grid.n2):
                    v = block[k1, k2]
                    writer.writerow([
                        _fmt(t1[k1]), _fmt(t2[k2]), _fmt(a1), _fmt(a2),
                        mat.m, mat.n, mat.p, mat.q, _fmt(v.real), _fmt(v.imag),
                    ])

        if params.kind == "modular":
            for si, a in enumerate(params.scales):
                for mi, mat in enumerate(params.cosets):
                    emit(a, a, mat, coeffs.values[si, mi])
        else:
            for si, (a1, a2) in enumerate(params.scales):
                emit(a1, a2, ident, coeffs.values[si])
    return path


def frame_report_to_dict(report) -> dict:
    """Band-limited frame report as JSON payload {c, C, tight, per_g}."""
    return {
        "c": report.c,
        "C": report.C,
        "tight": report.tight,
        "frame": report.frame,
        "per_g": list(report.per_g),
    }


def write_frame_report(path, report):
    return write_json(path, frame_report_to_dict(report))


def scale_quad_to_dict(squad: ScaleQuadrature) -> dict:
    return {
        "u_min": squad.u_min,
        "u_max": squad.u_max,
        "nodes_per_unit": squad.nodes_per_unit,
        "rule": squad.rule,
    }


def scale_quad_from_dict(data: dict) -> ScaleQuadrature:
    return ScaleQuadrature(float(data["u_min"]), float(data["u_max"]),
                           int(data["nodes_per_unit"]), data.get("rule", "trapezoid"))


def write_json(path, payload: dict):
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return Path(path)


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())
