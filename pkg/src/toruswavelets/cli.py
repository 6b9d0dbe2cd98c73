"""Command-line front end.

Subcommands: admissibility, analyze, synthesize, orbit, plotdata,
make-signal.  Exit codes: 0 ok, 1 mathematical refusal (no frame,
divergent condition, non-diagonal wavelet in modular mode), 2 usage or
configuration error.  Every run writes a manifest capturing the
configuration and seed, so outputs reproduce byte-for-byte.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import gcd
from pathlib import Path

import numpy as np

from . import io
from . import transform as engine
from .admissibility import (
    ScaleQuadrature,
    admissibility_verdict,
    frame_bound_scan,
    lambda_spectrum,
    necessary_condition_report,
)
from .conformal import apply_dilation, dilate_angle
from .grids import PanelQuadrature, TorusGrid, random_bandlimited, sample
from .frames import modular_atom_system
from .modular import identity_matrix, orbit_representative, index_action
from .transform import FrameError
from .wavelets import axisymmetric_dog, diagonal_dog, wavelet_from_spec

_DEFAULTS = {
    "wavelet": "dog1d_tensor",
    "alpha": None,
    "alpha2": None,
    "grid": 16,
    "window": 4,
    "coset_height": 8,
    "seed": 0,
    "u_min": -6.0,
    "u_max": 6.0,
    "nodes_per_unit": 12,
    "theta_panels": 48,
    "theta_nodes": 6,
    "box": 16,
    "modular": False,
}


class UsageError(Exception):
    pass


class RefusalError(Exception):
    pass


def _load_config(args) -> dict:
    config = dict(_DEFAULTS)
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise UsageError(f"config file {path} does not exist")
        try:
            loaded = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed config JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError("config JSON must be an object")
        config.update(loaded)
    for key in _DEFAULTS:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            config[key] = value
    return config


def _wavelet_from_config(config):
    spec = {"kind": config["wavelet"]}
    if config.get("alpha") is not None:
        spec["alpha"] = config["alpha"]
    if config.get("alpha2") is not None:
        spec["alpha2"] = config["alpha2"]
    try:
        return wavelet_from_spec(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _quads(config):
    tq = PanelQuadrature(int(config["theta_panels"]), int(config["theta_nodes"]))
    sq = ScaleQuadrature(float(config["u_min"]), float(config["u_max"]),
                         int(config["nodes_per_unit"]))
    ref = ScaleQuadrature(float(config["u_min"]) - 2.0, float(config["u_max"]) + 2.0,
                          2 * int(config["nodes_per_unit"]))
    return tq, sq, ref


def _out_dir(config, args) -> Path:
    out = Path(getattr(args, "out", None) or config.get("out") or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _manifest(config, extra=None) -> dict:
    payload = {key: config.get(key) for key in sorted(_DEFAULTS)}
    payload["scale_quad"] = {
        "u_min": config["u_min"], "u_max": config["u_max"],
        "nodes_per_unit": config["nodes_per_unit"], "rule": "trapezoid",
    }
    if extra:
        payload.update(extra)
    return payload


def cmd_admissibility(args) -> int:
    config = _load_config(args)
    gamma = _wavelet_from_config(config)
    tq, _, ref = _quads(config)
    out = _out_dir(config, args)
    window = int(config["window"])

    nc = necessary_condition_report(gamma, tq)
    spectrum = lambda_spectrum(gamma, window, window, ref, tq)
    c_hat, big_c, argmin, argmax = frame_bound_scan(spectrum)
    verdict = (not nc.diverging) and admissibility_verdict(nc.value, spectrum)

    io.write_spectrum(out / "spectrum.csv", spectrum)
    io.write_json(out / "admissibility.json", {
        "necessary_condition": [nc.value.real, nc.value.imag],
        "diverging": nc.diverging,
        "c_hat": c_hat,
        "C_hat": big_c,
        "argmin": list(argmin),
        "argmax": list(argmax),
        "verdict": bool(verdict),
    })
    io.write_json(out / "manifest.json", _manifest(config, {"command": "admissibility"}))
    print(f"necessary_condition={abs(nc.value):.3e} c_hat={c_hat:.6e} "
          f"C_hat={big_c:.6e} verdict={'admissible' if verdict else 'fail'}")
    if nc.diverging or not verdict:
        raise RefusalError("wavelet failed the admissibility checks")
    return 0


def cmd_analyze(args) -> int:
    config = _load_config(args)
    signal_path = Path(args.signal)
    if not signal_path.exists():
        raise UsageError(f"input signal {signal_path} does not exist")
    psi = io.read_signal(signal_path)
    gamma = _wavelet_from_config(config)
    tq, sq, ref = _quads(config)
    out = _out_dir(config, args)
    window = int(config["window"])
    box = int(config["box"])

    if config["modular"]:
        if not gamma.diagonal:
            raise RefusalError("modular analysis requires a diagonal wavelet")
        params = engine.modular_grid(psi.grid, sq, int(config["coset_height"]))
        spectrum = engine.modular_lambda_spectrum(
            gamma, window, window, ref, tq,
            coset_height=int(config["coset_height"]), box=box)
        engine.dual_coefficients(spectrum)
        coeffs = engine.analyze_modular(psi, gamma, params, window, tq, box)
    else:
        params = engine.two_dilation_grid(psi.grid, sq)
        spectrum = lambda_spectrum(gamma, window, window, ref, tq)
        engine.dual_coefficients(spectrum)
        coeffs = engine.analyze(psi, gamma, params, window, tq)

    io.write_coefficients(out / "coefficients.csv", coeffs)
    io.write_json(out / "manifest.json", _manifest(config, {
        "command": "analyze",
        "signal": str(signal_path),
        "grid_n1": psi.grid.n1,
        "grid_n2": psi.grid.n2,
    }))
    print(f"wrote {params.n_cells} cells x {psi.grid.n1}x{psi.grid.n2} translations")
    return 0


def _params_from_manifest(manifest, grid: TorusGrid):
    sq = io.scale_quad_from_dict(manifest["scale_quad"])
    if manifest["modular"]:
        return engine.modular_grid(grid, sq, int(manifest["coset_height"]))
    return engine.two_dilation_grid(grid, sq)


def cmd_synthesize(args) -> int:
    coeff_dir = Path(args.coeffs)
    manifest_path = coeff_dir / "manifest.json"
    coeff_path = coeff_dir / "coefficients.csv"
    if not manifest_path.exists() or not coeff_path.exists():
        raise UsageError(f"{coeff_dir} must contain coefficients.csv and manifest.json")
    manifest = io.read_json(manifest_path)
    config = dict(_DEFAULTS)
    config.update({k: manifest[k] for k in _DEFAULTS if k in manifest})
    gamma = _wavelet_from_config(config)
    tq, sq, ref = _quads(config)
    grid = TorusGrid(int(manifest["grid_n1"]), int(manifest["grid_n2"]))
    params = _params_from_manifest(manifest, grid)
    window = int(config["window"])
    box = int(config["box"])

    values = _read_coefficient_values(coeff_path, params)
    coeffs = engine.CwtCoefficients(params, values)
    if manifest["modular"]:
        spectrum = engine.modular_lambda_spectrum(
            gamma, window, window, ref, tq,
            coset_height=int(config["coset_height"]), box=box)
        rec = engine.synthesize_modular(coeffs, gamma, spectrum, tq, box)
    else:
        spectrum = lambda_spectrum(gamma, window, window, ref, tq)
        rec = engine.synthesize(coeffs, gamma, spectrum, tq)

    out = _out_dir(config, args)
    io.write_signal(out / "reconstruction.csv", rec)
    if args.original:
        original_path = Path(args.original)
        if not original_path.exists():
            raise UsageError(f"original signal {original_path} does not exist")
        psi = io.read_signal(original_path)
        err = engine.relative_error(psi, rec)
        print(f"relative_error={err:.6e}")
    else:
        print("wrote reconstruction.csv")
    return 0


def _read_coefficient_values(path, params):
    import csv as _csv

    grid = params.grid
    if params.kind == "modular":
        shape = (len(params.scales), len(params.cosets), grid.n1, grid.n2)
    else:
        shape = (len(params.scales), grid.n1, grid.n2)
    flat = np.empty(int(np.prod(shape)), dtype=complex)
    with Path(path).open(newline="") as handle:
        reader = _csv.DictReader(handle)
        count = 0
        for row in reader:
            flat[count] = float(row["re"]) + 1j * float(row["im"])
            count += 1
    if count != flat.size:
        raise UsageError(f"coefficient file has {count} rows, expected {flat.size}")
    return flat.reshape(shape)


def cmd_orbit(args) -> int:
    n1, n2 = int(args.n1), int(args.n2)
    if n1 == 0 and n2 == 0:
        raise UsageError("orbit of (0, 0) is trivial; provide a nonzero index pair")
    rep = orbit_representative(n1, n2)
    g = gcd(n1, n2)
    payload = {
        "g": g,
        "rep": rep.rows(),
        "check": list(index_action(n1, n2, rep)),
    }
    print(json.dumps(payload))
    return 0


def cmd_make_signal(args) -> int:
    config = _load_config(args)
    grid = TorusGrid(int(config["grid"]), int(config["grid"]))
    window = int(config["window"])
    if 2 * window >= grid.n1:
        raise UsageError("window too large for the grid")
    psi = random_bandlimited(grid, window, window, int(config["seed"]))
    path = Path(args.out_file)
    path.parent.mkdir(parents=True, exist_ok=True)
    io.write_signal(path, psi)
    print(f"wrote {path}")
    return 0


def cmd_plotdata(args) -> int:
    config = _load_config(args)
    out = _out_dir(config, args)

    theta = np.linspace(-np.pi, np.pi, 721)
    rows = ["a,theta,theta_a,linear"]
    for a in (0.1, 10.0):
        mapped = dilate_angle(theta, a)
        for t, m in zip(theta, mapped):
            rows.append(f"{a},{format(t, '.17g')},{format(m, '.17g')},{format(a * t, '.17g')}")
    (out / "theta_dilation.csv").write_text("\n".join(rows) + "\n")

    grid = TorusGrid(64, 64)
    axi = axisymmetric_dog(float(config.get("alpha") or 2.0))
    base = sample(axi.evaluate, grid)
    for a1, a2 in ((1.0, 1.0), (2.0, 1.0), (1.0, 2.0)):
        dilated = apply_dilation(base, a1, a2, evaluate=axi.evaluate)
        io.write_signal(out / f"dog_axisymmetric_a1_{a1:g}_a2_{a2:g}.csv", dilated)

    diag = diagonal_dog(10.0)
    mats = {
        "I": identity_matrix(),
        "M_1_0": orbit_representative(1, 0),
        "M_0_1": orbit_representative(0, 1),
        "M_4_5": orbit_representative(4, 5),
    }
    for name, mat in mats.items():
        signal = modular_atom_system(diag.evaluate, 1.0, mat, 0.0, 0.0, grid)
        io.write_signal(out / f"diagonal_dog_{name}.csv", signal)
    io.write_json(out / "manifest.json", _manifest(config, {"command": "plotdata"}))
    print(f"wrote plot data to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toruscwt",
        description="Continuous wavelet analysis on the 2-torus",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON config file; flags override its entries")
        p.add_argument("--wavelet", help="dog1d_tensor | dog_axisymmetric | diagonal_dog")
        p.add_argument("--alpha", type=float)
        p.add_argument("--alpha2", type=float)
        p.add_argument("--grid", type=int, help="samples per axis")
        p.add_argument("--window", type=int, help="Fourier index window")
        p.add_argument("--coset-height", dest="coset_height", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--u-min", dest="u_min", type=float)
        p.add_argument("--u-max", dest="u_max", type=float)
        p.add_argument("--nodes-per-unit", dest="nodes_per_unit", type=int)
        p.add_argument("--theta-panels", dest="theta_panels", type=int)
        p.add_argument("--theta-nodes", dest="theta_nodes", type=int)
        p.add_argument("--box", type=int, help="modular coefficient index box")
        p.add_argument("--out", help="output directory")

    p = sub.add_parser("admissibility", help="spectrum scan and verdict")
    add_common(p)
    p.set_defaults(func=cmd_admissibility)

    p = sub.add_parser("analyze", help="forward wavelet transform of a signal file")
    add_common(p)
    p.add_argument("--signal", required=True, help="input signal CSV (with .json sidecar)")
    p.add_argument("--modular", action="store_true", help="modular parameter space")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synthesize", help="reconstruct from an analyze output directory")
    p.add_argument("--coeffs", required=True, help="directory from a previous analyze run")
    p.add_argument("--original", help="original signal CSV to report the round-trip error")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("orbit", help="gcd orbit representative of an index pair")
    p.add_argument("n1", type=int)
    p.add_argument("n2", type=int)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("make-signal", help="seeded random band-limited signal file")
    add_common(p)
    p.add_argument("out_file", help="output CSV path")
    p.set_defaults(func=cmd_make_signal)

    p = sub.add_parser("plotdata", help="dilation curves and example wavelet grids")
    add_common(p)
    p.set_defaults(func=cmd_plotdata)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RefusalError, FrameError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
