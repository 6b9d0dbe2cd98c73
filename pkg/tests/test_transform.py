import numpy as np
import pytest

from toruswavelets.admissibility import ScaleQuadrature, lambda_spectrum
from toruswavelets.conformal import AtomParams, apply_translation, wavelet_atom
from toruswavelets.grids import (
    PanelQuadrature,
    fourier_coefficients,
    inner_product,
    make_grid,
    random_bandlimited,
    sample,
)
from toruswavelets import transform as tr
from toruswavelets.transform import FrameError
from toruswavelets.wavelets import diagonal_dog, tensor_dog

TQ = PanelQuadrature(48, 6)
ANALYSIS = ScaleQuadrature(-4.0, 4.0, 6)
REFERENCE = ScaleQuadrature(-6.0, 6.0, 12)


@pytest.fixture(scope="module")
def dog():
    return tensor_dog(2.0)


@pytest.fixture(scope="module")
def diag():
    return diagonal_dog(10.0)


@pytest.fixture(scope="module")
def setup_two_dilation(dog):
    grid = make_grid(12, 12)
    params = tr.two_dilation_grid(grid, ANALYSIS)
    spectrum = lambda_spectrum(dog, 3, 3, REFERENCE, TQ)
    return grid, params, spectrum


def test_param_grid_shapes(setup_two_dilation):
    grid, params, _ = setup_two_dilation
    assert params.kind == "two_dilation"
    assert params.scales.shape[1] == 2
    assert params.n_cells == len(params.scales)
    with pytest.raises(ValueError):
        tr.ParamGrid(grid=grid, kind="two_dilation", scales=np.array([1.0, 2.0]),
                     scale_weights=np.array([1.0, 1.0]))


def test_modular_grid_requires_square():
    with pytest.raises(ValueError):
        tr.modular_grid(make_grid(8, 10), ANALYSIS, 2)


def test_analyze_linearity(dog, setup_two_dilation):
    grid, params, _ = setup_two_dilation
    f = random_bandlimited(grid, 3, 3, seed=0)
    g = random_bandlimited(grid, 3, 3, seed=1)
    mix_samples = 1.5j * f.samples - 0.5 * g.samples
    from toruswavelets.grids import TorusSignal

    mix = TorusSignal(grid, mix_samples)
    ca = tr.analyze(f, dog, params, 3, TQ).values
    cb = tr.analyze(g, dog, params, 3, TQ).values
    cm = tr.analyze(mix, dog, params, 3, TQ).values
    assert np.max(np.abs(cm - (1.5j * ca - 0.5 * cb))) < 1e-10 * np.max(np.abs(cm))


def test_analyze_atom_self_coefficient(dog):
    # the coefficient at the atom's own cell is the squared atom norm
    grid = make_grid(24, 24)
    squad = ScaleQuadrature(-0.7, 0.7, 2)
    params = tr.two_dilation_grid(grid, squad)
    a_nodes = np.exp(squad.log_nodes()[0])
    a1 = a2 = float(a_nodes[1])
    t1, t2 = grid.angles()
    k1, k2 = 3, 20
    atom = wavelet_atom(dog.evaluate, AtomParams(t1[k1], t2[k2], a1, a2), grid)
    coeffs = tr.analyze(atom, dog, params, 11, TQ)
    cell = int(np.flatnonzero((params.scales[:, 0] == a1) & (params.scales[:, 1] == a2))[0])
    norm2 = inner_product(atom, atom).real
    assert abs(coeffs.values[cell, k1, k2] - norm2) < 1e-3 * norm2


def test_analyze_fourier_path_oracle(dog, setup_two_dilation):
    from toruswavelets.admissibility import dilated_coefficient

    grid, params, _ = setup_two_dilation
    n1, n2 = 2, -1
    psi = sample(lambda a, b: np.exp(1j * (n1 * a + n2 * b)), grid)  # 2*pi*phi_{n1,n2}
    coeffs = tr.analyze(psi, dog, params, 3, TQ)
    t1, t2 = grid.angles()
    cell = 7
    a1, a2 = params.scales[cell]
    ghat = dilated_coefficient(dog, n1, n2, a1, a2, TQ)
    expected = 2 * np.pi * np.conj(ghat) * np.exp(1j * (n1 * t1[4] + n2 * t2[9]))
    assert abs(coeffs.values[cell, 4, 9] - expected) < 1e-6


def test_plancherel_identity(dog, setup_two_dilation):
    grid, params, _ = setup_two_dilation
    psi = random_bandlimited(grid, 3, 3, seed=2)
    coeffs = tr.analyze(psi, dog, params, 3, TQ)
    cell_norm = 1.0 / (grid.n1 * grid.n2)
    total = float(
        np.sum(params.scale_weights * np.sum(np.abs(coeffs.values) ** 2, axis=(1, 2)) * cell_norm)
    )
    quad_spec = lambda_spectrum(dog, 3, 3, ANALYSIS, TQ)
    table = fourier_coefficients(psi, 3, 3)
    expected = float(np.sum(quad_spec.values * np.abs(table.coeffs) ** 2))
    assert total == pytest.approx(expected, rel=1e-8)


def test_frame_sandwich(dog, setup_two_dilation):
    grid, params, _ = setup_two_dilation
    quad_spec = lambda_spectrum(dog, 3, 3, ANALYSIS, TQ)
    c_hat = quad_spec.values.min()
    big_c = quad_spec.values.max()
    cell_norm = 1.0 / (grid.n1 * grid.n2)
    for seed in range(100):
        psi = random_bandlimited(grid, 3, 3, seed=seed)
        coeffs = tr.analyze(psi, dog, params, 3, TQ)
        total = float(
            np.sum(params.scale_weights * np.sum(np.abs(coeffs.values) ** 2, axis=(1, 2)) * cell_norm)
        )
        norm2 = inner_product(psi, psi).real
        assert c_hat * norm2 <= total * (1 + 1e-10)
        assert total <= big_c * norm2 * (1 + 1e-10)


def test_translation_covariance(dog, setup_two_dilation):
    grid, params, _ = setup_two_dilation
    psi = random_bandlimited(grid, 3, 3, seed=3)
    moved = apply_translation(psi, 2 * grid.step1, grid.step2)
    ca = tr.analyze(psi, dog, params, 3, TQ).values
    cb = tr.analyze(moved, dog, params, 3, TQ).values
    rolled = np.roll(ca, (2, 1), axis=(1, 2))
    assert np.max(np.abs(cb - rolled)) < 1e-10 * np.max(np.abs(ca))


def test_dual_coefficients_refusal():
    from toruswavelets.admissibility import LambdaSpectrum

    values = np.ones((5, 5))
    values[0, 0] = 0.0
    spec = LambdaSpectrum(2, 2, values, "two_dilation", ANALYSIS)
    with pytest.raises(FrameError):
        tr.dual_coefficients(spec)
    values[0, 0] = 0.5
    spec_ok = LambdaSpectrum(2, 2, values, "two_dilation", ANALYSIS)
    scalings = tr.dual_coefficients(spec_ok)
    assert scalings[0, 0] == pytest.approx(2.0)


def test_dual_coefficients_trivial():
    from toruswavelets.admissibility import LambdaSpectrum

    spec = LambdaSpectrum(1, 1, np.ones((3, 3)), "two_dilation", ANALYSIS)
    assert np.allclose(tr.dual_coefficients(spec), 1.0)


def test_dual_coefficients_tensor_window_eight(dog):
    spec = lambda_spectrum(dog, 8, 8, ScaleQuadrature(-6, 6, 12), TQ)
    scalings = tr.dual_coefficients(spec)
    assert np.all(np.isfinite(scalings)) and np.all(scalings > 0)


def test_round_trip_and_refinement(dog, setup_two_dilation):
    grid, params, spectrum = setup_two_dilation
    psi = random_bandlimited(grid, 3, 3, seed=4)
    coeffs = tr.analyze(psi, dog, params, 3, TQ)
    rec = tr.synthesize(coeffs, dog, spectrum, TQ)
    err = tr.relative_error(psi, rec)
    assert err < 0.05
    fused = tr.reconstruct(psi, dog, params, spectrum, 3, TQ)
    assert tr.relative_error(rec, fused) < 1e-12
    fine = tr.two_dilation_grid(grid, ScaleQuadrature(-5.0, 5.0, 12))
    rec_fine = tr.reconstruct(psi, dog, fine, spectrum, 3, TQ)
    assert tr.relative_error(psi, rec_fine) < err


def test_zero_signal_round_trip(dog, setup_two_dilation):
    from toruswavelets.grids import TorusSignal

    grid, params, spectrum = setup_two_dilation
    zero = TorusSignal(grid, np.zeros((grid.n1, grid.n2)))
    coeffs = tr.analyze(zero, dog, params, 3, TQ)
    assert np.max(np.abs(coeffs.values)) == 0.0
    rec = tr.synthesize(coeffs, dog, spectrum, TQ)
    assert np.max(np.abs(rec.samples)) == 0.0


def test_synthesize_direct_cross_validation(dog):
    grid = make_grid(8, 8)
    squad = ScaleQuadrature(-1.0, 1.0, 2)
    params = tr.two_dilation_grid(grid, squad)
    spectrum = lambda_spectrum(dog, 2, 2, REFERENCE, TQ)
    psi = random_bandlimited(grid, 2, 2, seed=5)
    coeffs = tr.analyze(psi, dog, params, 2, TQ)
    fast = tr.synthesize(coeffs, dog, spectrum, TQ)
    slow = tr.synthesize_direct(coeffs, dog, spectrum, TQ)
    assert np.max(np.abs(fast.samples - slow.samples)) < 1e-10


def test_modular_round_trip(diag):
    grid = make_grid(10, 10)
    params = tr.modular_grid(grid, ScaleQuadrature(-6.0, 6.0, 8), coset_height=8)
    spectrum = tr.modular_lambda_spectrum(diag, 2, 2, ScaleQuadrature(-8.0, 8.0, 16), TQ,
                                          coset_height=8, box=16)
    psi = random_bandlimited(grid, 2, 2, seed=6)
    coeffs = tr.analyze_modular(psi, diag, params, 2, TQ, box=16)
    rec = tr.synthesize_modular(coeffs, diag, spectrum, TQ, box=16)
    err = tr.relative_error(psi, rec)
    assert err < 5e-4
    fused = tr.reconstruct(psi, diag, params, spectrum, 2, TQ, box=16)
    assert tr.relative_error(rec, fused) < 1e-12


def test_modular_analysis_direct_inner_product_oracle(diag):
    grid = make_grid(10, 10)
    params = tr.modular_grid(grid, ScaleQuadrature(-1.0, 1.0, 3), coset_height=2)
    psi = random_bandlimited(grid, 2, 2, seed=7)
    coeffs = tr.analyze_modular(psi, diag, params, 2, TQ, box=16)
    from toruswavelets.grids import inverse_fourier

    fine = make_grid(128, 128)
    psi_fine = inverse_fourier(fourier_coefficients(psi, 2, 2), fine)
    si, mi, k1, k2 = 1, 3, 2, 7
    t1, t2 = grid.angles()
    p = AtomParams(theta1=t1[k1], theta2=t2[k2], a1=params.scales[si],
                   a2=params.scales[si], mod=params.cosets[mi])
    atom = wavelet_atom(diag.evaluate, p, fine)
    direct = inner_product(atom, psi_fine)
    assert abs(coeffs.values[si, mi, k1, k2] - direct) < 1e-4 * abs(direct) + 1e-8


def test_modular_orbit_bookkeeping():
    # with a Fourier-diagonal wavelet at scales ~ 1, only cells whose coset
    # maps the signal's orbit onto the diagonal respond appreciably
    from toruswavelets.modular import index_action
    from toruswavelets.wavelets import fourier_diagonal_wavelet

    eta = lambda s: np.exp(1j * s) + 0.3 * np.exp(2j * s) + 0.1 * np.exp(-1j * s)
    gamma = fourier_diagonal_wavelet(eta)
    grid = make_grid(12, 12)
    params = tr.modular_grid(grid, ScaleQuadrature(-0.02, 0.02, 60), coset_height=3)
    psi = sample(lambda a, b: np.exp(1j * (2 * a + 1 * b)), grid)
    coeffs = tr.analyze_modular(psi, gamma, params, 3, TQ, box=16)
    per_coset = np.max(np.abs(coeffs.values), axis=(0, 2, 3))
    hits = {
        mi: index_action(2, 1, mat)
        for mi, mat in enumerate(params.cosets)
    }
    on = [mi for mi, k in hits.items() if k[0] == k[1]]
    off = [mi for mi, k in hits.items() if k[0] != k[1]]
    # off-orbit leakage is O(|a - 1|) from the +/-2% scale window
    assert per_coset[on].max() > 50 * per_coset[off].max()


def test_modular_zero_signal(diag):
    from toruswavelets.grids import TorusSignal

    grid = make_grid(10, 10)
    params = tr.modular_grid(grid, ScaleQuadrature(-1.0, 1.0, 2), coset_height=2)
    zero = TorusSignal(grid, np.zeros((10, 10)))
    coeffs = tr.analyze_modular(zero, diag, params, 2, TQ, box=8)
    assert np.max(np.abs(coeffs.values)) == 0.0


def test_modular_requires_diagonal(dog):
    grid = make_grid(10, 10)
    params = tr.modular_grid(grid, ScaleQuadrature(-1.0, 1.0, 2), coset_height=2)
    psi = random_bandlimited(grid, 2, 2, seed=8)
    with pytest.raises(ValueError):
        tr.analyze_modular(psi, dog, params, 2, TQ)


def test_window_guards(dog, setup_two_dilation):
    grid, params, spectrum = setup_two_dilation
    psi = random_bandlimited(grid, 3, 3, seed=9)
    with pytest.raises(ValueError):
        tr.analyze(psi, dog, params, window=6, theta_quad=TQ)
    other = random_bandlimited(make_grid(14, 14), 3, 3, seed=9)
    with pytest.raises(ValueError):
        tr.analyze(other, dog, params, 3, TQ)
