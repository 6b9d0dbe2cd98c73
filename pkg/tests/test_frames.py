import numpy as np
import pytest

from toruswavelets.conformal import AtomParams, wavelet_atom
from toruswavelets.frames import (
    BandLimit,
    DiagonalWavelet,
    bandlimited_frame_bounds,
    bessel_sum,
    bessel_sum_direct,
    diagonal_decay,
    frame_inequality_check,
    modular_atom_system,
    orbit_energy,
    orthonormal_orbit_basis_check,
    project_Vg,
)
from toruswavelets.grids import (
    FourierTable,
    PanelQuadrature,
    fourier_coefficients,
    make_grid,
    sample,
)
from toruswavelets.modular import coprime_pairs, orbit_representative
from toruswavelets.wavelets import diagonal_dog, dog_profile, fourier_diagonal_wavelet


def random_table(l1, l2, seed):
    rng = np.random.default_rng(seed)
    shape = (2 * l1 + 1, 2 * l2 + 1)
    return FourierTable(l1, l2, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def test_project_resolution_of_identity():
    table = random_table(5, 5, 0)
    total = np.zeros_like(table.coeffs)
    for g in range(6):
        total = total + project_Vg(table, g).coeffs
    assert np.array_equal(total, table.coeffs)


def test_projectors_disjoint():
    table = random_table(4, 4, 1)
    p2 = project_Vg(table, 2)
    p3 = project_Vg(p2, 3)
    assert np.max(np.abs(p3.coeffs)) == 0.0


def test_project_keeps_gcd_two():
    table = FourierTable(4, 4)
    table = table.with_entry(2, 4, 1.0).with_entry(3, 3, 1.0).with_entry(2, 2, 1.0)
    kept = project_Vg(table, 2)
    assert kept[2, 4] == 1.0 and kept[2, 2] == 1.0 and kept[3, 3] == 0.0


def test_orbit_energy_parseval():
    table = random_table(4, 4, 2)
    total = sum(orbit_energy(table, g) for g in range(5))
    assert total == pytest.approx(table.energy(), rel=1e-12)


def test_diagonal_wavelet_from_profile_matches_from_wavelet():
    eta = dog_profile(10.0)
    quad = PanelQuadrature(64, 8)
    via_profile = DiagonalWavelet.from_profile(eta, 6, quad)
    gamma = fourier_diagonal_wavelet(eta)
    via_wavelet = DiagonalWavelet.from_wavelet(gamma.evaluate, 6, quad)
    assert np.max(np.abs(via_profile.coeffs - via_wavelet.coeffs)) < 1e-10


def test_bessel_closed_vs_direct_two_sided():
    dw = DiagonalWavelet.from_profile(dog_profile(10.0), 8)
    psi = random_table(4, 4, 3)
    closed = bessel_sum(dw, psi)
    direct = bessel_sum_direct(dw, psi, coset_height=16)
    assert direct == pytest.approx(closed, rel=1e-12)


def test_bessel_closed_vs_direct_one_sided():
    dw = DiagonalWavelet.indicator(6)
    psi = random_table(5, 5, 4)
    closed = bessel_sum(dw, psi)
    direct = bessel_sum_direct(dw, psi, coset_height=16)
    assert direct == pytest.approx(closed, rel=1e-12)
    # one-sided data reduces the orbit weight to the single |d_g|^2 term
    assert all(dw.orbit_weight(g) == 1.0 for g in range(7))


def test_bessel_single_orbit_collapse():
    dw = DiagonalWavelet.from_coeffs({3: 0.7 + 0.1j, -3: 0.2})
    psi = FourierTable(4, 4).with_entry(3, 3, 2 * np.pi)
    value = bessel_sum(dw, psi)
    assert value == pytest.approx(dw.orbit_weight(3) * (2 * np.pi) ** 2, rel=1e-12)


def test_bessel_zero_on_missing_orbit():
    dw = DiagonalWavelet.from_coeffs({2: 1.0})
    psi = FourierTable(4, 4).with_entry(3, 3, 1.0).with_entry(3, -3, 2.0)
    assert bessel_sum(dw, psi) == 0.0


def test_frame_bounds_indicator_tight():
    dw = DiagonalWavelet.indicator(6)
    report = bandlimited_frame_bounds(dw, BandLimit(6, 6))
    assert report.frame and report.tight
    assert report.c == report.C == pytest.approx(1.0)


def test_frame_bounds_diagonal_dog():
    dw = DiagonalWavelet.from_wavelet(diagonal_dog(10.0).evaluate, 6, PanelQuadrature(64, 8))
    report = bandlimited_frame_bounds(dw, BandLimit(6, 6))
    assert report.frame and report.c > 0
    assert not report.tight
    assert len(report.per_g) == 7


def test_frame_bounds_missing_orbit():
    dw = DiagonalWavelet.from_coeffs({0: 1.0, 1: 1.0, 2: 1.0, 4: 1.0})
    report = bandlimited_frame_bounds(dw, BandLimit(4, 4))
    assert report.c == 0.0 and not report.frame


def test_frame_inequality_monte_carlo():
    dw = DiagonalWavelet.from_wavelet(diagonal_dog(10.0).evaluate, 6, PanelQuadrature(64, 8))
    report = frame_inequality_check(dw, BandLimit(6, 6), trials=100, seed=0)
    assert report.violations == 0
    assert report.max_lower_violation <= 1e-10
    assert report.max_upper_violation <= 1e-10


def test_frame_inequality_saturates_on_single_orbit():
    dw = DiagonalWavelet.from_coeffs({0: 0.5, 1: 1.0, -1: 0.3, 2: 0.8})
    psi = FourierTable(2, 2).with_entry(1, 1, 1.3).with_entry(1, -1, -0.4j)
    s = bessel_sum(dw, psi)
    assert s == pytest.approx(dw.orbit_weight(1) * psi.energy(), rel=1e-12)


def test_frame_inequality_zero_signal():
    dw = DiagonalWavelet.indicator(3)
    assert bessel_sum(dw, FourierTable(3, 3)) == 0.0


def test_orbit_basis_check_diagonal_start():
    report = orthonormal_orbit_basis_check(1, 1, height=2)
    assert report.duplicates == 0
    assert report.gram_is_kronecker
    assert set(report.points) == set(coprime_pairs(2))
    assert set(report.covered) == set(coprime_pairs(2))


def test_orbit_basis_check_gcd_scaling():
    report = orthonormal_orbit_basis_check(3, 3, height=2)
    assert report.duplicates == 0
    assert set(report.points) == {(3 * a, 3 * b) for a, b in coprime_pairs(2)}


def test_orbit_basis_check_rejects_zero():
    with pytest.raises(ValueError):
        orthonormal_orbit_basis_check(0, 0, 2)


def test_modular_atom_identity_matches_two_dilation():
    gamma = diagonal_dog(10.0)
    grid = make_grid(32, 32)
    from toruswavelets.modular import identity_matrix

    atom = modular_atom_system(gamma.evaluate, 1.4, identity_matrix(), 0.3, -0.7, grid)
    plain = wavelet_atom(gamma.evaluate, AtomParams(theta1=0.3, theta2=-0.7, a1=1.4, a2=1.4), grid)
    assert np.max(np.abs(atom.samples - plain.samples)) < 1e-14


def test_modular_atom_norm_preserved():
    gamma = diagonal_dog(10.0)
    grid = make_grid(128, 128)
    base = sample(gamma.evaluate, grid)
    mat = orbit_representative(4, 5)
    atom = modular_atom_system(gamma.evaluate, 1.0, mat, 0.0, 0.0, grid)
    assert abs(atom.norm() - base.norm()) < 1e-3 * base.norm()


def test_modular_atom_fourier_support_on_orbit_image():
    # an exactly Fourier-diagonal wavelet moves onto the orbit image of
    # the diagonal under the index action of M^{-1}
    eta = lambda s: np.exp(1j * s) + 0.4 * np.exp(2j * s)
    gamma = fourier_diagonal_wavelet(eta)
    grid = make_grid(32, 32)
    mat = orbit_representative(1, 0)
    atom = modular_atom_system(gamma.evaluate, 1.0, mat, 0.0, 0.0, grid)
    table = fourier_coefficients(atom, 10, 10)
    from toruswavelets.modular import index_action

    expected = {index_action(l, l, mat.inverse()) for l in (1, 2)}
    mags = np.abs(table.coeffs)
    hot = {
        (int(n1), int(n2))
        for n1 in range(-10, 11)
        for n2 in range(-10, 11)
        if mags[n1 + 10, n2 + 10] > 1e-8
    }
    assert hot == expected


def test_diagonal_decay_trend():
    gamma = diagonal_dog(10.0)
    decay = diagonal_decay(gamma.evaluate, [1, 16, 32, 64], PanelQuadrature(96, 8))
    assert decay[1] > decay[2] > decay[3]
    assert decay[3] < 1e-3 * decay[0]
