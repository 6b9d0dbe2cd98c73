"""Admissibility spectra and frame-bound scans.

The two-dilation admissibility spectrum of a wavelet gamma is

    Lambda_{n1,n2} = integral (da1/a1^2)(da2/a2^2) |ghat^{n1,n2}_{a1,a2}|^2,

where ghat are Fourier coefficients of the dilated wavelet, computed in
change-of-variables form (no interpolation):

    ghat^{n1,n2}_{a1,a2} = (1/2pi) * iint sqrt(lam(1/a1,t1)*lam(1/a2,t2))
                            * gamma(t1,t2) * exp(-i*(n1*dil(t1,a1)+n2*dil(t2,a2))) dt.

Scale integrals are truncated to a log-scale window a = e^u, u in
[u_min, u_max]; da/a^p = e^{-(p-1)u} du.  Uniform two-sided bounds of
Lambda over an index window are the empirical frame bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .conformal import dilate_angle, multiplier, atom_function, AtomParams
from .grids import FourierTable, PanelQuadrature, continuous_fourier, TWO_PI
from .modular import enumerate_cosets, index_action
from .wavelets import MotherWavelet, gamma_of


@dataclass(frozen=True)
class ScaleQuadrature:
    """Discretization of a scale integral on a log grid a = e^u."""

    u_min: float = -6.0
    u_max: float = 6.0
    nodes_per_unit: int = 24
    rule: str = "trapezoid"

    def __post_init__(self):
        if not self.u_min < self.u_max:
            raise ValueError("scale window must satisfy u_min < u_max")
        if self.nodes_per_unit < 1:
            raise ValueError("nodes_per_unit must be at least 1")
        if self.rule not in ("trapezoid", "gauss_panels"):
            raise ValueError(f"unknown rule {self.rule!r}")

    def log_nodes(self):
        """Nodes u and weights for integration in du."""
        span = self.u_max - self.u_min
        if self.rule == "trapezoid":
            count = max(2, int(round(span * self.nodes_per_unit)) + 1)
            u = np.linspace(self.u_min, self.u_max, count)
            w = np.full(count, span / (count - 1))
            w[0] *= 0.5
            w[-1] *= 0.5
            return u, w
        panels = max(1, int(np.ceil(span)))
        rule = PanelQuadrature(panels=panels, nodes=self.nodes_per_unit)
        return rule.rule(self.u_min, self.u_max)

    def measure_nodes(self, power: int):
        """Scales a and weights for integral of F(a) da/a^power."""
        u, w = self.log_nodes()
        return np.exp(u), w * np.exp(-(power - 1) * u)

    def refined(self, factor: int = 2) -> "ScaleQuadrature":
        return ScaleQuadrature(self.u_min, self.u_max, self.nodes_per_unit * factor, self.rule)

    def widened(self, extra: float) -> "ScaleQuadrature":
        return ScaleQuadrature(self.u_min - extra, self.u_max + extra, self.nodes_per_unit, self.rule)


@dataclass(frozen=True)
class LambdaSpectrum:
    """Admissibility integrals per Fourier index on a rectangular window."""

    l1: int
    l2: int
    values: np.ndarray
    kind: str = "two_dilation"
    quad: ScaleQuadrature = ScaleQuadrature()

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (2 * self.l1 + 1, 2 * self.l2 + 1):
            raise ValueError("values shape does not match window")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("spectrum values must be finite and nonnegative")
        object.__setattr__(self, "values", values)

    def value(self, n1: int, n2: int) -> float:
        if abs(n1) > self.l1 or abs(n2) > self.l2:
            raise IndexError(f"index ({n1}, {n2}) outside window")
        return float(self.values[n1 + self.l1, n2 + self.l2])

    def index_arrays(self):
        return np.arange(-self.l1, self.l1 + 1), np.arange(-self.l2, self.l2 + 1)


def frame_bound_scan(spectrum: LambdaSpectrum):
    """Empirical frame bounds: (c_hat, C_hat, argmin, argmax) over the window."""
    values = spectrum.values
    if values.size == 0:
        raise ValueError("empty spectrum")
    imin = np.unravel_index(np.argmin(values), values.shape)
    imax = np.unravel_index(np.argmax(values), values.shape)
    argmin = (int(imin[0] - spectrum.l1), int(imin[1] - spectrum.l2))
    argmax = (int(imax[0] - spectrum.l1), int(imax[1] - spectrum.l2))
    return float(values[imin]), float(values[imax]), argmin, argmax


# ----------------------------------------------------------------------
# Dilated Fourier coefficients (change-of-variables quadrature)

def _axis_kernel(pts, wts, a: float, n_idx):
    """Rows exp(-i*n*dil(theta,a)) * w * sqrt(lam(1/a, theta)) per index n."""
    lam_half = np.sqrt(multiplier(1.0 / a, pts))
    u = dilate_angle(pts, a)
    return np.exp(-1j * np.outer(np.atleast_1d(n_idx), u)) * (wts * lam_half)[None, :]


def _gamma_grid(gamma, pts):
    m1, m2 = np.meshgrid(pts, pts, indexing="ij")
    return np.asarray(gamma(m1, m2), dtype=complex)


def dilated_coefficient(gamma, n1: int, n2: int, a1: float, a2: float,
                        theta_quad: PanelQuadrature | None = None) -> complex:
    """Fourier coefficient of the dilated wavelet D_{a1,a2} gamma."""
    if a1 <= 0 or a2 <= 0:
        raise ValueError("dilations must be positive")
    quad = theta_quad or PanelQuadrature()
    pts, wts = quad.rule()
    if isinstance(gamma, MotherWavelet) and gamma.separable:
        f1, f2 = gamma.factors
        b1 = _axis_kernel(pts, wts, a1, n1)[0] @ np.asarray(f1(pts), dtype=complex)
        b2 = _axis_kernel(pts, wts, a2, n2)[0] @ np.asarray(f2(pts), dtype=complex)
        value = b1 * b2 / TWO_PI
    else:
        grid = _gamma_grid(gamma, pts)
        b1 = _axis_kernel(pts, wts, a1, n1)[0]
        b2 = _axis_kernel(pts, wts, a2, n2)[0]
        value = (b1 @ grid @ b2) / TWO_PI
    if not np.isfinite(value):
        raise ValueError("dilated coefficient quadrature produced a non-finite value")
    return complex(value)


def atom_coefficient(gamma, n1: int, n2: int, p: AtomParams,
                     theta_quad: PanelQuadrature | None = None) -> complex:
    """<phi_{n1,n2} | atom(p)> by direct quadrature of the atom itself.

    An independent evaluation path (no change of variables); used to
    cross-check dilated_coefficient and translation covariance.
    """
    quad = theta_quad or PanelQuadrature()
    pts, wts = quad.rule()
    atom = atom_function(gamma, p)
    m1, m2 = np.meshgrid(pts, pts, indexing="ij")
    values = np.asarray(atom(m1, m2), dtype=complex)
    phase = np.exp(-1j * (n1 * m1 + n2 * m2))
    return complex(np.einsum("i,ij,j->", wts, values * phase, wts) / TWO_PI)


def _separable_axis_table(factor, pts, wts, n_idx, a_values):
    """A[j, i] = integral lam^(1/2) * factor * exp(-i*n_i*theta_a_j) dtheta."""
    g = np.asarray(factor(pts), dtype=complex)
    out = np.empty((len(a_values), len(n_idx)), dtype=complex)
    for j, a in enumerate(a_values):
        out[j] = _axis_kernel(pts, wts, a, n_idx) @ g
    return out


def _atom_axis_table(factor, pts, wts, n_idx, a_values, shift: float):
    """Axis coefficients of the translated-then-dilated 1-D atom, direct path."""
    out = np.empty((len(a_values), len(n_idx)), dtype=complex)
    phases = np.exp(-1j * np.outer(np.atleast_1d(n_idx), pts))
    for j, a in enumerate(a_values):
        u = np.asarray(pts, dtype=float) - shift
        amp = np.sqrt(multiplier(a, u))
        atom = amp * np.asarray(factor(dilate_angle(u, 1.0 / a)), dtype=complex)
        out[j] = phases @ (wts * atom)
    return out


def lambda_spectrum(gamma, l1: int, l2: int | None = None,
                    scale_quad: ScaleQuadrature | None = None,
                    theta_quad: PanelQuadrature | None = None,
                    translation=None) -> LambdaSpectrum:
    """Two-dilation admissibility spectrum on the window |n1|<=l1, |n2|<=l2.

    Separable wavelets use the product factorization of the scale
    integral; other wavelets go through a per-index tensor quadrature.
    `translation` applies the (unitary) translation to the atoms first;
    the spectrum is unchanged up to quadrature error because the
    coefficient only gains a unimodular phase.
    """
    if l2 is None:
        l2 = l1
    squad = scale_quad or ScaleQuadrature()
    tquad = theta_quad or PanelQuadrature()
    pts, wts = tquad.rule()
    a_values, a_weights = squad.measure_nodes(power=2)
    n1_idx = np.arange(-l1, l1 + 1)
    n2_idx = np.arange(-l2, l2 + 1)

    if isinstance(gamma, MotherWavelet) and gamma.separable:
        f1, f2 = gamma.factors
        if translation is None:
            A1 = _separable_axis_table(f1, pts, wts, n1_idx, a_values)
            A2 = _separable_axis_table(f2, pts, wts, n2_idx, a_values)
        else:
            A1 = _atom_axis_table(f1, pts, wts, n1_idx, a_values, float(translation[0]))
            A2 = _atom_axis_table(f2, pts, wts, n2_idx, a_values, float(translation[1]))
        lam1 = a_weights @ (np.abs(A1) ** 2)
        lam2 = a_weights @ (np.abs(A2) ** 2)
        values = np.outer(lam1, lam2) / TWO_PI**2
        return LambdaSpectrum(l1, l2, values, "two_dilation", squad)

    if translation is not None:
        values = np.empty((2 * l1 + 1, 2 * l2 + 1))
        for i, n1 in enumerate(n1_idx):
            for j, n2 in enumerate(n2_idx):
                values[i, j] = lambda_value(gamma, int(n1), int(n2), squad, tquad, translation)
        return LambdaSpectrum(l1, l2, values, "two_dilation", squad)

    # blocked tensor contraction: kernels B[a, n, q], weight grid G[q1, q2],
    # half-transform W[a, n1, q2] = sum_q1 B G, then contract the second axis
    grid = _gamma_grid(gamma, pts)
    n_all = np.arange(-max(l1, l2), max(l1, l2) + 1)
    B = np.empty((len(a_values), len(n_all), len(pts)), dtype=complex)
    for j, a in enumerate(a_values):
        B[j] = _axis_kernel(pts, wts, a, n_all)
    offset = max(l1, l2)
    W = B.reshape(-1, len(pts)) @ grid  # (Na*Nn, Q)
    W = W.reshape(len(a_values), len(n_all), len(pts))
    B2_flat = B.reshape(-1, len(pts))
    values = np.empty((2 * l1 + 1, 2 * l2 + 1))
    for i, n1 in enumerate(n1_idx):
        block = W[:, n1 + offset, :] @ B2_flat.T / TWO_PI  # (Na, Na*Nn)
        block = np.abs(block.reshape(len(a_values), len(a_values), len(n_all))) ** 2
        lam = np.einsum("i,ijn,j->n", a_weights, block, a_weights)
        values[i] = lam[n2_idx + offset]
    return LambdaSpectrum(l1, l2, values, "two_dilation", squad)


def lambda_value(gamma, n1: int, n2: int,
                 scale_quad: ScaleQuadrature | None = None,
                 theta_quad: PanelQuadrature | None = None,
                 translation=None) -> float:
    """Single Lambda_{n1,n2} entry (works for non-separable wavelets)."""
    squad = scale_quad or ScaleQuadrature()
    tquad = theta_quad or PanelQuadrature()
    pts, wts = tquad.rule()
    a_values, a_weights = squad.measure_nodes(power=2)
    if isinstance(gamma, MotherWavelet) and gamma.separable:
        spectrum = lambda_spectrum(gamma, abs(n1), abs(n2), squad, tquad, translation)
        return spectrum.value(n1, n2)
    if translation is None:
        grid = _gamma_grid(gamma, pts)
        B1 = np.empty((len(a_values), len(pts)), dtype=complex)
        B2 = np.empty((len(a_values), len(pts)), dtype=complex)
        for j, a in enumerate(a_values):
            B1[j] = _axis_kernel(pts, wts, a, n1)[0]
            B2[j] = _axis_kernel(pts, wts, a, n2)[0]
        C = (B1 @ grid) @ B2.T / TWO_PI  # C[a1, a2]
    else:
        # direct-atom spot-check path; quadratic in the scale nodes
        t1, t2 = float(translation[0]), float(translation[1])
        C = np.empty((len(a_values), len(a_values)), dtype=complex)
        phase1 = np.exp(-1j * n1 * pts) * wts
        phase2 = np.exp(-1j * n2 * pts) * wts
        m1, m2 = np.meshgrid(pts, pts, indexing="ij")
        for i, a1 in enumerate(a_values):
            for j, a2 in enumerate(a_values):
                atom = atom_function(gamma, AtomParams(theta1=t1, theta2=t2, a1=a1, a2=a2))
                C[i, j] = np.einsum("i,ij,j->", phase1, np.asarray(atom(m1, m2), dtype=complex), phase2) / TWO_PI
        return float(np.einsum("i,ij,j->", a_weights, np.abs(C) ** 2, a_weights))
    return float(np.einsum("i,ij,j->", a_weights, np.abs(C) ** 2, a_weights))


# ----------------------------------------------------------------------
# Necessary (zero-mean) condition and quadrant support

@dataclass(frozen=True)
class NecessaryConditionReport:
    value: complex
    refinements: tuple
    diverging: bool


def necessary_condition(gamma, theta_quad: PanelQuadrature | None = None) -> complex:
    """Integral of the profile Gamma over the fundamental square."""
    quad = theta_quad or PanelQuadrature()
    profile = gamma_of(gamma) if isinstance(gamma, MotherWavelet) else gamma
    return TWO_PI * continuous_fourier(profile, 0.0, 0.0, quad)


def necessary_condition_report(gamma, theta_quad: PanelQuadrature | None = None,
                               levels: int = 3) -> NecessaryConditionReport:
    """Zero-mean check with a panel-refinement divergence probe.

    Profiles with a non-integrable endpoint singularity (e.g. a constant
    wavelet) produce values that keep growing as panels refine toward
    the seam; that trend is reported as `diverging`.
    """
    quad = theta_quad or PanelQuadrature()
    values = []
    for level in range(levels):
        refined = PanelQuadrature(panels=quad.panels * 2**level, nodes=quad.nodes)
        values.append(necessary_condition(gamma, refined))
    mags = [abs(v) for v in values]
    growing = all(m2 > 1.05 * m1 for m1, m2 in zip(mags, mags[1:]))
    diverging = growing and mags[-1] > 1e-3
    return NecessaryConditionReport(values[0], tuple(values), diverging)


def quadrant_support(gamma_hat: FourierTable, floor: float = 1e-10):
    """Booleans (Q1, Q2, Q3, Q4): strict-quadrant support of a table.

    Quadrants are counterclockwise, Q1 = (+,+); only entries with both
    indices nonzero count.
    """
    n1_idx, n2_idx = gamma_hat.index_arrays()
    mags = np.abs(gamma_hat.coeffs)
    pos1 = n1_idx > 0
    neg1 = n1_idx < 0
    pos2 = n2_idx > 0
    neg2 = n2_idx < 0

    def occupied(sel1, sel2):
        if not sel1.any() or not sel2.any():
            return False
        return bool(np.any(mags[np.ix_(sel1, sel2)] > floor))

    return (
        occupied(pos1, pos2),
        occupied(neg1, pos2),
        occupied(neg1, neg2),
        occupied(pos1, neg2),
    )


# ----------------------------------------------------------------------
# Small-scale approximation

def small_scale_approximation(gamma, n1: int, n2: int, a1: float, a2: float,
                              theta_quad: PanelQuadrature | None = None):
    """Exact dilated coefficient and its small-scale estimate.

    Returns (exact, approx) with approx = 2*sqrt(a1*a2) * Gamma_hat at
    the real indices (a1*n1, a2*n2), where Gamma_hat extends the torus
    Fourier integral of the profile to real frequencies.
    """
    quad = theta_quad or PanelQuadrature()
    exact = dilated_coefficient(gamma, n1, n2, a1, a2, quad)
    profile = gamma_of(gamma)
    approx = 2.0 * np.sqrt(a1 * a2) * continuous_fourier(profile, a1 * n1, a2 * n2, quad)
    return exact, approx


# ----------------------------------------------------------------------
# Modular (single-dilation + coset) admissibility

def dilated_coefficient_box(gamma, a: float, box: int,
                            theta_quad: PanelQuadrature | None = None) -> np.ndarray:
    """All coefficients ghat^{k1,k2}_{a,a} for |k1|,|k2| <= box, one scale."""
    quad = theta_quad or PanelQuadrature()
    pts, wts = quad.rule()
    grid = _gamma_grid(gamma, pts)
    ks = np.arange(-box, box + 1)
    B = _axis_kernel(pts, wts, a, ks)
    return (B @ grid @ B.T) / TWO_PI


def modular_coefficient_tables(gamma, a_values, box: int,
                               theta_quad: PanelQuadrature | None = None) -> np.ndarray:
    """Stack of coefficient boxes over the scale nodes, shape (Na, 2b+1, 2b+1)."""
    quad = theta_quad or PanelQuadrature()
    pts, wts = quad.rule()
    grid = _gamma_grid(gamma, pts)
    ks = np.arange(-box, box + 1)
    out = np.empty((len(a_values), len(ks), len(ks)), dtype=complex)
    for j, a in enumerate(a_values):
        B = _axis_kernel(pts, wts, a, ks)
        out[j] = (B @ grid @ B.T) / TWO_PI
    return out


def _box_lookup(tables: np.ndarray, box: int, k1: int, k2: int):
    """Per-scale coefficient column at (k1, k2); zeros outside the box."""
    if abs(k1) > box or abs(k2) > box:
        return np.zeros(tables.shape[0], dtype=complex)
    return tables[:, k1 + box, k2 + box]


def modular_lambda(gamma, n1: int, n2: int,
                   scale_quad: ScaleQuadrature | None = None,
                   theta_quad: PanelQuadrature | None = None,
                   coset_bound: int = 32,
                   mode: str = "representative",
                   box: int = 24,
                   tables: np.ndarray | None = None) -> float:
    """Modular admissibility integral Lambda~_{n1,n2} for a diagonal wavelet.

    mode='representative' keeps the single coset term that maps (n1,n2)
    to the positive diagonal point (g,g) (the term that carries the
    frame lower bound); it depends on the index pair only through g.
    mode='coset_sum' accumulates the truncated sum over all enumerated
    coset representatives.  Coefficients outside the precomputed index
    box are treated as zero (they are negligible for smooth wavelets).
    """
    if not (isinstance(gamma, MotherWavelet) and gamma.diagonal):
        raise ValueError("modular_lambda requires a diagonal wavelet")
    if coset_bound < 1:
        raise ValueError("coset_bound must be at least 1")
    squad = scale_quad or ScaleQuadrature()
    a_values, a_weights = squad.measure_nodes(power=3)
    if tables is None:
        tables = modular_coefficient_tables(gamma, a_values, box, theta_quad)

    if n1 == 0 and n2 == 0:
        column = _box_lookup(tables, box, 0, 0)
        return float(a_weights @ np.abs(column) ** 2)

    g = gcd(n1, n2)
    if mode == "representative":
        column = _box_lookup(tables, box, g, g)
        return float(a_weights @ np.abs(column) ** 2)
    if mode != "coset_sum":
        raise ValueError(f"unknown mode {mode!r}")
    total = 0.0
    for mat in enumerate_cosets(coset_bound):
        k1, k2 = index_action(n1, n2, mat)
        if abs(k1) > box or abs(k2) > box:
            continue
        column = _box_lookup(tables, box, k1, k2)
        total += float(a_weights @ np.abs(column) ** 2)
    return total


def admissibility_verdict(nc_value: complex, spectrum: LambdaSpectrum,
                          nc_tol: float = 1e-4, floor_ratio: float = 1e-6) -> bool:
    """Admissible iff the zero-mean check passes and the spectrum has no
    (relative) zeros on the scanned window."""
    c_hat, big_c, _, _ = frame_bound_scan(spectrum)
    return bool(abs(nc_value) < nc_tol and c_hat > floor_ratio * big_c)
