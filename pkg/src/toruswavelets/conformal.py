"""Conformal dilations, translations and the modular action on torus signals.

The angle dilation is theta_a = 2*arctan(a*tan(theta/2)) with fixed points
0 and pi; its Radon-Nikodym derivative

    lambda(a, theta) = 2a / ((a^2-1)*cos(theta) + a^2 + 1)

makes the dilation operator unitary on L^2 of the torus:

    [D_{a1,a2} f](t1, t2)
        = sqrt(lambda(a1,t1) * lambda(a2,t2)) * f(dil(t1,1/a1), dil(t2,1/a2)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import (
    TorusGrid,
    TorusSignal,
    fourier_coefficients,
    evaluate_fourier,
    sample,
    wrap_angle,
)
from .modular import ModularMatrix, identity_matrix


def dilate_angle(theta, a: float):
    """Conformal dilation of an angle: 2*arctan(a*tan(theta/2)).

    theta = +/-pi is a fixed point; the value there is pi by continuity
    (pi is the representative of the seam in (-pi, pi]).
    """
    if a <= 0:
        raise ValueError(f"dilation parameter must be positive, got {a}")
    theta = np.asarray(theta, dtype=float)
    wrapped = wrap_angle(theta)
    # arctan2 form avoids the huge tan(theta/2) intermediate near the seam
    out = 2.0 * np.arctan2(a * np.sin(wrapped / 2.0), np.cos(wrapped / 2.0))
    out = np.where(np.abs(np.abs(wrapped) - np.pi) < 1e-14, np.pi, out)
    if out.ndim == 0:
        return float(out)
    return out


def multiplier(a: float, theta):
    """Radon-Nikodym derivative lambda(a, theta) = 2a/((a^2-1)cos(theta)+a^2+1).

    Evaluated as a / (a^2 cos^2(theta/2) + sin^2(theta/2)), which is the
    same quantity without the cancellation of 1 + cos(theta) at the seam.
    """
    if a <= 0:
        raise ValueError(f"dilation parameter must be positive, got {a}")
    theta = np.asarray(theta, dtype=float)
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    out = a / (a * a * c * c + s * s)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class AtomParams:
    """Translation/dilation (and optional modular) parameters of one atom."""

    theta1: float = 0.0
    theta2: float = 0.0
    a1: float = 1.0
    a2: float = 1.0
    mod: ModularMatrix | None = None

    def __post_init__(self):
        if self.a1 <= 0 or self.a2 <= 0:
            raise ValueError("dilations must be positive")
        object.__setattr__(self, "theta1", float(wrap_angle(self.theta1)))
        object.__setattr__(self, "theta2", float(wrap_angle(self.theta2)))

    @property
    def modular(self) -> ModularMatrix:
        return self.mod if self.mod is not None else identity_matrix()


def _interpolant(f: TorusSignal):
    """Trigonometric interpolant of a sampled signal (symmetric window)."""
    l1 = (f.grid.n1 - 1) // 2
    l2 = (f.grid.n2 - 1) // 2
    table = fourier_coefficients(f, l1, l2)
    return lambda t1, t2: evaluate_fourier(table, t1, t2)


def apply_dilation(f: TorusSignal, a1: float, a2: float, evaluate=None) -> TorusSignal:
    """Unitary dilation D_{a1,a2} of a sampled signal.

    Off-grid source values come from `evaluate` (a closed-form pointwise
    function of the original signal) when given, otherwise from the
    trigonometric interpolant of the samples.
    """
    if a1 <= 0 or a2 <= 0:
        raise ValueError("dilations must be positive")
    if evaluate is None:
        evaluate = _interpolant(f)
    m1, m2 = f.grid.meshgrid()
    amp = np.sqrt(multiplier(a1, m1) * multiplier(a2, m2))
    values = amp * np.asarray(evaluate(dilate_angle(m1, 1.0 / a1), dilate_angle(m2, 1.0 / a2)))
    return TorusSignal(f.grid, values)


def apply_translation(f: TorusSignal, t1: float, t2: float) -> TorusSignal:
    """Translate a signal: g(theta) = f(theta - t) with periodic wrapping.

    Translations by integer multiples of the grid step are exact cyclic
    shifts; other shifts go through the trigonometric interpolant.
    """
    grid = f.grid
    k1 = t1 / grid.step1
    k2 = t2 / grid.step2
    if np.isclose(k1, np.round(k1)) and np.isclose(k2, np.round(k2)):
        return TorusSignal(grid, np.roll(f.samples, (int(np.round(k1)), int(np.round(k2))), axis=(0, 1)))
    interp = _interpolant(f)
    m1, m2 = grid.meshgrid()
    return TorusSignal(grid, interp(wrap_angle(m1 - t1), wrap_angle(m2 - t2)))


def atom_function(gamma, p: AtomParams):
    """Pointwise evaluator of the wavelet atom with parameters p.

    The atom is U_translation . D_dilation applied to gamma, precomposed
    with M^{-1} when a modular matrix is present:

        atom(theta) = lam1^(1/2) * lam2^(1/2)
                      * gamma(dil(u1, 1/a1), dil(u2, 1/a2)),   u = M^{-1} theta - v.
    """
    mod = p.modular
    inv = mod.inverse()

    def evaluate(theta1, theta2):
        theta1 = np.asarray(theta1, dtype=float)
        theta2 = np.asarray(theta2, dtype=float)
        s1 = wrap_angle(inv.m * theta1 + inv.n * theta2)
        s2 = wrap_angle(inv.p * theta1 + inv.q * theta2)
        u1 = wrap_angle(s1 - p.theta1)
        u2 = wrap_angle(s2 - p.theta2)
        amp = np.sqrt(multiplier(p.a1, u1) * multiplier(p.a2, u2))
        return amp * np.asarray(gamma(dilate_angle(u1, 1.0 / p.a1), dilate_angle(u2, 1.0 / p.a2)))

    return evaluate


def wavelet_atom(gamma, p: AtomParams, grid: TorusGrid) -> TorusSignal:
    """Sample the atom gamma^{theta1,theta2}_{a1,a2} (optionally modular)."""
    return sample(atom_function(gamma, p), grid)


def apply_modular(f: TorusSignal, mat: ModularMatrix) -> TorusSignal:
    """Modular action f_M(theta) = f(M^{-1} theta), exact index permutation.

    The grid must be square (n1 = n2 = N) so that integer matrices map
    grid points to grid points.
    """
    grid = f.grid
    if grid.n1 != grid.n2:
        raise ValueError("modular action needs a square grid")
    n = grid.n1
    inv = mat.inverse()
    k1, k2 = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    src1 = np.mod(inv.m * k1 + inv.n * k2, n)
    src2 = np.mod(inv.p * k1 + inv.q * k2, n)
    return TorusSignal(grid, f.samples[src1, src2])


def lambda_half_integral(a: float) -> float:
    """Integral over theta of sqrt(lambda(1/a, theta)).

    Equals 4*K(1 - 1/a^2)/sqrt(a) with K the complete elliptic integral
    of the first kind (parameter convention m), evaluated here through
    the arithmetic-geometric mean: K(m) = pi / (2*AGM(1, sqrt(1-m))).
    With m = 1 - 1/a^2 this reduces to 2*pi / (sqrt(a) * AGM(1, 1/a)).
    """
    if a <= 0:
        raise ValueError(f"dilation parameter must be positive, got {a}")
    x, y = 1.0, 1.0 / a
    while abs(x - y) > 4e-16 * max(abs(x), abs(y)):
        x, y = 0.5 * (x + y), np.sqrt(x * y)
        if x == y:
            break
    return float(2.0 * np.pi / (np.sqrt(a) * x))
