"""Mother wavelets on the torus: DoG families, stereographic lifts, profiles.

Plane wavelets are carried to the torus by inverse stereographic
projection per axis,

    [lift psi](t1, t2) = psi(2*tan(t1/2), 2*tan(t2/2))
                         / sqrt((1+cos t1)*(1+cos t2)),

with value 0 at the seam t = +/-pi for decaying psi.  The admissibility
profile of a wavelet gamma is

    Gamma(t1, t2) = gamma(t1, t2) / sqrt((1+cos t1)*(1+cos t2)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grids import wrap_angle

_SEAM_EPS = 1e-12


def dog_1d(alpha: float):
    """1-D difference of Gaussians x -> exp(-x^2) - exp(-x^2/alpha^2)/alpha."""
    if alpha <= 0:
        raise ValueError(f"shape parameter must be positive, got {alpha}")

    def psi(x):
        x = np.asarray(x, dtype=float)
        return np.exp(-(x**2)) - np.exp(-(x**2) / alpha**2) / alpha

    return psi


def dog_axisymmetric(alpha: float):
    """2-D axisymmetric DoG: exp(-r^2) - exp(-r^2/alpha^2)/alpha^2."""
    if alpha <= 0:
        raise ValueError(f"shape parameter must be positive, got {alpha}")

    def psi(x1, x2):
        r2 = np.asarray(x1, dtype=float) ** 2 + np.asarray(x2, dtype=float) ** 2
        return np.exp(-r2) - np.exp(-r2 / alpha**2) / alpha**2

    return psi


def _half_tangent(theta):
    """2*tan(theta/2) with the seam mapped to a huge finite value."""
    theta = np.asarray(theta, dtype=float)
    cos_half = np.cos(theta / 2.0)
    safe = np.where(np.abs(cos_half) < _SEAM_EPS, _SEAM_EPS, cos_half)
    return 2.0 * np.sin(theta / 2.0) / safe


def _one_plus_cos(theta):
    return 1.0 + np.cos(np.asarray(theta, dtype=float))


@dataclass(frozen=True)
class MotherWavelet:
    """Pointwise wavelet on the torus plus structural metadata.

    kind is one of 'dog1d_tensor', 'dog_axisymmetric', 'diagonal_dog',
    'fourier_diagonal' or 'custom'.  Separable wavelets carry their 1-D
    factors so downstream quadratures can use product formulas; diagonal
    wavelets carry the 1-D profile eta of Gamma(t1,t2) = eta(t1+t2).
    """

    kind: str
    evaluate: callable
    alpha: float = 0.0
    alpha2: float = 0.0
    factors: tuple = field(default=None)
    eta: callable = field(default=None)

    def __call__(self, theta1, theta2):
        return self.evaluate(theta1, theta2)

    @property
    def separable(self) -> bool:
        return self.factors is not None

    @property
    def diagonal(self) -> bool:
        return self.eta is not None


@dataclass(frozen=True)
class GammaProfile:
    """Admissibility profile Gamma = gamma / sqrt((1+cos t1)(1+cos t2))."""

    evaluate: callable
    factors: tuple = field(default=None)

    def __call__(self, theta1, theta2):
        return self.evaluate(theta1, theta2)


def _lift_1d(psi1d):
    def lifted(theta):
        theta = np.asarray(theta, dtype=float)
        denom = _one_plus_cos(theta)
        seam = denom < _SEAM_EPS
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            values = psi1d(_half_tangent(theta)) / np.sqrt(np.where(seam, 1.0, denom))
        return np.where(seam, 0.0, values)

    return lifted


def lift_to_torus(psi, kind: str = "custom", alpha: float = 0.0, factors1d=None) -> MotherWavelet:
    """Lift a decaying plane function to the torus by inverse stereographic
    projection; the value at the seam is the decay limit 0."""

    def evaluate(theta1, theta2):
        theta1 = np.asarray(theta1, dtype=float)
        theta2 = np.asarray(theta2, dtype=float)
        d1 = _one_plus_cos(theta1)
        d2 = _one_plus_cos(theta2)
        seam = (d1 < _SEAM_EPS) | (d2 < _SEAM_EPS)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            values = psi(_half_tangent(theta1), _half_tangent(theta2)) / np.sqrt(
                np.where(seam, 1.0, d1 * d2)
            )
        return np.where(seam, 0.0, values)

    factors = None
    if factors1d is not None:
        factors = tuple(_lift_1d(f) for f in factors1d)
    return MotherWavelet(kind=kind, evaluate=evaluate, alpha=alpha, factors=factors)


def tensor_dog(alpha: float, alpha2: float | None = None) -> MotherWavelet:
    """Lift of the separable DoG psi_alpha(x1) * psi_alpha2(x2)."""
    beta = alpha if alpha2 is None else alpha2
    f1, f2 = dog_1d(alpha), dog_1d(beta)
    wavelet = lift_to_torus(
        lambda x1, x2: f1(x1) * f2(x2),
        kind="dog1d_tensor",
        alpha=alpha,
        factors1d=(f1, f2),
    )
    return MotherWavelet(
        kind=wavelet.kind,
        evaluate=wavelet.evaluate,
        alpha=alpha,
        alpha2=beta,
        factors=wavelet.factors,
    )


def axisymmetric_dog(alpha: float) -> MotherWavelet:
    """Lift of the axisymmetric (non-separable) DoG."""
    return lift_to_torus(dog_axisymmetric(alpha), kind="dog_axisymmetric", alpha=alpha)


def gamma_of(gamma) -> GammaProfile:
    """Profile Gamma of a wavelet.

    Diagonal wavelets divide exactly: their profile is eta(t1 + t2)
    everywhere (including the seam, where the ratio is 0/0 with that
    limit).  For other wavelets the seam value is the decay limit 0.
    """
    if isinstance(gamma, MotherWavelet) and gamma.diagonal and gamma.kind != "fourier_diagonal":
        eta = gamma.eta

        def evaluate_diag(theta1, theta2):
            theta1 = np.asarray(theta1, dtype=float)
            theta2 = np.asarray(theta2, dtype=float)
            return np.asarray(eta(theta1 + theta2)) * np.ones_like(theta1 + theta2)

        return GammaProfile(evaluate=evaluate_diag)

    def evaluate(theta1, theta2):
        theta1 = np.asarray(theta1, dtype=float)
        theta2 = np.asarray(theta2, dtype=float)
        d1 = _one_plus_cos(theta1)
        d2 = _one_plus_cos(theta2)
        seam = (d1 < _SEAM_EPS) | (d2 < _SEAM_EPS)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            values = np.asarray(gamma(theta1, theta2)) / np.sqrt(np.where(seam, 1.0, d1 * d2))
        return np.where(seam, 0.0, values)

    factors = None
    if isinstance(gamma, MotherWavelet) and gamma.separable:
        def divide(f):
            def profile(theta):
                theta = np.asarray(theta, dtype=float)
                d = _one_plus_cos(theta)
                seam = d < _SEAM_EPS
                with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                    values = np.asarray(f(theta)) / np.sqrt(np.where(seam, 1.0, d))
                return np.where(seam, 0.0, values)

            return profile

        factors = tuple(divide(f) for f in gamma.factors)
    return GammaProfile(evaluate=evaluate, factors=factors)


def dog_profile(alpha: float):
    """Diagonal profile eta(s) = psi_alpha(2*tan(s/2)) / (1 + cos s)."""
    psi = dog_1d(alpha)

    def eta(s):
        s = wrap_angle(np.asarray(s, dtype=float))
        denom = _one_plus_cos(s)
        seam = denom < _SEAM_EPS
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            values = psi(_half_tangent(s)) / np.where(seam, 1.0, denom)
        return np.where(seam, 0.0, values)

    return eta


def diagonal_wavelet(eta, alpha: float = 0.0) -> MotherWavelet:
    """Wavelet with diagonal profile: gamma = sqrt((1+cos t1)(1+cos t2)) * eta(t1+t2)."""

    def evaluate(theta1, theta2):
        theta1 = np.asarray(theta1, dtype=float)
        theta2 = np.asarray(theta2, dtype=float)
        amp = np.sqrt(np.clip(_one_plus_cos(theta1) * _one_plus_cos(theta2), 0.0, None))
        return amp * np.asarray(eta(theta1 + theta2))

    return MotherWavelet(kind="diagonal_dog", evaluate=evaluate, alpha=alpha, eta=eta)


def diagonal_dog(alpha: float = 10.0) -> MotherWavelet:
    """The diagonal DoG wavelet (default alpha = 10)."""
    return diagonal_wavelet(dog_profile(alpha), alpha=alpha)


def fourier_diagonal_wavelet(eta, alpha: float = 0.0) -> MotherWavelet:
    """Wavelet gamma(t1, t2) = eta(t1 + t2), exactly diagonal in Fourier."""

    def evaluate(theta1, theta2):
        theta1 = np.asarray(theta1, dtype=float)
        theta2 = np.asarray(theta2, dtype=float)
        return np.asarray(eta(theta1 + theta2)) * np.ones_like(theta1 + theta2)

    return MotherWavelet(kind="fourier_diagonal", evaluate=evaluate, alpha=alpha, eta=eta)


_DEFAULT_ALPHA = {"dog1d_tensor": 2.0, "dog_axisymmetric": 2.0, "diagonal_dog": 10.0}


def wavelet_from_spec(spec: dict) -> MotherWavelet:
    """Build a wavelet from its JSON description {kind, alpha, alpha2?}."""
    kind = spec.get("kind")
    if kind not in _DEFAULT_ALPHA:
        raise ValueError(f"unknown wavelet kind {kind!r}")
    alpha = float(spec.get("alpha", _DEFAULT_ALPHA[kind]))
    if kind == "dog1d_tensor":
        alpha2 = spec.get("alpha2")
        return tensor_dog(alpha, None if alpha2 is None else float(alpha2))
    if kind == "dog_axisymmetric":
        return axisymmetric_dog(alpha)
    return diagonal_dog(alpha)
