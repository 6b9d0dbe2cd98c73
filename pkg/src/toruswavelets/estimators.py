"""Scikit-learn style transformers wrapping the wavelet engine.

The transforms are deterministic given their parameters: fit() computes
the admissibility spectrum and dual-frame scalings (the fitted state),
transform() maps signals to wavelet coefficients, inverse_transform()
reconstructs.  Signals are complex; rows of X are flattened (n1*n2)
grids, so the estimators compose with sklearn pipelines that tolerate
complex features.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import transform as engine
from .admissibility import ScaleQuadrature, lambda_spectrum
from .grids import PanelQuadrature, TorusGrid, TorusSignal
from .validation import check_coefficient_matrix, check_signal_array
from .wavelets import axisymmetric_dog, diagonal_dog, tensor_dog


def _build_wavelet(name: str, alpha: float, alpha2):
    if name == "dog1d_tensor":
        return tensor_dog(alpha, alpha2)
    if name == "dog_axisymmetric":
        return axisymmetric_dog(alpha)
    if name == "diagonal_dog":
        return diagonal_dog(alpha)
    raise ValueError(f"unknown wavelet {name!r}")


class TorusCWT(BaseEstimator, TransformerMixin):
    """Two-dilation continuous wavelet transform on the torus.

    Parameters
    ----------
    wavelet : str
        'dog1d_tensor' (default) or 'dog_axisymmetric'.
    alpha, alpha2 : float
        Shape parameters of the mother wavelet.
    grid_size : int
        Signals live on a (grid_size, grid_size) torus grid.
    window : int
        Band limit used by the Fourier-side analysis and reconstruction.
    u_min, u_max, nodes_per_unit : log-scale analysis grid a = e^u.
    theta_panels, theta_nodes : angular quadrature of the coefficient
        integrals.

    After fit(): `spectrum_` holds the reference admissibility spectrum,
    `dual_` the dual-frame scalings, `param_grid_` the analysis cells.
    """

    def __init__(self, wavelet="dog1d_tensor", alpha=2.0, alpha2=None, grid_size=12,
                 window=3, u_min=-4.0, u_max=4.0, nodes_per_unit=4,
                 theta_panels=48, theta_nodes=6):
        self.wavelet = wavelet
        self.alpha = alpha
        self.alpha2 = alpha2
        self.grid_size = grid_size
        self.window = window
        self.u_min = u_min
        self.u_max = u_max
        self.nodes_per_unit = nodes_per_unit
        self.theta_panels = theta_panels
        self.theta_nodes = theta_nodes

    def _check_is_fitted(self):
        if not hasattr(self, "dual_"):
            raise NotFittedError("this transformer is not fitted yet; call fit() first")

    def fit(self, X=None, y=None):
        if 2 * self.window >= self.grid_size:
            raise ValueError("window too large for the grid (need 2*window < grid_size)")
        self.grid_ = TorusGrid(self.grid_size, self.grid_size)
        self.wavelet_ = _build_wavelet(self.wavelet, self.alpha, self.alpha2)
        self.theta_quad_ = PanelQuadrature(self.theta_panels, self.theta_nodes)
        analysis = ScaleQuadrature(self.u_min, self.u_max, self.nodes_per_unit)
        reference = ScaleQuadrature(self.u_min - 2.0, self.u_max + 2.0,
                                    2 * self.nodes_per_unit)
        self.scale_quad_ = analysis
        self.spectrum_ = lambda_spectrum(self.wavelet_, self.window, self.window,
                                         reference, self.theta_quad_)
        self.dual_ = engine.dual_coefficients(self.spectrum_)
        self.param_grid_ = engine.two_dilation_grid(self.grid_, analysis)
        self.n_cells_ = self.param_grid_.n_cells
        return self

    def transform(self, X):
        self._check_is_fitted()
        batch = check_signal_array(X, self.grid_)
        rows = []
        for samples in batch:
            coeffs = engine.analyze(TorusSignal(self.grid_, samples), self.wavelet_,
                                    self.param_grid_, self.window, self.theta_quad_)
            rows.append(coeffs.values.ravel())
        return np.stack(rows)

    def inverse_transform(self, X):
        self._check_is_fitted()
        batch = check_coefficient_matrix(X, self.n_cells_, self.grid_)
        rows = []
        for values in batch:
            coeffs = engine.CwtCoefficients(self.param_grid_, values)
            rec = engine.synthesize(coeffs, self.wavelet_, self.spectrum_, self.theta_quad_)
            rows.append(rec.samples.reshape(-1))
        return np.stack(rows)

    def reconstruction_error(self, X):
        """Relative L2 round-trip error per sample."""
        self._check_is_fitted()
        batch = check_signal_array(X, self.grid_)
        errors = []
        for samples in batch:
            psi = TorusSignal(self.grid_, samples)
            rec = engine.reconstruct(psi, self.wavelet_, self.param_grid_,
                                     self.spectrum_, self.window, self.theta_quad_)
            errors.append(engine.relative_error(psi, rec))
        return np.array(errors)


class ModularCWT(BaseEstimator, TransformerMixin):
    """Single-dilation wavelet transform with modular (SL(2,Z)) cosets.

    Requires a diagonal wavelet ('diagonal_dog').  Cells are
    (scale, coset) pairs; see TorusCWT for the grid conventions.
    """

    def __init__(self, wavelet="diagonal_dog", alpha=10.0, grid_size=10, window=2,
                 u_min=-4.0, u_max=4.0, nodes_per_unit=4, coset_height=4,
                 coeff_box=12, theta_panels=48, theta_nodes=6):
        self.wavelet = wavelet
        self.alpha = alpha
        self.grid_size = grid_size
        self.window = window
        self.u_min = u_min
        self.u_max = u_max
        self.nodes_per_unit = nodes_per_unit
        self.coset_height = coset_height
        self.coeff_box = coeff_box
        self.theta_panels = theta_panels
        self.theta_nodes = theta_nodes

    def _check_is_fitted(self):
        if not hasattr(self, "dual_"):
            raise NotFittedError("this transformer is not fitted yet; call fit() first")

    def fit(self, X=None, y=None):
        if 2 * self.window >= self.grid_size:
            raise ValueError("window too large for the grid (need 2*window < grid_size)")
        self.grid_ = TorusGrid(self.grid_size, self.grid_size)
        self.wavelet_ = _build_wavelet(self.wavelet, self.alpha, None)
        if not self.wavelet_.diagonal:
            raise ValueError("modular analysis requires a diagonal wavelet")
        self.theta_quad_ = PanelQuadrature(self.theta_panels, self.theta_nodes)
        analysis = ScaleQuadrature(self.u_min, self.u_max, self.nodes_per_unit)
        reference = ScaleQuadrature(self.u_min - 2.0, self.u_max + 2.0,
                                    2 * self.nodes_per_unit)
        self.scale_quad_ = analysis
        self.spectrum_ = engine.modular_lambda_spectrum(
            self.wavelet_, self.window, self.window, reference, self.theta_quad_,
            coset_height=self.coset_height, box=self.coeff_box)
        self.dual_ = engine.dual_coefficients(self.spectrum_)
        self.param_grid_ = engine.modular_grid(self.grid_, analysis, self.coset_height)
        self.n_cells_ = self.param_grid_.n_cells
        return self

    def transform(self, X):
        self._check_is_fitted()
        batch = check_signal_array(X, self.grid_)
        rows = []
        for samples in batch:
            coeffs = engine.analyze_modular(TorusSignal(self.grid_, samples), self.wavelet_,
                                            self.param_grid_, self.window,
                                            self.theta_quad_, self.coeff_box)
            rows.append(coeffs.values.ravel())
        return np.stack(rows)

    def inverse_transform(self, X):
        self._check_is_fitted()
        n_scales = len(self.param_grid_.scales)
        n_cosets = len(self.param_grid_.cosets)
        X = np.asarray(X, dtype=complex)
        grid = self.grid_
        per_sample = n_scales * n_cosets * grid.n1 * grid.n2
        if X.ndim == 1 and X.size == per_sample:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != per_sample:
            raise ValueError(f"expected rows of {per_sample} coefficients")
        rows = []
        for flat in X:
            values = flat.reshape(n_scales, n_cosets, grid.n1, grid.n2)
            coeffs = engine.CwtCoefficients(self.param_grid_, values)
            rec = engine.synthesize_modular(coeffs, self.wavelet_, self.spectrum_,
                                            self.theta_quad_, self.coeff_box)
            rows.append(rec.samples.reshape(-1))
        return np.stack(rows)

    def reconstruction_error(self, X):
        self._check_is_fitted()
        batch = check_signal_array(X, self.grid_)
        errors = []
        for samples in batch:
            psi = TorusSignal(self.grid_, samples)
            rec = engine.reconstruct(psi, self.wavelet_, self.param_grid_,
                                     self.spectrum_, self.window, self.theta_quad_,
                                     self.coeff_box)
            errors.append(engine.relative_error(psi, rec))
        return np.array(errors)
