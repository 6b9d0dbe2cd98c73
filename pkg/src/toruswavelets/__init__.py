"""Continuous wavelet analysis on the 2-torus.

Conformal dilations and translations generate wavelet atoms from DoG
mother wavelets lifted by inverse stereographic projection; their
admissibility spectra certify (empirical) frame bounds and back a
dual-frame reconstruction.  A single-dilation variant regains the frame
property on band-limited subspaces by adding SL(2,Z) modular cosets to
the parameter space.
"""

from .grids import (
    FourierTable,
    PanelQuadrature,
    TorusGrid,
    TorusSignal,
    continuous_fourier,
    fourier_coefficients,
    inner_product,
    inverse_fourier,
    make_grid,
    random_bandlimited,
    sample,
    wrap_angle,
)
from .conformal import (
    AtomParams,
    apply_dilation,
    apply_modular,
    apply_translation,
    dilate_angle,
    lambda_half_integral,
    multiplier,
    wavelet_atom,
)
from .wavelets import (
    GammaProfile,
    MotherWavelet,
    axisymmetric_dog,
    diagonal_dog,
    diagonal_wavelet,
    dog_1d,
    dog_axisymmetric,
    dog_profile,
    fourier_diagonal_wavelet,
    gamma_of,
    lift_to_torus,
    tensor_dog,
    wavelet_from_spec,
)
from .modular import (
    ModularMatrix,
    OrbitLabel,
    enumerate_cosets,
    extended_gcd,
    identity_matrix,
    index_action,
    label_to_index,
    mod_det,
    mod_inv,
    mod_mul,
    orbit_label,
    orbit_representative,
    stabilizer_power,
)
from .admissibility import (
    LambdaSpectrum,
    ScaleQuadrature,
    admissibility_verdict,
    dilated_coefficient,
    frame_bound_scan,
    lambda_spectrum,
    lambda_value,
    modular_lambda,
    necessary_condition,
    necessary_condition_report,
    quadrant_support,
    small_scale_approximation,
)
from .frames import (
    BandLimit,
    DiagonalWavelet,
    ModularFrameReport,
    bandlimited_frame_bounds,
    bessel_sum,
    bessel_sum_direct,
    frame_inequality_check,
    modular_atom_system,
    orthonormal_orbit_basis_check,
    project_Vg,
)
from .transform import (
    CwtCoefficients,
    FrameError,
    ParamGrid,
    analyze,
    analyze_modular,
    dual_coefficients,
    modular_grid,
    modular_lambda_spectrum,
    reconstruct,
    relative_error,
    synthesize,
    synthesize_direct,
    synthesize_modular,
    two_dilation_grid,
)
from .estimators import ModularCWT, TorusCWT

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
