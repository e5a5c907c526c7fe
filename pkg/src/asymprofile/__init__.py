"""Fourier-multiplier evolution and Gauss-profile verification for heat and damped wave equations."""

__version__ = "0.1.0"

from .analysis import (
    DecayFit,
    DecompositionTerms,
    compute_L,
    compute_M,
    data_norm,
    decay_fit,
    fitted_constant,
    gauss_l2_norm,
    high_decomposition,
    low_decomposition,
    maximize_L,
    modulus_identity_error,
    theorem_ratio,
)
from .data import (
    AnalyticDatum,
    GridDatum,
    MomentReport,
    QuadratureWarning,
    Term,
    TermKind,
    ab_at,
    default_grid,
    ft_at,
    grid_datum_from_samples,
    moments,
)
from .evolution import Equation, EvolutionProblem, band_residuals, evolve, residual_norm, residual_spectrum
from .quadrature import (
    AngularRule,
    RadialGrid,
    SpectralField,
    TensorGrid,
    TruncationWarning,
    band_l2_sq,
    l2_norm,
    radial_l2,
    sphere_area,
    tensor_inverse_transform,
    tensor_l2,
)
from .spectral import (
    Band,
    RootKind,
    RootPair,
    band_mask,
    band_of,
    characteristic_roots,
    direct_propagators,
    dw_propagators,
    heat_multiplier,
    shc,
)
