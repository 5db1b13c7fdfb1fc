"""Multimode Gaussian description of optical pulses.

Mode functions on frequency grids, Gaussian states of their quadratures,
photon-number statistics, reconstruction of quadrature variances from
spectral correlations, simulated homodyne tomography, photon-number
squeezing optimization, operational mode selection and the soliton
perturbation operators.
"""

from .config import TOL, Tolerances, load_tolerances
from .errors import (
    ApproximationDomainError,
    BasisMismatch,
    DegenerateBasis,
    DegenerateLO,
    DimensionMismatch,
    ExhaustedBasis,
    FactorizationError,
    FormatError,
    GridMismatch,
    InsufficientData,
    InvalidFilter,
    MeasurementInvalid,
    NoCoherentAmplitude,
    PulseModesError,
    SingularSchedule,
    TruncationError,
    UncertaintyViolation,
    UndefinedQ,
)
from .gaussian import (
    GaussianState,
    coherent,
    eliminate_coherent_amplitudes,
    is_physical,
    moments,
    pair_moment,
    passive_symplectic,
    project,
    sample,
    squeezed_vacuum,
    symplectic_form,
    transform_to_frequency,
    transform_to_modes,
    vacuum,
)
from .haus_lai import SolitonParameters, photon_stat_sufficiency_check, soliton_operator_stats
from .homodyne import (
    LocalOscillatorShape,
    determine_variance_matrix,
    measured_quadrature_samples,
    measured_quadrature_variance,
    simulate_tomography,
    tomography_schedule,
)
from .mode_select import select_modes
from .modes import (
    FrequencyGrid,
    ModeBasis,
    ModeFunction,
    build_z,
    gram_schmidt,
    haus_lai_basis,
    soliton_grid,
)
from .photon_stats import (
    CorrelationData,
    Verdict,
    mean_photon,
    normalized_correlation,
    normally_ordered_covariance,
    photon_covariance_exact,
    single_mode_sign_theorem_check,
    spectral_correlation_strongfield,
)
from .reconstruction import (
    diagonalize_vxx,
    monte_carlo_uncertainty,
    reconstruct_vxx,
    reconstruction_error,
    squeezing_db,
)
from .squeezing import FilterFunction, filtered_q, mandel_q, optimal_lo

__version__ = "0.1.0"
