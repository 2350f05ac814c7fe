"""Traveling fronts and fast pulses of a single-threshold neural field model.

The package classifies oscillatory coupling kernels, computes the unique
front wave speed through the speed index function, constructs and validates
front profiles, scans the right half-plane of the stability index function,
maps the parameter plane of the one-parameter oscillatory kernel family, and
solves for fast pulses of the slow-feedback system.
"""

from .errors import (
    ComplexEigenvalues,
    ContourTooCoarse,
    DegenerateKernel,
    DomainError,
    InvalidEnvelope,
    MarginViolation,
    MaxIterations,
    MultipleRoots,
    NoBackLevel,
    NonConvergence,
    NonPositiveSlope,
    NoPositiveRoot,
    NoRoot,
    NoSignChange,
    NumericsError,
    SingularJacobian,
    SlowBranchOnly,
    TangentialZero,
    WavefrontError,
)
from .evans import (
    EssentialSpectrum,
    EvansContext,
    EvansScan,
    RationalLaplaceCertificate,
    essential_spectrum,
    evans_function,
    evans_slope_at_zero,
    origin_winding,
    rational_laplace_certificate,
    scan_right_half_plane,
    winding_number,
)
from .front import (
    FrontSolution,
    FrontValidation,
    front_derivative,
    front_drive,
    front_profile,
    front_value,
    validate_front,
)
from .k2atlas import (
    AtlasGrid,
    AtlasPoint,
    atlas_point,
    family_kernel,
    first_moment,
    moment_critical_decay,
    quadratic_wave_speed,
    region_scan,
    second_crossing,
    threshold_boundary,
)
from .kernels import (
    BUILTIN_ALIASES,
    Kernel,
    KernelClassReport,
    KernelSpec,
    Margin,
    ThresholdConditionReport,
    WaveSpeedConditionReport,
    ZeroStructure,
    classify,
    normalize,
    repeated_integral,
    threshold_conditions,
    wave_speed_condition,
    zero_structure,
)
from .numerics import (
    Bracket,
    QuadratureSettings,
    find_root_bracketed,
    integrate_halfline,
    integrate_interval,
    scan_sign_changes,
    solve_2d,
)
from .pulse import (
    EigenPair,
    PhasePortrait,
    PulseParams,
    PulseSolution,
    feedback_eigenvalues,
    phase_portrait,
    portrait_proximity,
    pulse_value,
    singular_orbit,
    singular_width_estimate,
    solve_pulse,
)
from .wavespeed import (
    ModelParams,
    WaveSpeedResult,
    repeated_integral_transform,
    solve_wave_speed,
    speed_index,
    speed_index_profile,
    speed_index_slope,
)

__version__ = "0.1.0"
