"""Differentiable point-scattering range profiles: synthesis, fitting, bounds."""

from .constants import C_LIGHT
from .geometry import (
    DegenerateGeometryError,
    Position3,
    SightLine,
    cartesian_to_cylindrical,
    cylindrical_to_cartesian,
    projected_range,
    sightline_from_angles,
    sightline_from_points,
)
from .waveform import LfmWaveform, WaveformKernel, lfm_from_band
from .scatterer import (
    AmplitudeModel,
    FixedAmplitude,
    FixedCylindrical,
    PositionModel,
    Scatterer,
    SlippingRing,
    Spherical,
)
from .model import (
    PointScatteringModel,
    ProfileJacobian,
    RangeGrid,
    RangeProfile,
    frequency_response,
    phase_delay,
    profile_jacobian,
    profile_jacobians,
    synthesize_profile,
    synthesize_profiles,
)
from .loss import (
    Observation,
    WeightMatrix,
    amplitude_vector,
    batch_gradient,
    batch_loss,
    coherent_loss,
    coherent_loss_gradient,
    noncoherent_clamp,
    noncoherent_loss,
    noncoherent_loss_gradient,
)
from .estimate import (
    CrlbResult,
    DescentConfig,
    FisherInfo,
    FitReport,
    LineSearchConfig,
    crlb,
    crlb_from_fisher,
    fisher_info,
    gradient_descent,
    line_search,
    sequential_fit,
)
from .sim import NoiseSpec, StaticPattern, add_noise, sweep_sightlines, synthesize_pattern

__version__ = "0.1.0"

__all__ = [
    "C_LIGHT",
    "AmplitudeModel",
    "CrlbResult",
    "DegenerateGeometryError",
    "DescentConfig",
    "FisherInfo",
    "FitReport",
    "FixedAmplitude",
    "FixedCylindrical",
    "LfmWaveform",
    "LineSearchConfig",
    "NoiseSpec",
    "Observation",
    "PointScatteringModel",
    "Position3",
    "PositionModel",
    "ProfileJacobian",
    "RangeGrid",
    "RangeProfile",
    "Scatterer",
    "SightLine",
    "SlippingRing",
    "Spherical",
    "StaticPattern",
    "WaveformKernel",
    "WeightMatrix",
    "add_noise",
    "amplitude_vector",
    "batch_gradient",
    "batch_loss",
    "cartesian_to_cylindrical",
    "coherent_loss",
    "coherent_loss_gradient",
    "crlb",
    "crlb_from_fisher",
    "cylindrical_to_cartesian",
    "fisher_info",
    "frequency_response",
    "gradient_descent",
    "lfm_from_band",
    "line_search",
    "noncoherent_clamp",
    "noncoherent_loss",
    "noncoherent_loss_gradient",
    "phase_delay",
    "profile_jacobian",
    "profile_jacobians",
    "projected_range",
    "sequential_fit",
    "sightline_from_angles",
    "sightline_from_points",
    "synthesize_pattern",
    "synthesize_profile",
    "synthesize_profiles",
    "sweep_sightlines",
]
