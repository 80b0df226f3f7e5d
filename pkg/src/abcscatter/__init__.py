"""Relativistic spin-1/2 scattering by combined Aharonov-Bohm and Coulomb
potentials in two dimensions: S-matrix, amplitudes, cross sections, bound
levels and an ODE cross-check."""

from .amplitude import (
    AmplitudeMethod,
    AmplitudeProfile,
    AngularGrid,
    amplitude,
    amplitude_closed_f0,
    amplitude_closed_f1,
    amplitude_closed_generic,
    amplitude_closed_nu0,
    amplitude_closed_nu_half,
    amplitude_series,
    cross_section_nu0,
    cross_section_nu_half,
)
from .bound import BoundLevel, energy_level, spectrum
from .errors import (
    ChannelKindError,
    ConvergenceError,
    CriticalChannelError,
    ForwardAngleError,
    InvalidInput,
    PoleError,
    QualityWarning,
    ScatteringError,
    SpecialFunctionOverflow,
    SubThresholdError,
)
from .oracle import MatchResult, RadialTrajectory, extract_s, integrate_radial, ode_s_matrix
from .physics import (
    Channel,
    ChannelExponent,
    ChannelKind,
    FluxSplit,
    Kinematics,
    PhysicalConfig,
    channel_exponent,
    kinematics,
    split_flux,
)
from .smatrix import (
    ChannelResult,
    SMethod,
    phase_shift,
    s_approx,
    s_exact,
    s_matrix,
    s_matrix_array,
    s_supercritical,
)
from .specfun import AccelConfig, gamma_ratio, gauss_f1ab, kummer_phi, log_gamma

__version__ = "0.1.0"
