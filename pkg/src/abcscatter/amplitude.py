"""Scattering amplitude f(theta) and cross section sigma = |f|^2.

Two routes:

- partial-wave series f = -i/sqrt(2 pi k) sum_j (S_j - 1) e^{i m theta},
  Abel-summed with weights t^|m| and extrapolated to t -> 1;
- closed small-gamma forms: f0 + f1 for any nu, and the fully closed
  expressions at nu = 0 and nu = 1/2.

Angles are radians in (0, 2 pi); the forward direction is excluded.
"""

from __future__ import annotations

import cmath
import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, ForwardAngleError, InvalidInput
from .smatrix import s_matrix_array, s_supercritical, supercritical_channel
from .specfun import (
    THETA_MIN,
    AccelConfig,
    extrapolate_to_zero,
    gamma_ratio,
    gauss_f1ab,
)

__all__ = [
    "AmplitudeMethod",
    "AngularGrid",
    "AmplitudeProfile",
    "amplitude_series",
    "amplitude_closed_f0",
    "amplitude_closed_f1",
    "amplitude_closed_generic",
    "amplitude_closed_nu0",
    "amplitude_closed_nu_half",
    "cross_section_nu0",
    "cross_section_nu_half",
    "amplitude",
]

log = logging.getLogger(__name__)

# t^M below this is treated as zero when truncating the damped sums
_TRUNCATION = 1e-17


class AmplitudeMethod(enum.Enum):
    SERIES_EXACT = "SeriesExact"
    SERIES_APPROX = "SeriesApprox"
    CLOSED_NU0 = "ClosedNu0"
    CLOSED_NU_HALF = "ClosedNuHalf"
    CLOSED_GENERIC = "ClosedGeneric"


@dataclass(frozen=True, eq=False)
class AngularGrid:
    theta_values: np.ndarray
    theta_min: float = THETA_MIN

    def __post_init__(self):
        th = np.atleast_1d(np.asarray(self.theta_values, dtype=float))
        if not self.theta_min > 0:
            raise InvalidInput("theta_min must be positive")
        bad = (th < self.theta_min - 1e-12) | (th > 2 * math.pi - self.theta_min + 1e-12)
        if np.any(bad) or not np.all(np.isfinite(th)):
            raise ForwardAngleError(
                f"angles must lie in [{self.theta_min:.4g}, "
                f"{2 * math.pi - self.theta_min:.4g}] rad")
        th.setflags(write=False)
        object.__setattr__(self, "theta_values", th)

    @classmethod
    def from_degrees(cls, start, stop, count, theta_min=THETA_MIN):
        return cls(np.radians(np.linspace(start, stop, int(count))), theta_min)

    @property
    def degrees(self):
        return np.degrees(self.theta_values)

    def __len__(self):
        return self.theta_values.size


@dataclass(frozen=True, eq=False)
class AmplitudeProfile:
    grid: AngularGrid
    f_values: np.ndarray
    sigma_values: np.ndarray
    method: AmplitudeMethod
    diagnostics: dict = field(default_factory=dict)


def _profile(grid, f, method, diagnostics=None):
    f = np.asarray(f, dtype=complex)
    return AmplitudeProfile(grid, f, np.abs(f) ** 2, method, diagnostics or {})


# ---------------------------------------------------------------------------
# partial-wave series


def abel_partial_wave_sum(coeffs_fn, thetas, accel):
    """Abel sum of sum_m c_m e^{i m theta} for each theta.

    ``coeffs_fn(m)`` returns c_m for an integer array m.  Returns
    (values, residuals, terms_used).
    """
    steps = accel.steps
    M = int(math.ceil(math.log(1.0 / _TRUNCATION) / steps[-1]))
    if 2 * M + 1 > accel.max_terms:
        raise ConvergenceError(
            f"Abel summation needs {2 * M + 1} terms > max_terms={accel.max_terms}")
    m = np.arange(-M, M + 1)
    c = coeffs_fn(m)
    absm = np.abs(m).astype(float)
    weights = np.exp(np.outer(absm, np.log1p(-steps)))
    values = np.empty(len(thetas), dtype=complex)
    resid = np.empty(len(thetas))
    for i, th in enumerate(thetas):
        damped = (c * np.exp(1j * th * m)) @ weights
        values[i], resid[i] = extrapolate_to_zero(steps, damped)
    return values, resid, 2 * M + 1


def amplitude_series(kin, split, gamma=None, grid=None, accel=None,
                     prescription="exact"):
    """f(theta) from the Abel-summed partial-wave series.

    ``prescription="exact"`` uses the exact S_j (with the mean S in a
    supercritical channel); ``"approx"`` uses the small-gamma S_j, whose sum
    equals ``amplitude_closed_generic`` identically.
    """
    gamma = kin.gamma if gamma is None else gamma
    accel = accel or AccelConfig()
    if grid is None:
        raise InvalidInput("amplitude_series needs an angular grid")

    def coeffs(m):
        return s_matrix_array(m, kin, split, gamma, prescription) - 1.0

    sums, resid, nterms = abel_partial_wave_sum(coeffs, grid.theta_values, accel)
    f = -1j / math.sqrt(2 * math.pi * kin.k) * sums
    # residuals are relative, with an absolute floor for vanishing sums
    scale = np.maximum(np.abs(sums), 1e-10)
    diagnostics = {
        "terms_used": nterms,
        "damping_grid": list(accel.damping_grid),
        "max_residual": float(np.max(resid / scale)) if resid.size else 0.0,
    }
    sc = supercritical_channel(split, gamma) if prescription == "exact" else None
    if sc is not None:
        diagnostics["supercritical_j"] = sc.j_label
        diagnostics["supercritical_abs_S"] = abs(s_supercritical(kin, split, gamma).s_value)
    if np.any(resid > accel.tolerance * scale):
        raise ConvergenceError(
            "amplitude_series: Abel extrapolation residual "
            f"{diagnostics['max_residual']:.3g} above tolerance {accel.tolerance:.3g}",
            residual=diagnostics["max_residual"])
    method = (AmplitudeMethod.SERIES_EXACT if prescription == "exact"
              else AmplitudeMethod.SERIES_APPROX)
    return _profile(grid, f, method, diagnostics)


# ---------------------------------------------------------------------------
# closed forms


def _check_theta(theta):
    if not 0 < theta < 2 * math.pi:
        raise ForwardAngleError(f"theta={theta} outside (0, 2 pi)")


def _coulomb_factor(theta, beta, k):
    # exp(i beta ln sin^2(theta/2)) / (sqrt(2k) sin(theta/2))
    sh = math.sin(theta / 2)
    return cmath.exp(1j * beta * math.log(sh * sh)) / (math.sqrt(2 * k) * sh)


def _pole_coeff(nu, beta):
    # Gamma(1/2 - nu + i b) Gamma(1/2 + nu - i b) / (Gamma(i b) Gamma(1/2 + i b))
    if beta == 0:
        return 1 / math.sqrt(math.pi) if nu == 0.5 else 0.0
    return (gamma_ratio(0.5 - nu + 1j * beta, 1j * beta)
            * gamma_ratio(0.5 + nu - 1j * beta, 0.5 + 1j * beta))


def _f0_bracket(nu, beta):
    if nu == 0 or nu == 0.5:
        return 0.0
    if beta == 0:
        return cmath.exp(1j * nu * math.pi) - cmath.exp(-1j * nu * math.pi)
    return (cmath.exp(1j * nu * math.pi)
            * gamma_ratio(1.5 - nu - 1j * beta, 1.5 - nu + 1j * beta)
            - cmath.exp(-1j * nu * math.pi)
            * gamma_ratio(-0.5 + nu - 1j * beta, -0.5 + nu + 1j * beta))


def _f1_bracket(nu, beta):
    if nu == 0 or nu == 0.5:
        return 0.0
    return (cmath.exp(1j * nu * math.pi)
            * gamma_ratio(0.5 - nu - 1j * beta, 1.5 - nu + 1j * beta)
            + cmath.exp(-1j * nu * math.pi)
            * gamma_ratio(-0.5 + nu - 1j * beta, 0.5 + nu + 1j * beta))


def amplitude_closed_f0(theta, nu, beta, k, accel=None, form="transformed"):
    """Nonrelativistic part f0 of the resummed small-gamma amplitude.

    ``form="transformed"`` (default): a Rutherford-like pole term plus one
    unit-circle hypergeometric term that vanishes at nu = 0 and nu = 1/2.
    ``form="direct"``: the two-hypergeometric sum obtained term by term.
    """
    _check_theta(theta)
    accel = accel or AccelConfig()
    pre = -1j / math.sqrt(2 * math.pi * k)
    zb = cmath.exp(-1j * theta)
    if form == "direct":
        z = cmath.exp(1j * theta)
        a1, b1 = 0.5 + nu - 1j * beta, 0.5 + nu + 1j * beta
        a2, b2 = 1.5 - nu - 1j * beta, 1.5 - nu + 1j * beta
        t1 = cmath.exp(-1j * nu * math.pi) * gamma_ratio(a1, b1) * gauss_f1ab(a1, b1, z, accel)
        t2 = (cmath.exp(1j * nu * math.pi) * gamma_ratio(a2, b2) * zb
              * gauss_f1ab(a2, b2, zb, accel))
        return pre * (t1 + t2)
    if form != "transformed":
        raise InvalidInput(f"unknown form {form!r}")
    out = (-1j * cmath.exp(-1j * nu * theta) * _pole_coeff(nu, beta)
           * _coulomb_factor(theta, beta, k))
    br = _f0_bracket(nu, beta)
    if br != 0:
        out += pre * br * zb * gauss_f1ab(1.5 - nu - 1j * beta, 1.5 - nu + 1j * beta,
                                          zb, accel)
    return out


def amplitude_closed_f1(theta, nu, beta, beta_prime, k, accel=None, form="transformed"):
    """Relativistic correction f1; zero when beta' = beta."""
    _check_theta(theta)
    accel = accel or AccelConfig()
    db = beta - beta_prime
    if db == 0 or beta == 0:
        return 0j
    zb = cmath.exp(-1j * theta)
    if form == "direct":
        z = cmath.exp(1j * theta)
        a1, b1 = 0.5 + nu - 1j * beta, 1.5 + nu + 1j * beta
        a2, b2 = 0.5 - nu - 1j * beta, 1.5 - nu + 1j * beta
        t1 = cmath.exp(-1j * nu * math.pi) * gamma_ratio(a1, b1) * gauss_f1ab(a1, b1, z, accel)
        t2 = (cmath.exp(1j * nu * math.pi) * gamma_ratio(a2, b2) * zb
              * gauss_f1ab(a2, b2, zb, accel))
        return -db / math.sqrt(2 * math.pi * k) * (t1 - t2)
    if form != "transformed":
        raise InvalidInput(f"unknown form {form!r}")
    out = (-(db / beta) * _pole_coeff(nu, beta)
           * cmath.exp(-1j * theta / 2 - 1j * nu * theta)
           * math.sin(theta / 2) * _coulomb_factor(theta, beta, k))
    br = _f1_bracket(nu, beta)
    if br != 0:
        out += (db / math.sqrt(2 * math.pi * k) * br * zb
                * gauss_f1ab(0.5 - nu - 1j * beta, 1.5 - nu + 1j * beta, zb, accel))
    return out


def amplitude_closed_generic(kin, split, grid, accel=None):
    """f0 + f1 on the grid for arbitrary nu."""
    f = [amplitude_closed_f0(th, split.nu, kin.beta, kin.k, accel)
         + amplitude_closed_f1(th, split.nu, kin.beta, kin.beta_prime, kin.k, accel)
         for th in grid.theta_values]
    return _profile(grid, f, AmplitudeMethod.CLOSED_GENERIC)


def _relativistic_factor(theta, kin):
    # 1 - i e^{-i theta/2} sin(theta/2) (1 - beta'/beta)
    return 1 - 1j * np.exp(-0.5j * theta) * np.sin(theta / 2) * (
        1 - kin.beta_prime_over_beta)


def _coulomb_factor_vec(theta, beta, k):
    sh = np.sin(theta / 2)
    return np.exp(1j * beta * np.log(sh * sh)) / (math.sqrt(2 * k) * sh)


def amplitude_closed_nu0(kin, grid):
    """Closed amplitude for integer flux (nu = 0); same as pure Coulomb."""
    th = grid.theta_values
    if kin.beta == 0:
        return _profile(grid, np.zeros(th.shape, complex), AmplitudeMethod.CLOSED_NU0)
    coeff = gamma_ratio(0.5 - 1j * kin.beta, 1j * kin.beta)
    f = (-1j * coeff * _coulomb_factor_vec(th, kin.beta, kin.k)
         * _relativistic_factor(th, kin))
    return _profile(grid, f, AmplitudeMethod.CLOSED_NU0)


def amplitude_closed_nu_half(kin, grid):
    """Closed amplitude for half-integer flux (nu = 1/2)."""
    th = grid.theta_values
    # beta Gamma(-i beta) = i Gamma(1 - i beta), finite at beta = 0
    coeff = 1j * gamma_ratio(1 - 1j * kin.beta, 0.5 + 1j * kin.beta)
    f = (-np.exp(-0.5j * th) * coeff * _coulomb_factor_vec(th, kin.beta, kin.k)
         * _relativistic_factor(th, kin))
    return _profile(grid, f, AmplitudeMethod.CLOSED_NU_HALF)


def _rel_sigma_factor(theta, kin):
    return 1 - kin.v_over_c**2 * np.sin(np.asarray(theta) / 2) ** 2


def cross_section_nu0(kin, theta):
    """beta tanh(beta pi) / (2k sin^2(theta/2)) (1 - v^2 sin^2(theta/2))."""
    b = kin.beta
    return (b * math.tanh(b * math.pi) / (2 * kin.k * np.sin(np.asarray(theta) / 2) ** 2)
            * _rel_sigma_factor(theta, kin))


def cross_section_nu_half(kin, theta):
    """beta coth(beta pi) / (2k sin^2(theta/2)) (1 - v^2 sin^2(theta/2))."""
    b = kin.beta
    bcoth = 1 / math.pi if b == 0 else b / math.tanh(b * math.pi)
    return (bcoth / (2 * kin.k * np.sin(np.asarray(theta) / 2) ** 2)
            * _rel_sigma_factor(theta, kin))


def amplitude(kin, split, grid, method="auto", accel=None):
    """Dispatch to a series or closed-form route.

    ``auto``: closed form at nu = 0 and nu = 1/2, otherwise the exact
    series.  ``closed`` falls back to f0 + f1 for other nu.
    """
    nu = split.nu
    if method == "auto":
        if nu == 0:
            return amplitude_closed_nu0(kin, grid)
        if nu == 0.5:
            return amplitude_closed_nu_half(kin, grid)
        gamma = kin.gamma
        if abs(gamma) >= min(abs(0.5 - nu), abs(0.5 + nu)):
            log.warning("gamma=%g reaches |1/2 -+ nu|; supercritical channel "
                        "handled with the mean-S prescription", gamma)
        return amplitude_series(kin, split, grid=grid, accel=accel)
    if method == "series":
        return amplitude_series(kin, split, grid=grid, accel=accel)
    if method == "closed":
        if nu == 0:
            return amplitude_closed_nu0(kin, grid)
        if nu == 0.5:
            return amplitude_closed_nu_half(kin, grid)
        return amplitude_closed_generic(kin, split, grid, accel)
    raise InvalidInput(f"unknown method {method!r}")
