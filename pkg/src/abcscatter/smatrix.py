"""Per-channel S-matrix elements and analytic radial wavefunctions.

Three prescriptions:

- ``s_exact``: the closed expression
  S_j = (j + nu + i beta') Gamma(s - i beta) / Gamma(s + 1 + i beta) e^{i(j - s)pi}
  for subcritical channels, s = sqrt((j + nu)^2 - gamma^2).
- ``s_approx``: the same with s replaced by |j + nu|, written as the two-term
  (nonrelativistic + correction) form.
- ``s_supercritical``: for the one channel with (j + nu)^2 < gamma^2, the mean
  of the two continuations s = +i gamma' and s = -i gamma'.  This S is not
  unimodular and no phase shift is reported for it.

``s_matrix_array`` evaluates any of them over a vector of channels; it is
what the partial-wave sums use.
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ChannelKindError, CriticalChannelError, QualityWarning
from .physics import CRITICAL_TOL, Channel, ChannelExponent, channel_exponent
from .specfun import gamma_ratio, kummer_phi, log_gamma

__all__ = [
    "SMethod",
    "ChannelResult",
    "s_exact",
    "s_approx",
    "s_supercritical",
    "s_matrix",
    "s_matrix_array",
    "supercritical_channel",
    "phase_shift",
    "radial_wavefunction_analytic",
]


class SMethod(enum.Enum):
    EXACT = "Exact"
    APPROX = "Approx"
    SUPERCRITICAL_MEAN = "SupercriticalMean"
    PURE_AB = "PureAB"


@dataclass(frozen=True)
class ChannelResult:
    channel: Channel
    exponent: ChannelExponent | None
    s_value: complex
    phase_shift: float | None
    method: SMethod
    branches: tuple | None = None


def phase_shift(s_value):
    """eta with S = exp(2 i eta), folded to (-pi/2, pi/2]."""
    return cmath.phase(s_value) / 2.0


def _gamma(kin, gamma):
    return kin.gamma if gamma is None else gamma


def _near_critical(kappa, gamma):
    return abs(kappa) < 2.0 * abs(gamma)


def _exact_core(m, nu, beta, beta_prime, gamma):
    # vectorized over integer m; every channel must be subcritical
    m = np.asarray(m)
    kappa = m + 0.5 + nu
    ak = np.abs(kappa)
    g = abs(gamma)
    s = np.sqrt((ak - g) * (ak + g))
    # j - s = (j - |kappa|) + (|kappa| - s); the first part is -nu for j > 0
    # and 2j + nu for j < 0, with exp(2 i pi j) = -1
    delta = g * g / (ak + s)
    phase = np.where(m >= 0, np.exp(1j * math.pi * (delta - nu)),
                     -np.exp(1j * math.pi * (delta + nu)))
    if gamma == 0:
        # beta = beta' = 0, s = |kappa|: no Coulomb factor at all
        return np.sign(kappa) * phase
    # Gamma(s - i b)/Gamma(s + 1 + i b) = R / (s + i b), |R| = 1
    R = gamma_ratio(s - 1j * beta, s + 1j * beta)
    return (kappa + 1j * beta_prime) / (s + 1j * beta) * R * phase


def _approx_core(m, nu, beta, beta_prime):
    m = np.asarray(m)
    pos = m >= 0
    x = np.where(pos, m + nu + 0.5, np.abs(m) - nu + 0.5)
    R = gamma_ratio(x - 1j * beta, x + 1j * beta)
    db = beta - beta_prime
    if db == 0:
        corr = np.zeros_like(R)
    else:
        # Gamma(x - ib)/Gamma(x + 1 + ib) = R/(x + ib);
        # Gamma(x - 1 - ib)/Gamma(x + ib) = R/(x - 1 - ib)
        corr = np.where(pos, -1j * db * R / (x + 1j * beta),
                        1j * db * R / (x - 1 - 1j * beta))
    pref = np.where(pos, np.exp(-1j * math.pi * nu), np.exp(1j * math.pi * nu))
    return pref * (R + corr)


def s_exact(ch, kin, split, gamma=None):
    """Exact S_j of a subcritical channel."""
    gamma = _gamma(kin, gamma)
    exp_ = channel_exponent(ch, split, gamma)
    if not exp_.is_subcritical:
        raise ChannelKindError(
            f"channel j={ch.j_label} is supercritical; use s_supercritical")
    S = complex(_exact_core(np.array([ch.m]), split.nu, kin.beta,
                            kin.beta_prime, gamma)[0])
    return ChannelResult(ch, exp_, S, phase_shift(S), SMethod.EXACT)


def s_approx(ch, kin, split):
    """Small-gamma S_j: s -> |j + nu| in the exact expression.

    Warns with ``QualityWarning`` when the channel is close to critical,
    where dropping gamma^2 against (j + nu)^2 is not justified.
    """
    kappa = ch.j + split.nu
    if kin.gamma and _near_critical(kappa, kin.gamma):
        warnings.warn(
            f"s_approx: channel j={ch.j_label} has |j+nu|={abs(kappa):.3g} "
            f"comparable to gamma={kin.gamma:.3g}; approximation is poor",
            QualityWarning, stacklevel=2)
    S = complex(_approx_core(np.array([ch.m]), split.nu, kin.beta,
                             kin.beta_prime)[0])
    try:
        exp_ = channel_exponent(ch, split, kin.gamma)
    except CriticalChannelError:
        exp_ = None
    return ChannelResult(ch, exp_, S, phase_shift(S), SMethod.APPROX)


def supercritical_channel(split, gamma):
    """The supercritical channel for this (nu, gamma), or None.

    With |gamma| < 1/2 at most one channel qualifies: j = -1/2 when nu is
    near +1/2, j = +1/2 when nu is near -1/2.
    """
    for ch in (Channel(-1), Channel(0)):
        kappa = abs(ch.j + split.nu)
        if kappa < abs(gamma) and abs(kappa**2 - gamma**2) > CRITICAL_TOL:
            return ch
    return None


def _supercritical_branches(ch, kin, split, gamma_prime):
    # S evaluated at s = +i gamma' and s = -i gamma'; for j = -1/2 this is
    # [beta' + i(1/2 - nu)] Gamma(-i beta +- i gamma')/Gamma(1 + i beta +- i gamma') e^{+-gamma' pi}
    kappa = ch.j + split.nu
    pref = (kappa + 1j * kin.beta_prime) * cmath.exp(1j * math.pi * ch.j)
    out = []
    for sign in (1.0, -1.0):
        gp = sign * gamma_prime
        out.append(pref * gamma_ratio(1j * (gp - kin.beta), 1 + 1j * (gp + kin.beta))
                   * math.exp(gp * math.pi))
    return tuple(out)


def s_supercritical(kin, split, gamma=None):
    """Mean S = (S1 + S2)/2 for the supercritical channel."""
    gamma = _gamma(kin, gamma)
    ch = supercritical_channel(split, gamma)
    if ch is None:
        raise ChannelKindError(
            f"no supercritical channel at nu={split.nu}, gamma={gamma}")
    exp_ = channel_exponent(ch, split, gamma)
    s1, s2 = _supercritical_branches(ch, kin, split, exp_.gamma_prime)
    return ChannelResult(ch, exp_, 0.5 * (s1 + s2), None,
                         SMethod.SUPERCRITICAL_MEAN, branches=(s1, s2))


def _pure_ab_value(ch, nu):
    return cmath.exp((1j if ch.m < 0 else -1j) * math.pi * nu)


def s_matrix(ch, kin, split, gamma=None):
    """Route a channel to its prescription.

    At gamma = 0 the channel with j + nu = 0 has no exponent; it takes the
    pure Aharonov-Bohm value exp(i nu pi) continued from the other j < 0
    channels.
    """
    gamma = _gamma(kin, gamma)
    if gamma == 0 and ch.j + split.nu == 0:
        S = _pure_ab_value(ch, split.nu)
        return ChannelResult(ch, None, S, phase_shift(S), SMethod.PURE_AB)
    sc = supercritical_channel(split, gamma)
    if sc is not None and sc == ch:
        return s_supercritical(kin, split, gamma)
    return s_exact(ch, kin, split, gamma)


def s_matrix_array(m, kin, split, gamma=None, prescription="exact"):
    """S_j for every channel index in ``m`` (vectorized).

    ``prescription="exact"`` uses ``s_exact`` with the supercritical channel
    (if any) replaced by the mean S; ``"approx"`` uses ``s_approx`` for all.
    """
    gamma = _gamma(kin, gamma)
    m = np.asarray(m, dtype=np.int64)
    if prescription == "approx":
        return _approx_core(m, split.nu, kin.beta, kin.beta_prime)
    if prescription != "exact":
        raise ValueError(f"unknown prescription {prescription!r}")
    special = {}
    sc = supercritical_channel(split, gamma)
    if sc is not None:
        special[sc.m] = s_supercritical(kin, split, gamma).s_value
    if gamma == 0 and (split.nu == 0.5 or split.nu == -0.5):
        ch = Channel(-1) if split.nu > 0 else Channel(0)
        special[ch.m] = _pure_ab_value(ch, split.nu)
    regular = ~np.isin(m, list(special))
    kappa = np.abs(m[regular] + 0.5 + split.nu)
    if np.any(np.abs(kappa**2 - gamma**2) <= CRITICAL_TOL):
        raise CriticalChannelError(
            f"a channel has (j+nu)^2 = gamma^2 at nu={split.nu}, gamma={gamma}")
    out = np.empty(m.shape, dtype=complex)
    out[regular] = _exact_core(m[regular], split.nu, kin.beta, kin.beta_prime, gamma)
    for mm, val in special.items():
        out[m == mm] = val
    return out


def radial_wavefunction_analytic(ch, kin, split, gamma, rho):
    """Regular radial functions (f, g) at rho = k r.

    u = a rho^s Phi(s - i beta, 2s + 1, -2 i rho),
    v = a (s - i beta)/(j + nu + i beta') rho^s Phi(s + 1 - i beta, 2s + 1, -2 i rho),
    f = sqrt(k1)/2 e^{i rho}(u + v), g = -i sqrt(k2)/2 e^{i rho}(u - v),
    with the normalization a that gives unit incident amplitude.
    """
    gamma = _gamma(kin, gamma)
    exp_ = channel_exponent(ch, split, gamma)
    if not exp_.is_subcritical:
        raise ChannelKindError("analytic wavefunction needs a subcritical channel")
    s = exp_.s
    beta, bp, k = kin.beta, kin.beta_prime, kin.k
    kappa = ch.j + split.nu
    A = 1j * math.sqrt(2.0 / (math.pi * k)) / math.sqrt(kin.k1 + kin.k2)
    log_a = (s * math.log(2.0) + log_gamma(s - 1j * beta) - log_gamma(2 * s + 1)
             + beta * math.pi / 2 - 1j * s * math.pi / 2 + 1j * math.pi / 4)
    a = A * (kappa + 1j * bp) * cmath.exp(log_a) * (-1) ** (ch.m % 2)
    v_ratio = (s - 1j * beta) / (kappa + 1j * bp)
    rho_arr = np.atleast_1d(np.asarray(rho, dtype=float))
    f = np.empty(rho_arr.shape, dtype=complex)
    g = np.empty(rho_arr.shape, dtype=complex)
    for i, r in enumerate(rho_arr):
        if not r > 0:
            raise ValueError("rho must be positive")
        z = -2j * r
        pw = a * r**s
        u = pw * kummer_phi(s - 1j * beta, 2 * s + 1, z)
        v = pw * v_ratio * kummer_phi(s + 1 - 1j * beta, 2 * s + 1, z)
        e = cmath.exp(1j * r)
        f[i] = 0.5 * math.sqrt(kin.k1) * e * (u + v)
        g[i] = -0.5j * math.sqrt(kin.k2) * e * (u - v)
    if np.ndim(rho) == 0:
        return complex(f[0]), complex(g[0])
    return f, g
