"""Numerical oracle for S_j: integrate the radial system and match asymptotics.

With rho = k r the regular radial pair (f, g) satisfies the real system

    f' = kappa f / rho - (k1/k + gamma/rho) g
    g' = (k2/k + gamma/rho) f - kappa g / rho,      kappa = j + nu,

started from the power law rho^s at small rho.  At large rho the solution
is fitted to a combination of the exact outgoing and incoming Coulomb
waves (asymptotic series in 1/rho, log phase included), and S_j follows
from the ratio of the two coefficients.  Nothing here uses the closed S_j.
"""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ChannelKindError, ConvergenceError, InvalidInput
from .physics import channel_exponent
from .smatrix import radial_wavefunction_analytic

__all__ = [
    "RadialTrajectory",
    "MatchResult",
    "integrate_radial",
    "analytic_trajectory",
    "extract_s",
    "ode_s_matrix",
    "write_trajectory_csv",
]

SAMPLE_STEP = 0.05
DEFAULT_WINDOW = (30.0, 60.0)
# post-fit relative RMS misfit above which the match is rejected
FIT_THRESHOLD = 1e-4


@dataclass(frozen=True, eq=False)
class RadialTrajectory:
    rho_samples: np.ndarray
    f_samples: np.ndarray
    g_samples: np.ndarray
    channel: object
    kin: object
    nu: float
    gamma: float

    def __post_init__(self):
        r = np.asarray(self.rho_samples, dtype=float)
        if not (len(r) == len(self.f_samples) == len(self.g_samples)):
            raise InvalidInput("trajectory sample lists differ in length")
        if np.any(np.diff(r) <= 0) or np.any(r <= 0):
            raise InvalidInput("rho samples must be positive and increasing")


@dataclass(frozen=True)
class MatchResult:
    s_extracted: complex
    match_radius: float
    residual: float


def _default_samples(rho_start, rho_end):
    inner = np.geomspace(rho_start, 1.0, 121)[:-1]
    outer = np.linspace(1.0, rho_end, int(round((rho_end - 1.0) / SAMPLE_STEP)) + 1)
    return np.concatenate([inner, outer])


def _seed(kappa, s, gamma, k1k, k2k, rho):
    # f = rho^s (1 + a1 rho), g = rho^s (b0 + b1 rho)
    b0 = gamma / (s + kappa) if kappa > 0 else (kappa - s) / gamma
    A = np.array([[s + 1 - kappa, gamma], [-gamma, s + 1 + kappa]])
    a1, b1 = np.linalg.solve(A, [-k1k * b0, k2k])
    p = rho**s
    return np.array([p * (1 + a1 * rho), p * (b0 + b1 * rho)])


def integrate_radial(ch, kin, split, gamma=None, rho_start=1e-6, rho_end=60.0,
                     tol=1e-10, samples=None, seed_scale=1.0):
    """Integrate the regular solution from ``rho_start`` to ``rho_end``.

    Uses an adaptive 8th-order Dormand-Prince scheme; ``samples`` defaults
    to a log grid below rho = 1 and a uniform 0.05 grid above.  The seed is
    f = seed_scale * rho^s (plus its first correction) at ``rho_start``.
    """
    gamma = kin.gamma if gamma is None else gamma
    if gamma == 0:
        raise InvalidInput("the ODE oracle needs gamma != 0")
    if not 1e-8 <= rho_start <= 1e-3:
        raise InvalidInput("rho_start must lie in [1e-8, 1e-3]")
    if rho_end < 50:
        raise InvalidInput("rho_end must be at least 50")
    exp_ = channel_exponent(ch, split, gamma)
    if not exp_.is_subcritical:
        raise ChannelKindError("the ODE oracle handles subcritical channels only")
    kappa, s = ch.j + split.nu, exp_.s
    k1k, k2k = kin.k1 / kin.k, kin.k2 / kin.k

    def rhs(r, y):
        f, g = y
        return [kappa * f / r - (k1k + gamma / r) * g,
                (k2k + gamma / r) * f - kappa * g / r]

    pts = _default_samples(rho_start, rho_end) if samples is None else np.asarray(samples, float)
    y0 = seed_scale * _seed(kappa, s, gamma, k1k, k2k, rho_start)
    scale = float(np.max(np.abs(y0)))
    sol = solve_ivp(rhs, (rho_start, rho_end), y0 / scale, method="DOP853",
                    t_eval=pts, rtol=tol, atol=tol * 1e-4)
    if not sol.success:
        raise ConvergenceError(f"radial integration failed: {sol.message}")
    y = sol.y * scale
    return RadialTrajectory(sol.t, y[0].astype(complex), y[1].astype(complex),
                            ch, kin, split.nu, gamma)


def analytic_trajectory(ch, kin, split, gamma=None, rho=None):
    """Trajectory sampled from the closed-form regular solution."""
    gamma = kin.gamma if gamma is None else gamma
    rho = np.linspace(1.0, 60.0, 1181) if rho is None else np.asarray(rho, float)
    f, g = radial_wavefunction_analytic(ch, kin, split, gamma, rho)
    return RadialTrajectory(rho, f, g, ch, kin, split.nu, gamma)


# ---------------------------------------------------------------------------
# asymptotic Coulomb waves


def _sum_optimal(coeffs, rho):
    # truncate each asymptotic series at its smallest term
    x = 1.0 / rho
    out = np.zeros(rho.shape, complex)
    prev = np.full(rho.shape, np.inf)
    live = np.ones(rho.shape, bool)
    for n, c in enumerate(coeffs):
        if c == 0:
            continue
        term = c * x**n
        mag = np.abs(term)
        live &= mag < prev
        out = np.where(live, out + term, out)
        prev = np.where(live, mag, prev)
    return out


def _wave_coefficients(kappa, beta, beta_prime, nterms=60):
    """Series coefficients (u_n, v_n) of the outgoing and incoming waves."""
    uo, vo = [1.0 + 0j], [0j]
    for n in range(nterms - 1):
        v = 0.5j * ((2j * beta - n) * vo[n] + (1j * beta_prime - kappa) * uo[n])
        vo.append(v)
        uo.append(-(1j * beta_prime + kappa) * v / (n + 1))
    ui, vi = [0j], [1.0 + 0j]
    for n in range(nterms - 1):
        u = ((-2j * beta - n) * ui[n] - (1j * beta_prime + kappa) * vi[n]) / 2j
        ui.append(u)
        vi.append((1j * beta_prime - kappa) * u / (n + 1))
    return (np.array(uo), np.array(vo)), (np.array(ui), np.array(vi))


def _waves(kin, kappa, rho):
    (uo, vo), (ui, vi) = _wave_coefficients(kappa, kin.beta, kin.beta_prime)
    logr = np.log(rho)
    eo = np.exp(1j * (rho + kin.beta * logr))
    ei = np.exp(-1j * (rho + kin.beta * logr))
    a, b = 0.5 * math.sqrt(kin.k1), -0.5j * math.sqrt(kin.k2)
    uo_, vo_ = _sum_optimal(uo, rho), _sum_optimal(vo, rho)
    ui_, vi_ = _sum_optimal(ui, rho), _sum_optimal(vi, rho)
    out = (a * eo * (uo_ + vo_), b * eo * (uo_ - vo_))
    inc = (a * ei * (ui_ + vi_), b * ei * (ui_ - vi_))
    return out, inc


def extract_s(traj, window=DEFAULT_WINDOW, threshold=FIT_THRESHOLD):
    """Least-squares match of the trajectory to outgoing + incoming waves.

    f and g are fitted simultaneously (four real equations per sample).
    ``residual`` is the post-fit RMS misfit relative to the RMS data.
    """
    lo, hi = window
    if lo < 30:
        raise InvalidInput("matching window must start at rho >= 30")
    r = np.asarray(traj.rho_samples)
    if lo < r[0] or hi > r[-1] + 1e-9:
        raise InvalidInput("matching window outside the trajectory")
    sel = (r >= lo) & (r <= hi)
    if sel.sum() < 8:
        raise InvalidInput("too few samples in the matching window")
    rho = r[sel]
    f = np.asarray(traj.f_samples)[sel]
    g = np.asarray(traj.g_samples)[sel]
    kappa = traj.channel.j + traj.nu
    (of, og), (if_, ig) = _waves(traj.kin, kappa, rho)
    A = np.vstack([np.column_stack([of, if_]), np.column_stack([og, ig])])
    y = np.concatenate([f, g])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.linalg.norm(A @ coef - y) / np.linalg.norm(y))
    a_out, a_in = coef
    if a_in == 0:
        raise ConvergenceError("no incoming wave in the fit", residual=resid)
    beta = traj.kin.beta
    sign = -1.0 if traj.channel.m % 2 else 1.0
    S = sign * 1j * cmath.exp(-2j * beta * math.log(2.0)) * a_out / a_in
    if resid > threshold:
        raise ConvergenceError(
            f"asymptotic fit residual {resid:.3g} exceeds {threshold:.3g}", residual=resid)
    return MatchResult(complex(S), float(lo), resid)


def ode_s_matrix(ch, kin, split, gamma=None, window=DEFAULT_WINDOW, **kwargs):
    """Integrate and match in one call."""
    rho_end = max(kwargs.pop("rho_end", 60.0), window[1])
    traj = integrate_radial(ch, kin, split, gamma, rho_end=rho_end, **kwargs)
    return extract_s(traj, window)


def write_trajectory_csv(traj, path):
    """Dump columns rho, Re f, Im f, Re g, Im g."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["rho", "re_f", "im_f", "re_g", "im_g"])
        for r, f, g in zip(traj.rho_samples, traj.f_samples, traj.g_samples):
            w.writerow([format(r, ".15g"), format(f.real, ".15g"), format(f.imag, ".15g"),
                        format(g.real, ".15g"), format(g.imag, ".15g")])
