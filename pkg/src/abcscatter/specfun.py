"""Complex special functions used by the scattering formulas.

log-gamma and gamma ratios (Lanczos), Kummer's confluent function
Phi(a, b, z), and F(1, a; b; z) evaluated on the unit circle where its
power series does not converge.

Everything here is a pure function of its arguments. ``log_gamma`` and
``log_gamma_ratio`` accept numpy arrays; the hypergeometric routines are
scalar.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConvergenceError,
    ForwardAngleError,
    InvalidInput,
    PoleError,
    SpecialFunctionOverflow,
)

__all__ = [
    "AccelConfig",
    "log_gamma",
    "log_gamma_ratio",
    "gamma_ratio",
    "kummer_phi",
    "gauss_f1ab",
    "extrapolate_to_zero",
    "GAMMA_TOL",
    "HYPERGEOMETRIC_TOL",
    "KUMMER_SWITCH_RADIUS",
    "THETA_MIN",
]

GAMMA_TOL = 1e-10
HYPERGEOMETRIC_TOL = 1e-8
KUMMER_SWITCH_RADIUS = 30.0
# below this |z| the Kummer power series is summed directly; cancellation
# there costs at most ~e^8 ulp
KUMMER_SERIES_RADIUS = 8.0
THETA_MIN = math.pi / 36
# a Pfaff-transformed argument smaller than this converges fast enough
PFAFF_RADIUS = 0.9

_EPS = 2.0**-56
_MAX_SHIFT = 100_000
_ABS_LIMIT = 1e12

# Lanczos approximation, g = 671/128, 14 terms (Numerical Recipes 3rd ed.)
_LANCZOS_G = 5.24218750000000000
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS_COEF = np.array([
    57.1562356658629235, -59.5979603554754912,
    14.1360979747417471, -0.491913816097620199,
    .339946499848118887e-4, .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,
    -.210264441724104883e-3, .217439618115212643e-3,
    -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5,
])
_LANCZOS_K = np.arange(1, _LANCZOS_COEF.size + 1, dtype=float)
_SQRT_2PI = 2.5066282746310005


def _default_damping_grid():
    return tuple(1.0 - 2.0**-k for k in range(6, 13))


@dataclass(frozen=True)
class AccelConfig:
    """Controls Abel summation of slowly or non-convergent series.

    ``damping_grid`` holds the Abel parameters t < 1; the damped sums are
    extrapolated polynomially in (1 - t) to t = 1.  ``max_terms`` caps the
    number of terms any one summation may use.
    """

    max_terms: int = 400_000
    damping_grid: tuple = field(default_factory=_default_damping_grid)
    tolerance: float = HYPERGEOMETRIC_TOL

    def __post_init__(self):
        if int(self.max_terms) < 16:
            raise InvalidInput(f"max_terms must be >= 16, got {self.max_terms}")
        grid = tuple(float(t) for t in self.damping_grid)
        if len(grid) < 2:
            raise InvalidInput("damping_grid needs at least two points")
        if any(not (0.0 < t < 1.0) for t in grid):
            raise InvalidInput("damping_grid points must lie in (0, 1)")
        if not self.tolerance > 0:
            raise InvalidInput("tolerance must be positive")
        object.__setattr__(self, "damping_grid", grid)

    @property
    def steps(self):
        """Distances 1 - t, largest first."""
        return np.sort(1.0 - np.asarray(self.damping_grid))[::-1]


# ---------------------------------------------------------------------------
# gamma


def _prep(z):
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise SpecialFunctionOverflow("non-finite argument")
    if np.any(np.abs(arr) > _ABS_LIMIT):
        raise SpecialFunctionOverflow("argument magnitude beyond supported range")
    return arr


def _pole_mask(z):
    re = z.real
    return (z.imag == 0) & (re <= 0) & (re == np.round(re))


def _log1p(w):
    # log(1 + w) without cancellation for small complex w; near w = -1 the
    # modulus is formed from 1 + x directly
    x, y = np.real(w), np.imag(w)
    xp = 1.0 + x
    small = 0.5 * np.log1p(x * (2.0 + x) + y * y)
    with np.errstate(divide="ignore"):
        large = 0.5 * np.log(xp * xp + y * y)
    mod = np.where(np.abs(w) < 0.5, small, large)
    return mod + 1j * np.arctan2(y, xp)


def _lanczos_series(z):
    return _LANCZOS_C0 + np.sum(
        _LANCZOS_COEF / (z[..., None] + _LANCZOS_K), axis=-1)


def _lanczos_log_gamma(z):
    # valid for Re z >= 1/2
    t = z + _LANCZOS_G
    return (z + 0.5) * np.log(t) - t + np.log(_SQRT_2PI * _lanczos_series(z) / z)


def _shift_count(re):
    n = np.maximum(0.0, np.ceil(0.5 - re))
    if n.size and n.max() > _MAX_SHIFT:
        raise SpecialFunctionOverflow("argument too far into the left half-plane")
    return n.astype(np.int64)


def _scalar_or_array(out, like):
    return complex(out) if np.ndim(like) == 0 else out


def log_gamma(z):
    """Principal branch of log Gamma(z).

    Arguments with Re z < 1/2 are shifted up with the recurrence
    log Gamma(z) = log Gamma(z + n) - sum log(z + k), which preserves the
    principal branch off the negative real axis.
    """
    zz = _prep(z)
    if np.any(_pole_mask(zz)):
        raise PoleError("log_gamma: pole at a non-positive integer")
    w = np.atleast_1d(zz).copy()
    shift = _shift_count(w.real)
    acc = np.zeros_like(w)
    for k in range(int(shift.max()) if shift.size else 0):
        live = shift > k
        acc[live] += np.log(w[live])
        w[live] += 1.0
    out = _lanczos_log_gamma(w) - acc
    return _scalar_or_array(out.reshape(zz.shape), z)


def log_gamma_ratio(a, b):
    """log(Gamma(a) / Gamma(b)), modulo 2*pi*i.

    Mathematically log_gamma(a) - log_gamma(b), but the Lanczos terms are
    differenced analytically so that arguments with a large common part
    (Gamma(s - i beta) / Gamma(s + 1 + i beta) at s ~ 1e5) keep full
    relative accuracy.
    """
    aa, bb = np.broadcast_arrays(_prep(a), _prep(b))
    if np.any(_pole_mask(aa)) or np.any(_pole_mask(bb)):
        raise PoleError("log_gamma_ratio: pole at a non-positive integer")
    A = np.atleast_1d(aa).astype(complex)
    B = np.atleast_1d(bb).astype(complex)
    shift = _shift_count(np.minimum(A.real, B.real))
    acc = np.zeros_like(A)
    for k in range(int(shift.max()) if shift.size else 0):
        live = shift > k
        acc[live] += _log1p((B[live] - A[live]) / A[live])
        A[live] += 1.0
        B[live] += 1.0
    d = A - B
    tb = B + _LANCZOS_G
    body = d * np.log(tb) + (A + 0.5) * _log1p(d / tb) - d
    denom = (A[..., None] + _LANCZOS_K) * (B[..., None] + _LANCZOS_K)
    dser = -d * np.sum(_LANCZOS_COEF / denom, axis=-1)
    body = body + _log1p(dser / _lanczos_series(B)) - _log1p(d / B)
    out = (body + acc).reshape(aa.shape)
    return complex(out) if np.ndim(a) == 0 and np.ndim(b) == 0 else out


def gamma_ratio(a, b):
    """Gamma(a) / Gamma(b) evaluated through ``log_gamma_ratio``."""
    lr = log_gamma_ratio(a, b)
    if np.any(np.real(lr) > 700.0):
        raise SpecialFunctionOverflow("gamma_ratio overflows double precision")
    return np.exp(lr) if isinstance(lr, np.ndarray) else cmath.exp(lr)


def _is_pole(z):
    return z.imag == 0 and z.real <= 0 and z.real == round(z.real)


def _rgamma(z):
    """1/Gamma(z), zero at the poles."""
    if _is_pole(z):
        return 0.0
    return cmath.exp(-log_gamma(z))


# ---------------------------------------------------------------------------
# Kummer Phi(a, b, z)


def _kummer_series(a, b, z, max_terms):
    term = 1.0 + 0j
    total = 1.0 + 0j
    deriv = 0.0 + 0j
    small = 0
    for n in range(max_terms):
        term *= (a + n) / (b + n) * z / (n + 1)
        total += term
        deriv += (n + 1) * term / z
        if term == 0:
            return total, deriv
        if abs(term) <= _EPS * abs(total) and n + 1 > 2 * abs(z):
            small += 1
            if small >= 2:
                return total, deriv
        else:
            small = 0
    raise ConvergenceError("kummer_phi: power series did not converge",
                           residual=abs(term))


def _kummer_continue(a, b, z0, w, dw, target):
    """Carry (Phi, Phi') from z0 to target along a straight line.

    Each step re-expands the solution of z w'' + (b - z) w' - a w = 0 in a
    Taylor series; steps are kept short so no single expansion suffers the
    cancellation a long power series would.
    """
    zc = z0
    while zc != target:
        rem = target - zc
        hmax = min(2.0, 0.5 * abs(zc))
        last = abs(rem) <= hmax
        h = rem if last else rem / abs(rem) * hmax
        c_prev, c_cur = w, dw
        val = w + dw * h
        der = dw
        hp = h
        small = 0
        for n in range(2000):
            c_next = ((zc - b - n) * (n + 1) * c_cur + (n + a) * c_prev) / (
                zc * (n + 2) * (n + 1))
            der += (n + 2) * c_next * hp
            hp = hp * h
            inc = c_next * hp
            val += inc
            if abs(inc) <= _EPS * abs(val):
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
            c_prev, c_cur = c_cur, c_next
        else:
            raise ConvergenceError("kummer_phi: Taylor continuation stalled")
        zc = target if last else zc + h
        w, dw = val, der
    return w


def _asymptotic_sum(p, q, x, limit=400):
    """Optimally truncated sum_s (p)_s (q)_s / s! x^s; returns (sum, error)."""
    total = 1.0 + 0j
    term = 1.0 + 0j
    for s in range(limit):
        nxt = term * (p + s) * (q + s) / (s + 1) * x
        if nxt == 0:
            return total, 0.0
        if abs(nxt) >= abs(term):
            return total, abs(term)
        total += nxt
        term = nxt
        if abs(term) <= _EPS * abs(total):
            return total, abs(term)
    return total, abs(term)


def _kummer_asymptotic(a, b, z):
    sign = 1.0 if z.imag >= 0 else -1.0
    logz = cmath.log(z)
    lgb = log_gamma(b)
    r1 = _rgamma(b - a)
    r2 = _rgamma(a)
    out = 0j
    err = 0.0
    if r1 != 0:
        pref = r1 * cmath.exp(lgb + sign * 1j * math.pi * a - a * logz)
        s1, e1 = _asymptotic_sum(a, a - b + 1, -1.0 / z)
        out += pref * s1
        err += abs(pref) * e1
    if r2 != 0:
        pref = r2 * cmath.exp(lgb + z + (a - b) * logz)
        s2, e2 = _asymptotic_sum(b - a, 1 - a, 1.0 / z)
        out += pref * s2
        err += abs(pref) * e2
    return out, err


def kummer_phi(a, b, z, max_terms=10_000):
    """Confluent hypergeometric function Phi(a, b, z) = 1F1(a; b; z).

    |z| <= 8: power series.  |z| >= 30: large-argument expansion when its
    optimally truncated error is below ~1e-13 relative.  Otherwise the
    series value at |z| = 8 is continued outward along the ray through z.
    Re z < 0 is first mapped with Kummer's transformation.
    """
    a, b, z = complex(a), complex(b), complex(z)
    for v in (a, b, z):
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise SpecialFunctionOverflow("kummer_phi: non-finite argument")
    if _is_pole(b):
        raise PoleError("kummer_phi: b is a non-positive integer")
    if z == 0:
        return 1.0 + 0j
    if z.real < 0:
        return cmath.exp(z) * kummer_phi(b - a, b, -z, max_terms)
    r = abs(z)
    if r <= KUMMER_SERIES_RADIUS or _is_pole(a):
        return _kummer_series(a, b, z, max_terms)[0]
    if r >= KUMMER_SWITCH_RADIUS:
        val, err = _kummer_asymptotic(a, b, z)
        if err <= 1e-13 * abs(val):
            return val
    z0 = z / r * KUMMER_SERIES_RADIUS
    w, dw = _kummer_series(a, b, z0, max_terms)
    return _kummer_continue(a, b, z0, w, dw, z)


# ---------------------------------------------------------------------------
# F(1, a; b; z) on |z| = 1


def extrapolate_to_zero(h, values):
    """Polynomial (Neville) extrapolation of values(h) to h = 0.

    Returns (estimate, error) where error compares the full-order estimate
    with the one that omits the largest h.
    """
    h = np.asarray(h, dtype=float)
    p = np.array(values, dtype=complex)
    n = p.size
    prev = p.copy()
    for m in range(1, n):
        prev = p.copy()
        for i in range(n - m):
            p[i] = (h[i] * p[i + 1] - h[i + m] * p[i]) / (h[i] - h[i + m])
    est = p[0]
    err = abs(est - prev[1]) if n > 1 else float("inf")
    return est, err


def _f1ab_power_series(a, b, z, max_terms):
    # sum_n (a)_n/(b)_n z^n, convergent for |z| < 1
    total = 1.0 + 0j
    term = 1.0 + 0j
    deriv = 0.0 + 0j
    small = 0
    for n in range(max_terms):
        term *= (a + n) / (b + n) * z
        total += term
        deriv += (n + 1) * term / z
        if term == 0:
            return total, deriv
        if abs(term) <= _EPS * abs(total):
            small += 1
            if small >= 3:
                return total, deriv
        else:
            small = 0
    raise ConvergenceError("gauss_f1ab: power series did not converge",
                           residual=abs(term))


def _hyp_continue(a2, c, z, max_terms):
    """2F1(1, a2; c; z) for |z| <= 1, z != 1, by ODE Taylor re-expansion.

    Starts from the power series at |z| = 1/2 and walks radially outward,
    each step no longer than half the distance to the singular points 0, 1.
    """
    z0 = 0.5 * z / abs(z)
    w, dw = _f1ab_power_series(a2, c, z0, max_terms)
    zc = z0
    q1 = -(a2 + 2)
    ab = a2
    while zc != z:
        rem = z - zc
        hmax = 0.5 * min(abs(zc), abs(1 - zc))
        last = abs(rem) <= hmax
        h = rem if last else rem / abs(rem) * hmax
        p0 = zc * (1 - zc)
        p1 = 1 - 2 * zc
        q0 = c - (a2 + 2) * zc
        c_prev, c_cur = w, dw
        val = w + dw * h
        der = dw
        hp = h
        small = 0
        for n in range(4000):
            c_next = -((p1 * n + q0) * (n + 1) * c_cur
                       + (-n * (n - 1) + q1 * n - ab) * c_prev) / (
                p0 * (n + 2) * (n + 1))
            der += (n + 2) * c_next * hp
            hp = hp * h
            inc = c_next * hp
            val += inc
            if abs(inc) <= _EPS * abs(val):
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
            c_prev, c_cur = c_cur, c_next
        else:
            raise ConvergenceError("gauss_f1ab: Taylor continuation stalled")
        zc = z if last else zc + h
        w, dw = val, der
    return w


def _f1ab_abel(a, b, z, cfg):
    steps = cfg.steps
    needed = int(math.ceil(40.0 / steps[-1]))
    if needed > cfg.max_terms:
        raise ConvergenceError(
            f"gauss_f1ab: Abel summation needs {needed} terms, "
            f"max_terms={cfg.max_terms}")
    n = np.arange(needed, dtype=float)
    ratio = (a + n) / (b + n) * z
    terms = np.concatenate(([1.0 + 0j], np.cumprod(ratio)[:-1]))
    vals = []
    for h in steps:
        nh = int(math.ceil(40.0 / h))
        weights = np.exp(n[:nh] * math.log1p(-h))
        vals.append(np.sum(terms[:nh] * weights))
    return extrapolate_to_zero(steps, vals)


def gauss_f1ab(a, b, z, cfg=None, theta_min=THETA_MIN, method="auto"):
    """Gauss function F(1, a; b; z) for z on the unit circle, z != 1.

    There the defining series does not converge (its terms only decay like
    n^(a - b)), so the value is the analytic continuation.  ``method``:

    - ``"auto"``: Pfaff transform to z/(z - 1) when that lies inside
      radius 0.9, otherwise ODE Taylor continuation from |z| = 1/2.
    - ``"abel"``: Abel-damped partial sums over ``cfg.damping_grid``
      extrapolated to t = 1.  Slower, kept as an independent route.
    """
    cfg = cfg or AccelConfig()
    a, b, z = complex(a), complex(b), complex(z)
    if _is_pole(b):
        raise PoleError("gauss_f1ab: b is a non-positive integer")
    if abs(abs(z) - 1.0) > 1e-12:
        raise InvalidInput(f"gauss_f1ab: |z| must be 1, got {abs(z)!r}")
    if abs(cmath.phase(z)) < theta_min:
        raise ForwardAngleError(
            f"gauss_f1ab: |arg z| = {abs(cmath.phase(z)):.3g} < theta_min")
    if _is_pole(a):
        # terminating series
        total, term = 1.0 + 0j, 1.0 + 0j
        for n in range(int(-a.real)):
            term *= (a + n) / (b + n) * z
            total += term
        return total
    if method == "abel":
        est, err = _f1ab_abel(a, b, z, cfg)
        if err > cfg.tolerance * max(abs(est), 1e-300):
            raise ConvergenceError("gauss_f1ab: Abel extrapolation residual "
                                   f"{err:.3g} above tolerance", residual=err)
        return est
    if method != "auto":
        raise InvalidInput(f"unknown method {method!r}")
    w = z / (z - 1)
    if abs(w) <= PFAFF_RADIUS:
        return _f1ab_power_series(b - a, b, w, cfg.max_terms)[0] / (1 - z)
    return _hyp_continue(a, b, z, cfg.max_terms)
