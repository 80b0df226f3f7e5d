"""High-precision reference values built directly from mpmath.

These re-derive the closed expressions from their definitions and share no
code with the package.
"""

import mpmath as mp

mp.mp.dps = 40


def kin(gamma, energy, rest=1):
    E, R, g = mp.mpf(energy), mp.mpf(rest), mp.mpf(gamma)
    k = mp.sqrt((E + R) * (E - R))
    return {"k": k, "beta": g * E / k, "beta_prime": g * R / k, "v": k / E}


def s_exponent(j, nu, gamma, approx=False):
    kappa = mp.mpf(j) + mp.mpf(nu)
    return abs(kappa) if approx else mp.sqrt(kappa**2 - mp.mpf(gamma) ** 2)


def s_closed(j, nu, gamma, energy, approx=False):
    """(j+nu+i b') Gamma(s - i b)/Gamma(s + 1 + i b) exp(i pi (j - s))."""
    K = kin(gamma, energy)
    b, bp = K["beta"], K["beta_prime"]
    kappa = mp.mpf(j) + mp.mpf(nu)
    s = s_exponent(j, nu, gamma, approx)
    return complex((kappa + 1j * bp) * mp.gamma(s - 1j * b) / mp.gamma(s + 1 + 1j * b)
                   * mp.expjpi(mp.mpf(j) - s))


def s_supercritical_mean(nu, gamma, energy):
    """Mean of the two j = -1/2 continuations s = +-i gamma'."""
    K = kin(gamma, energy)
    b, bp = K["beta"], K["beta_prime"]
    gp = mp.sqrt(mp.mpf(gamma) ** 2 - (mp.mpf(0.5) - mp.mpf(nu)) ** 2)
    pref = bp + 1j * (mp.mpf(0.5) - mp.mpf(nu))
    s1 = pref * mp.gamma(-1j * b + 1j * gp) / mp.gamma(1 + 1j * b + 1j * gp) * mp.exp(gp * mp.pi)
    s2 = pref * mp.gamma(-1j * b - 1j * gp) / mp.gamma(1 + 1j * b - 1j * gp) * mp.exp(-gp * mp.pi)
    return complex((s1 + s2) / 2), complex(s1), complex(s2)


def kummer_series(a, b, z, nterms=200):
    """Direct series with a crude geometric remainder bound."""
    a, b, z = mp.mpc(a), mp.mpc(b), mp.mpc(z)
    term, total = mp.mpc(1), mp.mpc(1)
    for n in range(nterms):
        term *= (a + n) / (b + n) * z / (n + 1)
        total += term
    return complex(total), float(abs(term))


def bound_energy(n, j, nu, gamma):
    s = s_exponent(j, nu, gamma)
    return float(1 / mp.sqrt(1 + mp.mpf(gamma) ** 2 / (n + s) ** 2))
