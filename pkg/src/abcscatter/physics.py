"""Problem definition and kinematics.

Natural units throughout: hbar = c = 1.  Energies are measured in the
same unit as ``rest_energy`` (mu c^2, default 1), wave numbers in units of
energy.  Channels are indexed by the integer m = j - 1/2 so half-integers
are never compared in floating point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import CriticalChannelError, InvalidInput, SubThresholdError

__all__ = [
    "PhysicalConfig",
    "FluxSplit",
    "Kinematics",
    "Channel",
    "ChannelKind",
    "ChannelExponent",
    "split_flux",
    "kinematics",
    "channel_exponent",
    "CRITICAL_TOL",
]

CRITICAL_TOL = 1e-12


@dataclass(frozen=True)
class PhysicalConfig:
    """Dimensionless coupling ``gamma`` = Z q^2 / hbar c, flux
    ``alpha`` = q phi / 2 pi hbar c, and the rest energy mu c^2."""

    gamma: float
    alpha: float
    rest_energy: float = 1.0

    def __post_init__(self):
        for name in ("gamma", "alpha", "rest_energy"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInput(f"{name} must be finite")
        if not abs(self.gamma) < 0.5:
            raise InvalidInput(f"|gamma| must be < 1/2, got {self.gamma}")
        if not self.rest_energy > 0:
            raise InvalidInput("rest_energy must be positive")

    @property
    def split(self):
        return split_flux(self.alpha)


@dataclass(frozen=True)
class FluxSplit:
    m0: int
    nu: float


@dataclass(frozen=True)
class Kinematics:
    energy: float
    rest_energy: float
    gamma: float
    k1: float
    k2: float
    k: float
    beta: float
    beta_prime: float
    v_over_c: float

    @property
    def beta_prime_over_beta(self):
        """beta'/beta = sqrt(1 - v^2/c^2), finite even when gamma = 0."""
        return self.rest_energy / self.energy


@dataclass(frozen=True, order=True)
class Channel:
    """Partial wave with total angular momentum j = m + 1/2."""

    m: int

    @classmethod
    def from_j(cls, j):
        twice = Fraction(j) * 2 if not isinstance(j, float) else Fraction(2 * j)
        if twice.denominator != 1 or twice.numerator % 2 == 0:
            raise InvalidInput(f"j must be a half-odd integer, got {j}")
        return cls((twice.numerator - 1) // 2)

    @property
    def j(self):
        return self.m + 0.5

    @property
    def j_label(self):
        return f"{2 * self.m + 1}/2"


class ChannelKind(enum.Enum):
    SUBCRITICAL = "subcritical"
    SUPERCRITICAL = "supercritical"


@dataclass(frozen=True)
class ChannelExponent:
    kind: ChannelKind
    s: float | None = None
    gamma_prime: float | None = None

    @property
    def is_subcritical(self):
        return self.kind is ChannelKind.SUBCRITICAL


def split_flux(alpha):
    """alpha = m0 + nu with integer m0 and -1/2 < nu <= 1/2."""
    if not math.isfinite(alpha):
        raise InvalidInput("alpha must be finite")
    m0 = math.ceil(alpha - 0.5)
    return FluxSplit(m0=int(m0), nu=alpha - m0)


def kinematics(cfg, energy):
    """Wave numbers and Coulomb parameters at total energy ``energy``."""
    R = cfg.rest_energy
    if not math.isfinite(energy) or energy <= R:
        raise SubThresholdError(
            f"energy {energy} must exceed the rest energy {R}")
    k1 = energy + R
    k2 = energy - R
    k = math.sqrt(k1 * k2)
    return Kinematics(
        energy=energy,
        rest_energy=R,
        gamma=cfg.gamma,
        k1=k1,
        k2=k2,
        k=k,
        beta=cfg.gamma * energy / k,
        beta_prime=cfg.gamma * R / k,
        v_over_c=k / energy,
    )


def channel_exponent(ch, split, gamma):
    """Classify the channel by the sign of (j + nu)^2 - gamma^2.

    Subcritical channels carry the real exponent s; supercritical ones the
    gamma' with s = +- i gamma'.
    """
    kappa = abs(ch.j + split.nu)
    g = abs(gamma)
    if abs(kappa * kappa - g * g) <= CRITICAL_TOL:
        raise CriticalChannelError(
            f"channel j={ch.j_label}: (j+nu)^2 = gamma^2 is not supported")
    root = math.sqrt(abs(kappa - g)) * math.sqrt(kappa + g)
    if kappa > g:
        return ChannelExponent(ChannelKind.SUBCRITICAL, s=root)
    return ChannelExponent(ChannelKind.SUPERCRITICAL, gamma_prime=root)
