"""Discrete spectrum for the attractive case (gamma > 0).

E(n, j) = mu c^2 / sqrt(1 + gamma^2 / (n + s)^2), s = sqrt((j + nu)^2 - gamma^2),
with radial quantum number n >= 0 and the n = 0 level present only for
j > 0.  At nu = 0 the levels with n >= 1 are doubly degenerate in +-j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ChannelKindError, InvalidInput
from .physics import Channel, channel_exponent

__all__ = ["BoundLevel", "energy_level", "spectrum", "DEGENERACY_TOL"]

# relative (to the rest energy) tolerance for merging +-j levels
DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class BoundLevel:
    n: int
    j: float
    energy: float
    degeneracy: int = 1

    @property
    def j_label(self):
        return Channel.from_j(self.j).j_label


def _check(n, ch, gamma):
    if not gamma > 0:
        raise InvalidInput("bound states need an attractive coupling, gamma > 0")
    if int(n) != n or n < 0:
        raise InvalidInput(f"radial quantum number must be a non-negative integer, got {n}")
    if n == 0 and ch.j < 0:
        raise InvalidInput("n = 0 admits only j > 0")


def energy_level(n, ch, split, gamma, rest_energy=1.0):
    """Energy of level (n, j); supercritical channels are rejected."""
    _check(n, ch, gamma)
    exp_ = channel_exponent(ch, split, gamma)
    if not exp_.is_subcritical:
        raise ChannelKindError(
            f"channel j={ch.j_label} is supercritical; bound levels need a "
            "boundary condition at the origin that is not supported")
    x = gamma / (n + exp_.s)
    return rest_energy / math.sqrt(1.0 + x * x)


def spectrum(n_max, j_max, split, gamma, rest_energy=1.0):
    """All levels with n <= n_max and |j| <= j_max, sorted by energy.

    ``j_max`` is a half-odd integer (float, Fraction or "5/2").  Supercritical
    channels raise ``ChannelKindError``.
    """
    top = Channel.from_j(j_max)
    if top.j < 0:
        raise InvalidInput("j_max must be positive")
    if int(n_max) != n_max or n_max < 0:
        raise InvalidInput("n_max must be a non-negative integer")
    levels = []
    for n in range(int(n_max) + 1):
        row = {}
        for m in range(-top.m - 1, top.m + 1):
            ch = Channel(m)
            if n == 0 and ch.j < 0:
                continue
            row[m] = energy_level(n, ch, split, gamma, rest_energy)
        if split.nu == 0 and n >= 1:
            # merge (n, j) with (n, -j); keep the positive-j label
            for m in range(0, top.m + 1):
                e_pos, e_neg = row[m], row.pop(-m - 1)
                if abs(e_pos - e_neg) > DEGENERACY_TOL * rest_energy:
                    raise ArithmeticError("expected +-j degeneracy at nu = 0")
                levels.append(BoundLevel(n, Channel(m).j, e_pos, 2))
        else:
            levels.extend(BoundLevel(n, Channel(m).j, e, 1) for m, e in row.items())
    levels.sort(key=lambda lv: (lv.energy, lv.n, lv.j))
    return levels
