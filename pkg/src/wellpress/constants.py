"""Physical constants and the reduced-unit conversion layer.

Everything in the solver works with dimensionless numbers. This module is
the only place SI values enter, so a config file can swap ``hbar`` (or run
in natural units with ``hbar = 1``) without touching the numerics.
"""

from __future__ import annotations

import math

from scipy import constants as _codata

HBAR: float = _codata.hbar
ELECTRON_MASS: float = _codata.m_e
ELECTRON_VOLT: float = _codata.electron_volt

#: tag carried by every reduced pressure
REDUCED_PRESSURE_UNIT = "mV0/(pi*hbar^2)"
PHYSICAL_PRESSURE_UNIT = "m^-2"


def well_strength(mass: float, depth: float, radius: float, hbar: float = HBAR) -> float:
    """Return the dimensionless well strength ``2 m V0 a^2 / hbar^2``."""
    return 2.0 * mass * depth * radius**2 / hbar**2


def radius_for_strength(strength: float, mass: float, depth: float, hbar: float = HBAR) -> float:
    """Invert :func:`well_strength` for the radius."""
    return math.sqrt(strength * hbar**2 / (2.0 * mass * depth))


def reduced_pressure_scale(mass: float, depth: float, hbar: float = HBAR) -> float:
    """Size of one reduced pressure unit, ``m V0 / (pi hbar^2)``, in m^-2.

    The well "volume" is pi a^2 V0 (area times energy), so the pressure it
    induces has dimensions of inverse area rather than force per area.
    """
    return mass * depth / (math.pi * hbar**2)
