"""Internal, transition and ionization pressures of square-well levels.

All values are dimensionless coefficients of the reduced unit
``m V0 / (pi hbar^2)``. The well "volume" is ``pi a^2 V0``, so converting a
reduced value back with :func:`to_physical` yields an inverse area.

The step-function guards of the derivation (theta(n - n1), theta(V - V1))
are enforced as preconditions: only bound, non-marginal s-wave states are
accepted.
"""

from __future__ import annotations

from dataclasses import dataclass

from .constants import HBAR, PHYSICAL_PRESSURE_UNIT, REDUCED_PRESSURE_UNIT, reduced_pressure_scale
from .errors import DomainError, NotAllowedError
from .well import BoundState

#: floor for relative-residual denominators
EPS = 1e-30


@dataclass(frozen=True)
class ReducedPressure:
    value: float
    unit: str = REDUCED_PRESSURE_UNIT

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class PhysicalPressure:
    value: float
    unit: str = PHYSICAL_PRESSURE_UNIT
    note: str = "well volume is area x energy, so this pressure is an inverse area"


@dataclass(frozen=True)
class TransitionReport:
    initial: BoundState
    final: BoundState
    allowed: bool
    pressure_xi_form: ReducedPressure
    pressure_energy_form: ReducedPressure
    cross_check_residual: float


def _check_bound(state: BoundState):
    if state.l != 0:
        raise DomainError(f"pressures are defined for l = 0 levels only, got l = {state.l}")
    if not (state.xi > 0 and state.xi * state.xi < state.n):
        raise DomainError(f"state xi = {state.xi!r}, n = {state.n} is not bound")
    if state.marginal:
        raise DomainError(f"state n = {state.n}, branch {state.branch} is marginal (|E| ~ 0)")


def internal_pressure(state: BoundState) -> ReducedPressure:
    """Internal pressure ``2 xi^2 / n^2`` of a level."""
    _check_bound(state)
    return ReducedPressure(2.0 * state.xi**2 / state.n**2)


def ratio_squared(s1: BoundState, s2: BoundState) -> float:
    """``(xi2/xi1 * n1/n2)^2``; a transition s1 -> s2 is allowed when this is <= 1."""
    return (s2.xi / s1.xi * s1.n / s2.n) ** 2


def transition_allowed(s1: BoundState, s2: BoundState) -> bool:
    """True when the external pressure for s1 -> s2 is non-negative."""
    _check_bound(s1)
    _check_bound(s2)
    return ratio_squared(s1, s2) <= 1.0


def transition_pressure_xi(s1: BoundState, s2: BoundState, check: bool = True) -> ReducedPressure:
    """Transition pressure written through the roots ``xi``.

    ``2 (xi1/n1)^2 [1 - (n1/n2)^2 (xi2/xi1)^2]``, algebraically equal to
    ``internal_pressure(s1) - internal_pressure(s2)``. With ``check=False``
    a forbidden transition returns its negative value instead of raising.
    """
    _check_bound(s1)
    _check_bound(s2)
    r2 = ratio_squared(s1, s2)
    if check and r2 > 1.0:
        raise NotAllowedError(
            f"transition n={s1.n} -> n={s2.n} needs negative pressure (ratio^2 = {r2:.6g} > 1)"
        )
    return ReducedPressure(2.0 * (s1.xi / s1.n) ** 2 * (1.0 - r2))


def energy_form_pressure(n1: float, energy_fraction1: float, n2: float,
                         energy_fraction2: float) -> float:
    """Transition pressure from level energies, as a bare float.

    ``(2/n1)(1 - e1) [1 - (n1/n2)(1 - e2)/(1 - e1)]`` with ``e = |E|/V0``.
    ``n2`` may be ``math.inf``; with ``e2 = 1`` this is the ionization limit.
    """
    gap1 = 1.0 - energy_fraction1
    if gap1 <= 0:
        raise DomainError("|E1| = V0: the initial level sits at the bottom of the well")
    gap2 = 1.0 - energy_fraction2
    return (2.0 / n1) * gap1 * (1.0 - (n1 / n2) * (gap2 / gap1))


def transition_pressure_energy(s1: BoundState, s2: BoundState, check: bool = True) -> ReducedPressure:
    """Transition pressure from the binding-energy fractions of both levels."""
    _check_bound(s1)
    _check_bound(s2)
    if check and not transition_allowed(s1, s2):
        raise NotAllowedError(
            f"transition n={s1.n} -> n={s2.n} needs negative pressure "
            f"(ratio^2 = {ratio_squared(s1, s2):.6g} > 1)"
        )
    return ReducedPressure(energy_form_pressure(s1.n, s1.energy_fraction, s2.n, s2.energy_fraction))


def ionization_pressure(state: BoundState) -> ReducedPressure:
    """Pressure that pushes the level out of the well, ``(2/n)(1 - |E|/V0)``.

    Equals :func:`internal_pressure` because ``1 - |E|/V0 = xi^2/n``.
    """
    _check_bound(state)
    return ReducedPressure((2.0 / state.n) * (1.0 - state.energy_fraction))


def relative_residual(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), EPS)


def transition_report(s1: BoundState, s2: BoundState) -> TransitionReport:
    """Both transition-pressure forms for s1 -> s2, without raising on forbidden pairs."""
    allowed = transition_allowed(s1, s2)
    p_xi = transition_pressure_xi(s1, s2, check=False)
    p_e = transition_pressure_energy(s1, s2, check=False)
    return TransitionReport(
        initial=s1, final=s2, allowed=allowed,
        pressure_xi_form=p_xi, pressure_energy_form=p_e,
        cross_check_residual=relative_residual(p_xi.value, p_e.value),
    )


def to_physical(p: ReducedPressure | float, m: float, V0: float, hbar: float = HBAR) -> PhysicalPressure:
    """Multiply a reduced pressure by ``m V0 / (pi hbar^2)``; result in m^-2."""
    if m <= 0 or V0 <= 0:
        raise DomainError("mass and depth must be positive")
    value = p.value if isinstance(p, ReducedPressure) else float(p)
    return PhysicalPressure(value * reduced_pressure_scale(m, V0, hbar))


__all__ = [
    "EPS", "PhysicalPressure", "ReducedPressure", "TransitionReport", "energy_form_pressure",
    "internal_pressure", "ionization_pressure", "ratio_squared", "relative_residual",
    "to_physical", "transition_allowed", "transition_pressure_energy",
    "transition_pressure_xi", "transition_report",
]
