"""Pressure excitation and ionization of a particle in a finite spherical square well."""

__version__ = "0.1.0"

from .eos import EosParams, bm_diff_approx, bm_diff_exact, bm_invert, bm_pressure, \
    density_jump_for_transition
from .errors import DomainError, NonMonotoneError, NotAllowedError, OutOfRangeError, \
    RoundingError, ToleranceNotReached, WellPressError
from .pressure import ReducedPressure, internal_pressure, ionization_pressure, to_physical, \
    transition_allowed, transition_pressure_energy, transition_pressure_xi, transition_report
from .well import BoundState, WellSpec, energy_from_xi, solve_l0, solve_l1, \
    well_strength_from_physical
