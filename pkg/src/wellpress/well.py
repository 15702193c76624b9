"""Bound states of the finite spherical square well.

The well is described by one dimensionless number, the well strength
``n = 2 m V0 a^2 / hbar^2``. The interior and exterior wave numbers scaled by
the radius, ``xi = alpha a`` and ``eta = beta a``, lie on the circle
``xi^2 + eta^2 = n``; the matching condition at ``r = a`` picks out the
discrete levels.

``n`` is treated as an integer throughout and also used as the "main quantum
number" that labels a level in the pressure formulas. The two roles are
deliberately kept as one value.

    >>> [round(s.xi, 4) for s in solve_l0(3)]
    [1.7143]
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .constants import HBAR, well_strength
from .errors import DomainError, RoundingError, ToleranceNotReached

#: bisection stops once the bracket is narrower than this
XTOL = 1e-13
MAXITER = 200
#: distance kept from the poles of cot at multiples of pi
POLE_OFFSET = 1e-9
#: levels with n - xi^2 below this are flagged as marginal
MARGINAL_GAP = 1e-9
DEFAULT_TOL = 1e-8
L1_POINTS_PER_UNIT = 10_000


@dataclass(frozen=True)
class WellSpec:
    """Strength of a square well.

    ``n`` is always present. When the physical triple (``mass`` in kg,
    ``depth`` in J, ``radius`` in m) is also given, it must reproduce ``n``
    to within ``rounding_tol``.
    """

    n: int
    mass: float | None = None
    depth: float | None = None
    radius: float | None = None
    strength: float | None = None
    rounding_tol: float = 1e-6
    hbar: float = field(default=HBAR, repr=False)

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise DomainError(f"well strength n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        triple = (self.mass, self.depth, self.radius)
        if all(v is None for v in triple):
            return
        if any(v is None for v in triple):
            raise DomainError("mass, depth and radius must be given together")
        if min(triple) <= 0:
            raise DomainError("mass, depth and radius must be positive")
        exact = well_strength(self.mass, self.depth, self.radius, self.hbar)
        if abs(exact - self.n) > self.rounding_tol:
            raise RoundingError(
                f"2 m V0 a^2 / hbar^2 = {exact!r} is not within {self.rounding_tol} of n = {self.n}"
            )
        object.__setattr__(self, "strength", exact)

    @property
    def has_physical(self) -> bool:
        return self.mass is not None


@dataclass(frozen=True)
class BoundState:
    """One solved level of the well.

    ``branch`` is the index k of the interval the root was found in (for
    l = 0 it is ((2k+1) pi/2, (k+1) pi)); for l = 1 it counts roots in
    ascending order. ``energy_fraction`` is the binding energy ``|E|/V0``.
    """

    l: int
    branch: int
    xi: float
    eta: float
    n: int
    energy_fraction: float
    residual: float = 0.0
    marginal: bool = False


def well_strength_from_physical(m: float, V0: float, a: float, rounding_tol: float = 1e-6,
                                hbar: float = HBAR) -> WellSpec:
    """Build a :class:`WellSpec` from mass, depth and radius.

    Raises :class:`RoundingError` if ``2 m V0 a^2 / hbar^2`` is farther than
    ``rounding_tol`` from the nearest integer.
    """
    if m <= 0 or V0 <= 0 or a <= 0:
        raise DomainError("mass, depth and radius must be positive")
    exact = well_strength(m, V0, a, hbar)
    n = max(1, int(round(exact)))
    return WellSpec(n=n, mass=m, depth=V0, radius=a, rounding_tol=rounding_tol, hbar=hbar)


def _as_spec(spec) -> WellSpec:
    return spec if isinstance(spec, WellSpec) else WellSpec(int(spec))


def branch_count(n: int) -> int:
    """Number of l = 0 levels, ``#{k >= 0 : (2k+1) pi/2 < sqrt(n)}``."""
    root = math.sqrt(n)
    k = 0
    while (2 * k + 1) * math.pi / 2 < root:
        k += 1
    return k


def energy_from_xi(spec, xi: float) -> float:
    """Binding energy fraction ``|E|/V0 = 1 - xi^2/n`` of a bound level."""
    n = _as_spec(spec).n
    if not (xi > 0 and xi * xi < n):
        raise DomainError(f"xi = {xi!r} is not a bound root for n = {n} (need 0 < xi^2 < n)")
    return 1.0 - xi * xi / n


def l0_condition(xi, n):
    """s-wave matching function ``sqrt(n - xi^2) + xi cot(xi)``; zero at a level."""
    xi = np.asarray(xi, dtype=float)
    out = np.sqrt(np.maximum(n - xi * xi, 0.0)) + xi * np.cos(xi) / np.sin(xi)
    return out if out.ndim else float(out)


def _l1_interior(xi):
    # cot(xi)/xi - 1/xi^2, rewritten to avoid cancellation at small xi
    xi = np.asarray(xi, dtype=float)
    small = np.abs(xi) < 1e-2
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (xi * np.cos(xi) - np.sin(xi)) / (xi * xi * np.sin(xi))
    x2 = xi * xi
    series = -(1.0 / 3 + x2 / 45 + 2 * x2 * x2 / 945 + x2 * x2 * x2 / 4725)
    return np.where(small, series, direct)


def l1_condition(xi, n):
    """p-wave matching function ``cot(xi)/xi - 1/xi^2 - 1/eta - 1/eta^2``."""
    xi = np.asarray(xi, dtype=float)
    eta = np.sqrt(np.maximum(n - xi * xi, 0.0))
    with np.errstate(divide="ignore"):
        out = _l1_interior(xi) - (1.0 / eta + 1.0 / (eta * eta))
    return out if out.ndim else float(out)


def bisect(f: Callable[[float], float], lo: float, hi: float, xtol: float = XTOL,
           maxiter: int = MAXITER) -> float:
    """Refine a sign-changing bracket ``[lo, hi]`` of ``f`` by bisection.

    Stops when the bracket is narrower than ``xtol`` or can no longer be
    split in floating point. Raises :class:`ToleranceNotReached` if neither
    happens within ``maxiter`` halvings.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"f does not change sign on [{lo!r}, {hi!r}]")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if hi - lo < xtol or mid <= lo or mid >= hi:
            return mid
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    raise ToleranceNotReached(f"bracket still {hi - lo:.3e} wide after {maxiter} bisections")


def _newton_polish(f, xi, lo, hi, h=1e-7):
    fx = f(xi)
    slope = (f(xi + h) - f(xi - h)) / (2 * h)
    if slope == 0 or not math.isfinite(slope):
        return xi
    cand = xi - fx / slope
    if lo <= cand <= hi and abs(f(cand)) < abs(fx):
        return cand
    return xi


def _make_state(l, branch, xi, n, residual, tol):
    if abs(residual) >= tol:
        raise ToleranceNotReached(
            f"l={l} root near xi={xi!r} for n={n} has residual {residual:.3e} >= tol {tol:.3e}"
        )
    eta = math.sqrt(n - xi * xi)
    return BoundState(
        l=l, branch=branch, xi=xi, eta=eta, n=n,
        energy_fraction=energy_from_xi(n, xi),
        residual=residual,
        marginal=(n - xi * xi) < MARGINAL_GAP,
    )


def solve_l0(spec, tol: float = DEFAULT_TOL, polish: bool = False) -> list[BoundState]:
    """All s-wave levels of the well, ascending in ``xi``.

    Each branch ((2k+1) pi/2, min((k+1) pi, sqrt(n))) holds exactly one root
    because the matching function is positive at the left end and negative
    at the right end. Returns an empty list when ``sqrt(n) <= pi/2``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = _as_spec(spec).n
    root_n = math.sqrt(n)
    f = lambda x: l0_condition(x, n)  # noqa: E731
    states = []
    for k in range(branch_count(n)):
        lo = (2 * k + 1) * math.pi / 2
        hi = min((k + 1) * math.pi - POLE_OFFSET, root_n)
        xi = bisect(f, lo, hi)
        if polish:
            xi = _newton_polish(f, xi, lo, hi)
        states.append(_make_state(0, k, xi, n, f(xi), tol))
    return states


def _l1_segments(n: int):
    # pole-free pieces of (0, sqrt(n)); cot has poles at k pi, the exterior
    # term blows up at eta = 0
    top = math.sqrt(n) - POLE_OFFSET
    k = 0
    while k * math.pi < top:
        lo = k * math.pi + (POLE_OFFSET if k else 0.0)
        hi = min((k + 1) * math.pi - POLE_OFFSET, top)
        if hi > lo:
            yield lo, hi
        k += 1


def solve_l1(spec, tol: float = DEFAULT_TOL, points_per_unit: int = L1_POINTS_PER_UNIT,
             polish: bool = False) -> list[BoundState]:
    """All p-wave levels of the well, ascending in ``xi``.

    The matching function is scanned on a grid of ``points_per_unit`` points
    per unit of ``xi`` inside each pole-free segment; every sign change is
    refined by bisection. The first level appears once ``sqrt(n) > pi``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = _as_spec(spec).n
    f = lambda x: l1_condition(x, n)  # noqa: E731
    roots = []
    for lo, hi in _l1_segments(n):
        count = max(2, math.ceil((hi - lo) * points_per_unit) + 1)
        grid = np.linspace(lo, hi, count)
        vals = l1_condition(grid, n)
        for i in np.flatnonzero(vals == 0.0):
            roots.append(float(grid[i]))
        for i in np.flatnonzero(vals[:-1] * vals[1:] < 0):
            a, b = float(grid[i]), float(grid[i + 1])
            xi = bisect(f, a, b)
            if polish:
                xi = _newton_polish(f, xi, a, b)
            roots.append(xi)
    roots.sort()
    return [_make_state(1, i, xi, n, f(xi), tol) for i, xi in enumerate(roots)]


def solve(spec, l: int = 0, **kwargs) -> list[BoundState]:
    """Dispatch to :func:`solve_l0` or :func:`solve_l1`."""
    if l == 0:
        return solve_l0(spec, **kwargs)
    if l == 1:
        return solve_l1(spec, **kwargs)
    raise DomainError(f"only l = 0 and l = 1 are supported, got l = {l}")
