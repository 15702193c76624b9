"""Third-order Birch-Murnaghan equation of state in density form.

``P(x) = 3 B0/2 [1 + 3/4 (B0' - 4)(x^(2/3) - 1)] (x^(7/3) - x^(5/3))`` with
``x = rho/rho0``. Pressures come out in whatever unit ``B0`` is given in;
densities only enter through ratios, so any consistent unit works.

No material constants are built in. Parameters come from the caller or from
a material file (see :func:`load_materials`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, NonMonotoneError, OutOfRangeError

DEFAULT_X_MAX = 10.0
INVERT_XTOL = 1e-12
MONOTONE_SAMPLES = 1000


@dataclass(frozen=True)
class EosParams:
    B0: float
    B0prime: float
    rho0: float
    name: str = ""

    def __post_init__(self):
        if not self.B0 > 0:
            raise DomainError(f"B0 must be positive, got {self.B0!r}")
        if not self.rho0 > 0:
            raise DomainError(f"rho0 must be positive, got {self.rho0!r}")


@dataclass(frozen=True)
class DensityJump:
    rho1: float
    rho2: float
    delta: float
    exact_diff: float
    approx_diff: float

    @property
    def approx_residual(self) -> float:
        """``exact_diff - approx_diff``; reported, not expected to be small."""
        return self.exact_diff - self.approx_diff


def bm_pressure(params: EosParams, x):
    """Birch-Murnaghan pressure at compression ratio ``x`` (scalar or array).

    Powers are built from ``cbrt(x)`` so perfect cubes give exact results:

    >>> bm_pressure(EosParams(1.0, 4.0, 1.0), 8.0)
    144.0
    """
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("density ratio x must be positive")
    c = np.cbrt(x)
    x23 = c * c
    bracket = 1.0 + 0.75 * (params.B0prime - 4.0) * (x23 - 1.0)
    out = (1.5 * bracket * (x * x * c - x * x23)) * params.B0
    return out if out.ndim else float(out)


def bm_diff_exact(params: EosParams, rho1: float, rho2: float) -> float:
    """``P(rho2) - P(rho1)`` evaluated from the full equation of state."""
    if rho1 <= 0 or rho2 <= 0:
        raise DomainError("densities must be positive")
    return bm_pressure(params, rho2 / params.rho0) - bm_pressure(params, rho1 / params.rho0)


def bm_diff_approx(params: EosParams, rho1: float, rho2: float) -> float:
    """Truncated expansion of the pressure difference across a density jump.

    ``(B0'/4 - 1) [9 B0/2 (D/rho0)^3 + 27 B0/2 (rho1/rho0)(D/rho0)^2]`` with
    ``D = rho2 - rho1``. Only these two terms are kept; there is no linear
    ``B0 D/rho0`` term, so this is not a convergent approximation of
    :func:`bm_diff_exact` and the two are compared, never equated.
    """
    if rho1 <= 0 or rho2 <= 0:
        raise DomainError("densities must be positive")
    d = (rho2 - rho1) / params.rho0
    r1 = rho1 / params.rho0
    return (params.B0prime / 4.0 - 1.0) * (4.5 * params.B0 * d**3 + 13.5 * params.B0 * r1 * d**2)


def _check_monotone(params, x_min, x_max, samples=MONOTONE_SAMPLES):
    grid = np.linspace(x_min, x_max, samples)
    p = bm_pressure(params, grid)
    if not np.all(np.diff(p) > 0):
        bad = float(grid[1:][np.diff(p) <= 0][0])
        raise NonMonotoneError(
            f"P(x) is not increasing on [{x_min}, {x_max}] (first failure near x = {bad:.6g}); "
            "lower x_max"
        )


def bm_invert(params: EosParams, P: float, x_max: float = DEFAULT_X_MAX, x_min: float = 1.0,
              xtol: float = INVERT_XTOL) -> float:
    """Compression ratio ``x`` in ``[x_min, x_max]`` with ``P(x) = P``.

    The default interval starts at ``x = 1`` (zero pressure), i.e. the
    compression branch. Raises :class:`NonMonotoneError` if the equation of
    state is not increasing on a 1000-point sample of the interval and
    :class:`OutOfRangeError` if ``P`` is not reached inside it.
    """
    if not x_max > x_min > 0:
        raise DomainError("need 0 < x_min < x_max")
    _check_monotone(params, x_min, x_max)
    p_lo = bm_pressure(params, x_min)
    p_hi = bm_pressure(params, x_max)
    if P < p_lo:
        raise OutOfRangeError(f"P = {P!r} is below P(x_min) = {p_lo!r}")
    if P > p_hi:
        raise OutOfRangeError(f"P = {P!r} exceeds P(x_max = {x_max}) = {p_hi!r}")
    if P == p_lo:
        return x_min
    if P == p_hi:
        return x_max
    lo, hi = x_min, x_max
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if bm_pressure(params, mid) < P:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def density_jump_for_transition(params: EosParams, rho1: float, Ptr: float,
                                x_max: float = DEFAULT_X_MAX) -> DensityJump:
    """Density ``rho2`` reached when the pressure rises by ``Ptr`` from ``rho1``.

    ``Ptr`` must already be in the pressure unit of ``B0``: a reduced well
    pressure is an inverse area and has to be converted by the caller.
    """
    if Ptr < 0:
        raise DomainError("transition pressure must be non-negative")
    if rho1 <= 0:
        raise DomainError("rho1 must be positive")
    x1 = rho1 / params.rho0
    if Ptr == 0:
        rho2 = rho1
    else:
        target = bm_pressure(params, x1) + Ptr
        x2 = bm_invert(params, target, x_max=x_max, x_min=min(1.0, x1))
        rho2 = x2 * params.rho0
    return DensityJump(
        rho1=rho1, rho2=rho2, delta=rho2 - rho1,
        exact_diff=bm_diff_exact(params, rho1, rho2),
        approx_diff=bm_diff_approx(params, rho1, rho2),
    )


def load_materials(path) -> dict[str, EosParams]:
    """Read a material-parameter file.

    One record per line: ``name B0 B0prime rho0`` separated by commas or
    whitespace. Lines starting with ``#`` hold the header, where the units are
    documented, and are skipped along with blank lines::

        # units: B0 in GPa, rho0 in g/cm^3
        # name, B0, B0prime, rho0
        sample_a, 160.0, 4.1, 3.58
    """
    materials = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f for f in line.replace(",", " ").split() if f]
        if len(fields) != 4:
            raise ValueError(f"{path}:{lineno}: expected 4 fields (name B0 B0prime rho0), got {len(fields)}")
        name = fields[0]
        try:
            b0, b0p, rho0 = (float(f) for f in fields[1:])
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
        if not all(math.isfinite(v) for v in (b0, b0p, rho0)):
            raise ValueError(f"{path}:{lineno}: non-finite parameter")
        materials[name] = EosParams(b0, b0p, rho0, name=name)
    return materials
