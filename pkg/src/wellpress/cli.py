"""wellpress command line.

    wellpress levels --n 12 --l 0,1
    wellpress transition --n1 3 --n2 4
    wellpress ionize --n 3 --format json
    wellpress eos pressure --b0 1 --b0p 4 --x 8
    wellpress sweep --n-min 3 --n-max 22 --pairs all-allowed --out sweep.csv
    wellpress verify

Data goes to stdout, diagnostics to stderr. Exit codes: 0 ok, 1 verification
failure, 2 usage error, 3 transition not allowed, 4 no bound state, 5 EOS
inversion out of range or non-monotone.
"""

from __future__ import annotations

import argparse
import configparser
import datetime
import sys
from pathlib import Path

from . import __version__
from . import eos as bm
from . import oracle
from . import pressure as pm
from .constants import HBAR, REDUCED_PRESSURE_UNIT
from .errors import DomainError, NonMonotoneError, OutOfRangeError, RoundingError, ToleranceNotReached
from .output import emit
from .well import DEFAULT_TOL, L1_POINTS_PER_UNIT, WellSpec, solve_l0, solve_l1, \
    well_strength_from_physical

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_NOT_ALLOWED = 3
EXIT_NO_LEVEL = 4
EXIT_EOS = 5

CONFIG_DEFAULTS = {
    "hbar": HBAR,
    "tol": DEFAULT_TOL,
    "rounding_tol": 1e-6,
    "l1_points_per_unit": float(L1_POINTS_PER_UNIT),
    "x_max": bm.DEFAULT_X_MAX,
}

LEVEL_COLUMNS = ["n", "l", "branch", "xi", "eta", "energy_fraction", "marginal"]
TRANSITION_COLUMNS = ["n1", "branch1", "xi1", "energy_fraction1", "n2", "branch2", "xi2",
                      "energy_fraction2", "allowed", "ratio_squared", "p_xi_form",
                      "p_energy_form", "cross_check_residual"]
IONIZE_COLUMNS = ["n", "branch", "xi", "energy_fraction", "p_ion"]
SWEEP_COLUMNS = ["n1", "n2", "xi1", "xi2", "p_tr", "p_ion_n1"]
VERIFY_COLUMNS = ["kind", "name", "count", "expected", "computed", "residual", "tolerance",
                  "passed", "note"]


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def load_config(path) -> dict:
    """Read a flat ``key = value`` file; unknown keys are an error."""
    parser = configparser.ConfigParser()
    try:
        parser.read_string("[wellpress]\n" + Path(path).read_text(encoding="utf-8"))
    except (OSError, configparser.Error) as exc:
        raise CliError(EXIT_USAGE, f"cannot read config {path}: {exc}") from None
    out = {}
    for key, raw in parser["wellpress"].items():
        if key not in CONFIG_DEFAULTS:
            raise CliError(EXIT_USAGE, f"unknown config key {key!r} in {path}")
        try:
            out[key] = float(raw)
        except ValueError:
            raise CliError(EXIT_USAGE, f"config key {key!r} is not a number: {raw!r}") from None
    return out


def _settings(args) -> dict:
    settings = dict(CONFIG_DEFAULTS)
    if args.config:
        settings.update(load_config(args.config))
    for key in CONFIG_DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def _meta(args):
    if not args.meta:
        return None
    return {
        "tool": "wellpress",
        "version": __version__,
        "command": " ".join(args.argv),
        "generated": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
    }


def _parse_l(text):
    try:
        values = sorted({int(v) for v in text.split(",") if v.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list drawn from 0,1, got {text!r}")
    if not values or any(v not in (0, 1) for v in values):
        raise argparse.ArgumentTypeError(f"expected a comma list drawn from 0,1, got {text!r}")
    return values


def _level(n, branch, tol):
    if n < 1:
        raise CliError(EXIT_USAGE, f"n must be >= 1, got {n}")
    states = solve_l0(n, tol=tol)
    if branch >= len(states):
        if not states:
            raise CliError(EXIT_NO_LEVEL, f"no bound state: n = {n} has no s-wave level")
        raise CliError(EXIT_NO_LEVEL, f"no bound state: n = {n} has only {len(states)} s-wave level(s)")
    state = states[branch]
    if state.marginal:
        raise CliError(EXIT_NO_LEVEL, f"level n = {n}, branch {branch} is marginal (|E| ~ 0)")
    return state


def _state_row(s):
    return {"n": s.n, "l": s.l, "branch": s.branch, "xi": s.xi, "eta": s.eta,
            "energy_fraction": s.energy_fraction, "marginal": s.marginal}


def cmd_levels(args, out):
    cfg = _settings(args)
    if args.n is not None:
        if args.n < 1:
            raise CliError(EXIT_USAGE, f"--n must be >= 1, got {args.n}")
        spec = WellSpec(args.n)
    else:
        if None in (args.mass, args.depth, args.radius):
            raise CliError(EXIT_USAGE, "give --n or all of --mass, --depth, --radius")
        try:
            spec = well_strength_from_physical(args.mass, args.depth, args.radius,
                                               rounding_tol=cfg["rounding_tol"], hbar=cfg["hbar"])
        except (RoundingError, DomainError) as exc:
            raise CliError(EXIT_USAGE, str(exc)) from None
    rows = []
    for l in args.l:
        if l == 0:
            states = solve_l0(spec, tol=cfg["tol"])
        else:
            states = solve_l1(spec, tol=cfg["tol"], points_per_unit=int(cfg["l1_points_per_unit"]))
        rows.extend(_state_row(s) for s in states)
    extra = {"n": spec.n}
    if spec.strength is not None:
        extra["strength_exact"] = spec.strength
    emit(out, args.format, LEVEL_COLUMNS, rows, "dimensionless", extra=extra, meta=_meta(args))
    return EXIT_OK


def cmd_transition(args, out):
    cfg = _settings(args)
    s1 = _level(args.n1, args.branch1, cfg["tol"])
    s2 = _level(args.n2, args.branch2, cfg["tol"])
    rep = pm.transition_report(s1, s2)
    if not rep.allowed:
        raise CliError(EXIT_NOT_ALLOWED,
                       f"transition n={args.n1} -> n={args.n2} not allowed: "
                       f"(xi2 n1 / (xi1 n2))^2 = {pm.ratio_squared(s1, s2):.6g} > 1")
    row = {"n1": s1.n, "branch1": s1.branch, "xi1": s1.xi, "energy_fraction1": s1.energy_fraction,
           "n2": s2.n, "branch2": s2.branch, "xi2": s2.xi, "energy_fraction2": s2.energy_fraction,
           "allowed": rep.allowed, "ratio_squared": pm.ratio_squared(s1, s2),
           "p_xi_form": rep.pressure_xi_form.value, "p_energy_form": rep.pressure_energy_form.value,
           "cross_check_residual": rep.cross_check_residual}
    emit(out, args.format, TRANSITION_COLUMNS, [row], REDUCED_PRESSURE_UNIT, meta=_meta(args))
    return EXIT_OK


def cmd_ionize(args, out):
    cfg = _settings(args)
    s = _level(args.n, args.branch, cfg["tol"])
    p = pm.ionization_pressure(s)
    row = {"n": s.n, "branch": s.branch, "xi": s.xi, "energy_fraction": s.energy_fraction,
           "p_ion": p.value}
    columns = list(IONIZE_COLUMNS)
    if args.mass is not None or args.depth is not None:
        if args.mass is None or args.depth is None:
            raise CliError(EXIT_USAGE, "--mass and --depth must be given together")
        try:
            phys = pm.to_physical(p, args.mass, args.depth, hbar=cfg["hbar"])
        except DomainError as exc:
            raise CliError(EXIT_USAGE, str(exc)) from None
        row["p_ion_physical"] = phys.value
        row["physical_unit"] = phys.unit
        columns += ["p_ion_physical", "physical_unit"]
    notes = []
    for n_pub, published in oracle.PUBLISHED_DEVIATIONS:
        if s.n == n_pub and s.branch == 0:
            notes.append(f"published value for n = {n_pub} is {published}, "
                         f"which this formula does not reproduce (computed {p.value:.4f})")
    for note in notes:
        print(f"note: {note}", file=sys.stderr)
    extra = {"notes": notes} if notes else None
    emit(out, args.format, columns, [row], REDUCED_PRESSURE_UNIT, extra=extra, meta=_meta(args))
    return EXIT_OK


def _eos_params(args):
    if args.material:
        if not args.material_file:
            raise CliError(EXIT_USAGE, "--material needs --material-file")
        try:
            materials = bm.load_materials(args.material_file)
        except (OSError, ValueError) as exc:
            raise CliError(EXIT_USAGE, str(exc)) from None
        if args.material not in materials:
            raise CliError(EXIT_USAGE, f"material {args.material!r} not in {args.material_file}")
        return materials[args.material]
    if args.b0 is None or args.b0p is None:
        raise CliError(EXIT_USAGE, "give --b0 and --b0p, or --material-file with --material")
    return bm.EosParams(args.b0, args.b0p, args.rho0)


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise CliError(EXIT_USAGE, f"eos {args.eos_cmd} needs {', '.join(missing)}")


def cmd_eos(args, out):
    cfg = _settings(args)
    try:
        params = _eos_params(args)
        sub = args.eos_cmd
        if sub == "pressure":
            if args.x is None and args.rho is None:
                raise CliError(EXIT_USAGE, "eos pressure needs --x or --rho")
            x = args.x if args.x is not None else args.rho / params.rho0
            columns, row = ["x", "pressure"], {"x": x, "pressure": bm.bm_pressure(params, x)}
        elif sub in ("diff", "approx"):
            _require(args, "rho1", "rho2")
            exact = bm.bm_diff_exact(params, args.rho1, args.rho2)
            approx = bm.bm_diff_approx(params, args.rho1, args.rho2)
            columns = ["rho1", "rho2", "delta", "exact_diff", "approx_diff", "approx_residual"]
            row = {"rho1": args.rho1, "rho2": args.rho2, "delta": args.rho2 - args.rho1,
                   "exact_diff": exact, "approx_diff": approx, "approx_residual": exact - approx}
        elif sub == "invert":
            _require(args, "p")
            x = bm.bm_invert(params, args.p, x_max=cfg["x_max"])
            columns = ["pressure", "x", "rho", "residual"]
            row = {"pressure": args.p, "x": x, "rho": x * params.rho0,
                   "residual": bm.bm_pressure(params, x) - args.p}
        else:
            _require(args, "rho1", "ptr")
            jump = bm.density_jump_for_transition(params, args.rho1, args.ptr, x_max=cfg["x_max"])
            columns = ["rho1", "rho2", "delta", "ptr", "exact_diff", "approx_diff", "approx_residual"]
            row = {"rho1": jump.rho1, "rho2": jump.rho2, "delta": jump.delta, "ptr": args.ptr,
                   "exact_diff": jump.exact_diff, "approx_diff": jump.approx_diff,
                   "approx_residual": jump.approx_residual}
    except (OutOfRangeError, NonMonotoneError) as exc:
        raise CliError(EXIT_EOS, str(exc)) from None
    except DomainError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    emit(out, args.format, columns, [row], "pressure in units of B0", extra={"material": params.name
                                                                            or None},
         meta=_meta(args))
    return EXIT_OK


def sweep_rows(n_min, n_max, policy="adjacent", tol=DEFAULT_TOL):
    """Allowed ground-state transitions between well strengths in ``[n_min, n_max]``.

    Rows are ordered by ``(n1, n2)``. When the range holds a single ``n`` the
    one row carries only its ionization pressure.
    """
    levels = {n: _level(n, 0, tol) for n in range(n_min, n_max + 1)}
    p_ion = {n: pm.ionization_pressure(s).value for n, s in levels.items()}
    if n_min == n_max:
        s = levels[n_min]
        return [{"n1": n_min, "n2": None, "xi1": s.xi, "xi2": None, "p_tr": None,
                 "p_ion_n1": p_ion[n_min]}]
    if policy == "adjacent":
        pairs = [(n, n + 1) for n in range(n_min, n_max)]
    else:
        pairs = [(a, b) for a in levels for b in levels if a != b]
    rows = []
    for n1, n2 in sorted(pairs):
        s1, s2 = levels[n1], levels[n2]
        if not pm.transition_allowed(s1, s2):
            continue
        rows.append({"n1": n1, "n2": n2, "xi1": s1.xi, "xi2": s2.xi,
                     "p_tr": pm.transition_pressure_xi(s1, s2).value, "p_ion_n1": p_ion[n1]})
    return rows


def cmd_sweep(args, out):
    cfg = _settings(args)
    lo, hi = oracle.N_LIMITS
    if not lo <= args.n_min <= args.n_max <= hi:
        raise CliError(EXIT_USAGE, f"need {lo} <= --n-min <= --n-max <= {hi}")
    rows = sweep_rows(args.n_min, args.n_max, args.pairs, cfg["tol"])
    extra = {"pairs": args.pairs}
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            emit(fh, args.format, SWEEP_COLUMNS, rows, REDUCED_PRESSURE_UNIT, extra=extra,
                 meta=_meta(args))
        print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    else:
        emit(out, args.format, SWEEP_COLUMNS, rows, REDUCED_PRESSURE_UNIT, extra=extra,
             meta=_meta(args))
    return EXIT_OK


def verify_rows(report, detail=False):
    rows = []
    published = [c for c in report.checks if c.family == "published"]
    rest = [c for c in report.checks if c.family != "published"]
    for c in published + (rest if detail else []):
        rows.append({"kind": "check" if c in rest else "published", "name": c.name, "count": 1,
                     "expected": c.expected, "computed": c.computed, "residual": c.residual,
                     "tolerance": c.tolerance, "passed": c.passed})
    if not detail:
        sub = oracle.VerificationReport(checks=rest)
        for fam in sub.summary():
            rows.append({"kind": "family", "name": fam["family"], "count": fam["count"],
                         "residual": fam["max_residual"], "tolerance": fam["tolerance"],
                         "passed": fam["passed"]})
    for d in report.paper_deviations:
        rows.append({"kind": "deviation", "name": d.quantity, "expected": d.paper_value,
                     "computed": d.computed_value, "note": d.note})
    return rows


def cmd_verify(args, out):
    lo, hi = oracle.N_LIMITS
    if not lo <= args.n_min <= args.n_max <= hi:
        raise CliError(EXIT_USAGE, f"need {lo} <= --n-min <= --n-max <= {hi}")
    report = oracle.run_all(args.n_min, args.n_max)
    rows = verify_rows(report, detail=args.detail)
    extra = {"passed": report.passed,
             "paper_deviations": [vars(d) for d in report.paper_deviations]}
    emit(out, args.format, VERIFY_COLUMNS, rows, REDUCED_PRESSURE_UNIT, extra=extra,
         meta=_meta(args))
    for c in report.failures():
        print(f"FAIL {c.name}: residual {c.residual:.3e} >= {c.tolerance:.1e}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--config", help="flat key = value file (hbar, tol, rounding_tol, "
                                         "l1_points_per_unit, x_max)")
    common.add_argument("--meta", action="store_true", help="add provenance metadata to the output")

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--tol", type=float, help="root residual tolerance")

    parser = argparse.ArgumentParser(prog="wellpress", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("levels", parents=[common, solver], help="bound-state table")
    p.add_argument("--n", type=int, help="well strength 2 m V0 a^2 / hbar^2")
    p.add_argument("--l", type=_parse_l, default=[0], help="angular momenta, e.g. 0 or 0,1")
    p.add_argument("--mass", type=float, help="particle mass [kg]")
    p.add_argument("--depth", type=float, help="well depth V0 [J]")
    p.add_argument("--radius", type=float, help="well radius a [m]")
    p.add_argument("--rounding-tol", type=float, dest="rounding_tol")
    p.set_defaults(func=cmd_levels)

    p = sub.add_parser("transition", parents=[common, solver], help="transition pressure n1 -> n2")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--branch1", type=int, default=0)
    p.add_argument("--branch2", type=int, default=0)
    p.set_defaults(func=cmd_transition)

    p = sub.add_parser("ionize", parents=[common, solver], help="ionization pressure")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--branch", type=int, default=0)
    p.add_argument("--mass", type=float, help="particle mass [kg]")
    p.add_argument("--depth", type=float, help="well depth V0 [J]")
    p.set_defaults(func=cmd_ionize)

    p = sub.add_parser("eos", help="Birch-Murnaghan equation of state")
    eos_sub = p.add_subparsers(dest="eos_cmd", required=True)
    eos_common = argparse.ArgumentParser(add_help=False)
    eos_common.add_argument("--b0", type=float, help="bulk modulus B0")
    eos_common.add_argument("--b0p", type=float, help="pressure derivative B0'")
    eos_common.add_argument("--rho0", type=float, default=1.0,
                            help="reference density (default 1: densities in units of rho0)")
    eos_common.add_argument("--material-file", dest="material_file")
    eos_common.add_argument("--material")
    for name, help_ in [("pressure", "P at a compression ratio"),
                        ("diff", "exact P(rho2) - P(rho1)"),
                        ("approx", "truncated expansion of P(rho2) - P(rho1)"),
                        ("invert", "compression ratio for a pressure"),
                        ("jump", "density reached after a pressure rise")]:
        e = eos_sub.add_parser(name, parents=[common, eos_common], help=help_)
        e.set_defaults(func=cmd_eos)
        if name == "pressure":
            e.add_argument("--x", type=float, help="rho/rho0")
            e.add_argument("--rho", type=float)
        elif name in ("diff", "approx"):
            e.add_argument("--rho1", type=float)
            e.add_argument("--rho2", type=float)
        elif name == "invert":
            e.add_argument("--p", type=float)
            e.add_argument("--x-max", type=float, dest="x_max")
        else:
            e.add_argument("--rho1", type=float)
            e.add_argument("--ptr", type=float, help="pressure rise, in the unit of B0")
            e.add_argument("--x-max", type=float, dest="x_max")

    p = sub.add_parser("sweep", parents=[common, solver], help="table of allowed transitions")
    p.add_argument("--n-min", type=int, required=True, dest="n_min")
    p.add_argument("--n-max", type=int, required=True, dest="n_max")
    p.add_argument("--pairs", choices=["adjacent", "all-allowed"], default="adjacent")
    p.add_argument("--out", help="write the table here instead of stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", parents=[common], help="run the verification suites")
    p.add_argument("--n-min", type=int, default=3, dest="n_min")
    p.add_argument("--n-max", type=int, default=22, dest="n_max")
    p.add_argument("--detail", action="store_true", help="one row per individual check")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.argv = argv
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"wellpress: {exc}", file=sys.stderr)
        return exc.code
    except ToleranceNotReached as exc:
        # only reachable through a tolerance set by the user
        print(f"wellpress: {exc}; loosen --tol", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
