"""Command-line front end.

    polfilter measures --family werner --gamma 0.5
    polfilter filter --family bell-psi --theta-deg 30 --eta-va 0.57735
    polfilter sweep --preset fig5 --out fig5.csv
    polfilter bounds --curve mems --points 201
    polfilter optimize --family werner --gamma 0.8 --theta 0.5404 --mode subsystem

Every number is printed with 12 significant digits.  Exit codes: 0 success,
2 invalid input, 3 vanishing ensemble, 4 no feasible point, 5 eigensolver
failure.
"""
from __future__ import annotations

import argparse
import math
import sys

from . import filtering, optimize, states, sweeps
from .filtering import FilterSettings, NoSolution, VanishingEnsemble
from .measures import report
from .optimize import Mode, NoFeasiblePoint, OptimizeConfig
from .qlinalg import ConvergenceFailure, DensityMatrix4, InvalidState, trace_distance
from .states import Family, FamilyParams, ParamOutOfRange
from .sweeps import format_number

EXIT_OK, EXIT_INVALID, EXIT_VANISHING, EXIT_INFEASIBLE, EXIT_CONVERGENCE = 0, 2, 3, 4, 5


class UsageError(ValueError):
    pass


def read_matrix_file(path: str) -> DensityMatrix4:
    """Four lines of four whitespace-separated ``re+imj`` entries."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.split() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) != 4 or any(len(ln) != 4 for ln in lines):
        raise InvalidState("shape", f"{path}: expected 4 lines of 4 entries")
    try:
        m = [[complex(x) for x in ln] for ln in lines]
    except ValueError as exc:
        raise InvalidState("finite", f"{path}: unparseable entry ({exc})") from exc
    return DensityMatrix4(m)


def _add_state_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("state")
    g.add_argument("--family", choices=[f.value for f in Family])
    g.add_argument("--gamma", type=float)
    g.add_argument("--theta", type=float, help="radians")
    g.add_argument("--theta-deg", type=float, help="degrees, converted to --theta")
    g.add_argument("--theta1", type=float)
    g.add_argument("--theta2", type=float)
    g.add_argument("--sign", choices=["+", "-"], default="+")
    g.add_argument("--matrix-file", metavar="PATH")
    g.add_argument("--seed", type=int, help="random state from this seed")
    g.add_argument("--rank", type=int, default=4, help="rank of the random state (1 = pure)")


def _add_eta_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("filter")
    for ch in sweeps.CHANNELS:
        g.add_argument(f"--eta-{ch}", type=float, default=1.0)


def _theta(args) -> float | None:
    if args.theta is not None and args.theta_deg is not None:
        raise UsageError("give --theta or --theta-deg, not both")
    if args.theta_deg is not None:
        return math.radians(args.theta_deg)
    return args.theta


def family_params(args, require: bool = True) -> FamilyParams | None:
    if args.family is None:
        if require:
            raise UsageError("need one of --family, --matrix-file or --seed")
        return None
    given = {
        "gamma": args.gamma,
        "theta": _theta(args),
        "theta1": args.theta1,
        "theta2": args.theta2,
    }
    kw = {k: v for k, v in given.items() if v is not None}
    return FamilyParams(Family(args.family), sign=1 if args.sign == "+" else -1, **kw)


def load_state(args) -> DensityMatrix4:
    sources = [args.family is not None, args.matrix_file is not None, args.seed is not None]
    if sum(sources) != 1:
        raise UsageError("need exactly one of --family, --matrix-file or --seed")
    if args.matrix_file is not None:
        return read_matrix_file(args.matrix_file)
    if args.seed is not None:
        if args.rank == 1:
            return states.random_pure(args.seed).density()
        return states.random_density(args.seed, args.rank)
    return states.build(family_params(args))


def _print_pairs(pairs, out) -> None:
    for name, value in pairs:
        if isinstance(value, float):
            value = format_number(value)
        print(f"{name:<16}{value}", file=out)


def _print_report(rep, out) -> None:
    _print_pairs(rep.as_dict().items(), out)


def cmd_measures(args, out) -> int:
    _print_report(report(load_state(args)), out)
    return EXIT_OK


def _settings(args, rho) -> FilterSettings:
    if args.solve or args.epsilon is not None:
        params = family_params(args)
        return filtering.solve_constraints(params, epsilon=args.epsilon)
    return FilterSettings(args.eta_va, args.eta_ha, args.eta_vb, args.eta_hb)


def cmd_filter(args, out) -> int:
    rho = load_state(args)
    s = _settings(args, rho)
    res = filtering.apply_filter(rho, s)
    _print_pairs(zip(("eta_va", "eta_ha", "eta_vb", "eta_hb"), s.as_tuple()), out)
    _print_pairs([("probability", res.probability)], out)
    _print_report(report(res.state), out)
    if args.oracle:
        alt = filtering.mode_level_filter(rho, s)
        _print_pairs(
            [
                ("oracle_distance", trace_distance(res.state, alt.state)),
                ("oracle_dprob", abs(res.probability - alt.probability)),
            ],
            out,
        )
    return EXIT_OK


def sweep_spec(args) -> sweeps.SweepSpec:
    channels = args.channels.split(",") if args.channels else None
    if args.preset:
        extra = {
            "gamma": args.gamma,
            "theta": _theta(args),
            "theta1": args.theta1,
            "theta2": args.theta2,
        }
        return sweeps.preset_spec(args.preset, points=args.points, channels=channels, lo=args.lo, hi=args.hi, **extra)
    if args.axis is None or args.lo is None or args.hi is None:
        raise UsageError("a sweep without --preset needs --axis, --lo and --hi")
    axis = sweeps.Axis(args.axis)
    path = None
    if axis is sweeps.Axis.ETA_PATH:
        kind = sweeps.PathKind(args.path)
        path = sweeps.EtaPath(kind, tuple(channels or ("va", "vb"))) if kind is sweeps.PathKind.UNISON else sweeps.EtaPath(kind)
    return sweeps.SweepSpec(
        family=family_params(args),
        axis=axis,
        lo=args.lo,
        hi=args.hi,
        points=args.points or 101,
        eta_path=path,
        settings=FilterSettings(args.eta_va, args.eta_ha, args.eta_vb, args.eta_hb),
    )


def _emit(text: str, path, out) -> None:
    if path is None:
        out.write(text)
    else:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)


def cmd_sweep(args, out) -> int:
    _emit(sweeps.sweep_csv(sweep_spec(args)), args.out, out)
    return EXIT_OK


def cmd_bounds(args, out) -> int:
    _emit(sweeps.bounds_csv(args.curve, args.points or 101), args.out, out)
    return EXIT_OK


def cmd_optimize(args, out) -> int:
    rho = load_state(args)
    cfg = OptimizeConfig(
        mode=Mode(args.mode),
        grid_resolution=args.grid,
        refine_rounds=args.rounds,
        entropy_tolerance=args.entropy_tol,
        min_probability=args.min_probability,
        starts=args.starts,
        record_trace=args.trace is not None,
    )
    res = optimize.optimize_eof(rho, cfg)
    _print_pairs(zip(("eta_va", "eta_ha", "eta_vb", "eta_hb"), res.settings.as_tuple()), out)
    _print_pairs([("probability", res.outcome.probability)], out)
    _print_report(res.report, out)
    _print_pairs(
        [("residual_a", res.constraint_residuals[0]), ("residual_b", res.constraint_residuals[1])], out
    )
    if args.trace is not None:
        rows = ((*t.etas, t.eof, t.probability, 1.0 if t.feasible else 0.0) for t in res.trace)
        sweeps.write_csv(("eta_va", "eta_ha", "eta_vb", "eta_hb", "eof", "probability", "feasible"), rows, args.trace)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polfilter", description="Local polarisation filtering of two-qubit states.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measures", help="entanglement and entropy of a state")
    _add_state_flags(p)
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("filter", help="apply beam-splitter filters and post-select coincidences")
    _add_state_flags(p)
    _add_eta_flags(p)
    p.add_argument("--solve", action="store_true", help="use the closed-form subsystem-constraint settings")
    p.add_argument("--epsilon", type=float, help="path parameter for ent-sep/mems constraint settings")
    p.add_argument("--oracle", action="store_true", help="cross-check against the mode-level simulation")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("sweep", help="CSV sweep of one parameter or a figure preset")
    _add_state_flags(p)
    _add_eta_flags(p)
    p.add_argument("--preset", choices=sorted(sweeps.PRESETS))
    p.add_argument("--axis", choices=[a.value for a in sweeps.Axis])
    p.add_argument("--path", choices=[k.value for k in sweeps.PathKind], default="unison")
    p.add_argument("--channels", help="comma-separated unison channels, e.g. va,vb")
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bounds", help="Werner or linear-entropy bound curve as CSV")
    p.add_argument("--curve", choices=[c.value for c in sweeps.BoundCurve], required=True)
    p.add_argument("--points", type=int)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("optimize", help="search filter settings for maximal EOF")
    _add_state_flags(p)
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.UNCONSTRAINED.value)
    p.add_argument("--grid", type=int, default=8)
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--starts", type=int, default=8)
    p.add_argument("--entropy-tol", type=float, default=1e-6)
    p.add_argument("--min-probability", type=float, default=0.0)
    p.add_argument("--trace", metavar="PATH", help="CSV of every evaluated candidate")
    p.set_defaults(func=cmd_optimize)
    return ap


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except VanishingEnsemble as exc:
        print(f"error: vanishing ensemble: {exc}", file=err)
        return EXIT_VANISHING
    except NoFeasiblePoint as exc:
        print(f"error: no feasible point: {exc}", file=err)
        return EXIT_INFEASIBLE
    except ConvergenceFailure as exc:
        print(f"error: eigensolver: {exc}", file=err)
        return EXIT_CONVERGENCE
    except InvalidState as exc:
        print(f"error: invalid state, violated invariant {exc.invariant}: {exc}", file=err)
        return EXIT_INVALID
    except (UsageError, ParamOutOfRange, NoSolution, ValueError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
