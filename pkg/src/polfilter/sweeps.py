"""One-parameter sweeps of state families and filter settings, written as CSV.

A sweep varies one axis (a mixing weight, an angle, or a position along a
path of filter settings) and records the filtered state's measures at each
point.  Output is plain CSV with a fixed column order and a fixed number
format, so the same SweepSpec always produces the same bytes.
"""
from __future__ import annotations

import csv
import dataclasses
import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from .filtering import (
    IDENTITY,
    FilterSettings,
    VanishingEnsemble,
    apply_filter,
    filtered_probability,
    solve_constraints,
)
from .measures import MeasureReport, report
from .states import Family, FamilyParams, ParamOutOfRange, build, mems_bound_state, werner

SWEEP_COLUMNS = (
    "axis",
    "eta_va",
    "eta_ha",
    "eta_vb",
    "eta_hb",
    "probability",
    "concurrence",
    "eof",
    "entropy_joint",
    "entropy_a",
    "entropy_b",
    "linear_entropy",
    "purity",
)
BOUND_COLUMNS = ("gamma", "eof", "entropy_joint", "linear_entropy")
CHANNELS = ("va", "ha", "vb", "hb")


class Axis(enum.Enum):
    GAMMA = "gamma"
    THETA1 = "theta1"
    THETA2 = "theta2"
    # THETA moves the single angle of the one-angle families
    THETA = "theta"
    ETA_PATH = "eta-path"


class PathKind(enum.Enum):
    # listed channels all set to sqrt(axis), the rest left at one
    UNISON = "unison"
    # solve_constraints along its path parameter epsilon = axis
    CONSTRAINED = "constrained"


@dataclass(frozen=True)
class EtaPath:
    kind: PathKind = PathKind.UNISON
    channels: tuple[str, ...] = ("va", "vb")

    def __post_init__(self):
        if not isinstance(self.kind, PathKind):
            object.__setattr__(self, "kind", PathKind(self.kind))
        object.__setattr__(self, "channels", tuple(self.channels))
        if self.kind is PathKind.UNISON:
            bad = [c for c in self.channels if c not in CHANNELS]
            if bad or not self.channels or len(set(self.channels)) != len(self.channels):
                raise ParamOutOfRange(f"unison channels must be distinct names from {CHANNELS}, got {self.channels!r}")

    def settings(self, params: FamilyParams, x: float) -> FilterSettings:
        if self.kind is PathKind.CONSTRAINED:
            return solve_constraints(params, epsilon=x)
        eta = math.sqrt(x)
        etas = {c: (eta if c in self.channels else 1.0) for c in CHANNELS}
        return FilterSettings(etas["va"], etas["ha"], etas["vb"], etas["hb"])


def _axis_domain(axis: Axis, path: EtaPath | None) -> tuple[float, float, bool]:
    """(lo, hi, lo_open) of an axis's legal values."""
    if axis in (Axis.THETA, Axis.THETA1, Axis.THETA2):
        return 0.0, math.pi / 2, False
    if axis is Axis.ETA_PATH and path is not None and path.kind is PathKind.CONSTRAINED:
        return 0.0, 1.0, True
    return 0.0, 1.0, False


@dataclass(frozen=True)
class SweepSpec:
    """A sweep of ``axis`` over ``points`` evenly spaced values in [lo, hi].

    ``settings`` is the fixed filter used by the state-parameter axes;
    ``eta_path`` is required (and only used) when ``axis`` is ``ETA_PATH``.
    """

    family: FamilyParams
    axis: Axis
    lo: float
    hi: float
    points: int = 101
    eta_path: EtaPath | None = None
    settings: FilterSettings = IDENTITY

    def __post_init__(self):
        if not isinstance(self.axis, Axis):
            object.__setattr__(self, "axis", Axis(self.axis))
        if isinstance(self.points, bool) or int(self.points) != self.points or self.points < 2:
            raise ParamOutOfRange(f"points must be an integer >= 2, got {self.points!r}")
        if self.axis is Axis.ETA_PATH and self.eta_path is None:
            raise ParamOutOfRange("an eta-path sweep needs an eta_path")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise ParamOutOfRange(f"need finite lo < hi, got [{self.lo!r}, {self.hi!r}]")
        dlo, dhi, lo_open = _axis_domain(self.axis, self.eta_path)
        slack = 1e-12
        if self.lo < dlo - slack or (lo_open and self.lo <= dlo) or self.hi > dhi + slack:
            left = "(" if lo_open else "["
            raise ParamOutOfRange(
                f"{self.axis.value} range [{self.lo!r}, {self.hi!r}] outside {left}{dlo:g}, {dhi:g}]"
            )

    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, int(self.points))


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    settings: FilterSettings
    probability: float
    report: MeasureReport | None

    def values(self) -> list[float | None]:
        measures = list(dataclasses.astuple(self.report)) if self.report else [None] * 7
        return [self.axis_value, *self.settings.as_tuple(), self.probability, *measures]


def _point(spec: SweepSpec, x: float) -> tuple[FamilyParams, FilterSettings]:
    if spec.axis is Axis.ETA_PATH:
        return spec.family, spec.eta_path.settings(spec.family, x)
    # linspace can land a rounding error outside [0, pi/2]
    dlo, dhi, _ = _axis_domain(spec.axis, None)
    x = min(max(x, dlo), dhi)
    return dataclasses.replace(spec.family, **{spec.axis.value: x}), spec.settings


def evaluate_point(spec: SweepSpec, x: float) -> SweepRow:
    params, settings = _point(spec, float(x))
    rho = build(params)
    try:
        out = apply_filter(rho, settings)
    except VanishingEnsemble:
        return SweepRow(float(x), settings, filtered_probability(rho, settings), None)
    return SweepRow(float(x), settings, out.probability, report(out.state))


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """One row per grid point, in ascending axis order."""
    return [evaluate_point(spec, x) for x in spec.grid()]


def format_number(x: float | None) -> str:
    """12 significant digits, trailing zeros dropped, no negative zero."""
    if x is None:
        return ""
    x = float(x)
    if x == 0.0:
        return "0"
    return "%.12g" % x


def write_csv(header, rows, path=None) -> str:
    """Render rows of numbers as CSV text, optionally also writing it to ``path``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([format_number(v) for v in r])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    return text


def sweep_csv(spec: SweepSpec, path=None) -> str:
    return write_csv(SWEEP_COLUMNS, (r.values() for r in run_sweep(spec)), path)


class BoundCurve(enum.Enum):
    WERNER = "werner"
    MEMS = "mems"


def bound_curve(curve: BoundCurve | str, points: int = 101) -> list[tuple[float, float, float, float]]:
    """(gamma, eof, entropy_joint, linear_entropy) along a bounding family.

    ``werner`` runs over gamma in [1/3, 1] at theta = pi/4 (below 1/3 it is
    separable); ``mems`` over gamma in [0, 1].
    """
    curve = BoundCurve(curve)
    if isinstance(points, bool) or int(points) != points or points < 2:
        raise ParamOutOfRange(f"points must be an integer >= 2, got {points!r}")
    if curve is BoundCurve.WERNER:
        grid, make = np.linspace(1.0 / 3.0, 1.0, int(points)), werner
    else:
        grid, make = np.linspace(0.0, 1.0, int(points)), mems_bound_state
    rows = []
    for g in grid:
        rep = report(make(float(g)))
        rows.append((float(g), rep.eof, rep.entropy_joint, rep.linear_entropy))
    return rows


def bounds_csv(curve: BoundCurve | str, points: int = 101, path=None) -> str:
    return write_csv(BOUND_COLUMNS, bound_curve(curve, points), path)


@dataclass(frozen=True)
class Preset:
    """A figure reproduction: what its caption or text fixes, and what it leaves open.

    ``required`` names the FamilyParams fields the caller must supply.
    """

    name: str
    description: str
    family: Family
    axis: Axis
    lo: float
    hi: float
    fixed: dict
    required: tuple[str, ...] = ()
    eta_path: EtaPath | None = None
    points: int = 101


PRESETS = {
    p.name: p
    for p in (
        Preset(
            "fig2",
            "two-Bell mixture vs mixing weight; gamma=0 is the maximal psi+ component",
            Family.TWO_BELL, Axis.GAMMA, 0.0, 1.0,
            fixed={"theta2": math.pi / 4}, required=("theta1",),
        ),
        Preset(
            "fig3",
            "two-Bell mixture vs the entanglement of one component at fixed mixing",
            Family.TWO_BELL, Axis.THETA1, 0.0, math.pi / 2,
            fixed={}, required=("gamma", "theta2"),
        ),
        Preset(
            "fig4",
            "two-Bell mixture, V transmissions of both arms lowered in unison",
            Family.TWO_BELL, Axis.ETA_PATH, 0.0, 1.0,
            fixed={"theta1": math.pi / 4}, required=("gamma", "theta2"),
            eta_path=EtaPath(PathKind.UNISON, ("va", "vb")),
        ),
        Preset(
            "fig5",
            "Werner state, eta_va = eta_vb varied in unison along eta^2",
            Family.WERNER, Axis.ETA_PATH, 0.0, 1.0,
            fixed={"gamma": 0.8, "theta": math.atan(0.6)},
            eta_path=EtaPath(PathKind.UNISON, ("va", "vb")),
        ),
        Preset(
            "fig6",
            "Werner state, one or both V transmissions varied (choose channels)",
            Family.WERNER, Axis.ETA_PATH, 0.0, 1.0,
            fixed={}, required=("gamma", "theta"),
            eta_path=EtaPath(PathKind.UNISON, ("va", "vb")),
        ),
        Preset(
            "fig7",
            "entangled + separable mixture, eta_va = eta_vb in unison",
            Family.ENT_SEP, Axis.ETA_PATH, 0.0, 1.0,
            fixed={"gamma": 0.3}, required=("theta",),
            eta_path=EtaPath(PathKind.UNISON, ("va", "vb")),
        ),
        Preset(
            "fig8",
            "entangled + separable mixture along the subsystem-constraint path eta_va = eta_vb tan(theta)",
            Family.ENT_SEP, Axis.ETA_PATH, 0.01, 1.0,
            fixed={"gamma": 0.3}, required=("theta",),
            eta_path=EtaPath(PathKind.CONSTRAINED),
        ),
        Preset(
            "fig9",
            "entangled + separable mixture (gamma=0.3, maximal component) along the constraint path",
            Family.ENT_SEP, Axis.ETA_PATH, 0.01, 1.0,
            fixed={"gamma": 0.3, "theta": math.pi / 4},
            eta_path=EtaPath(PathKind.CONSTRAINED),
        ),
        Preset(
            "fig9-mems",
            "linear-entropy bound state at gamma=1/2 along its constraint path",
            Family.MEMS, Axis.ETA_PATH, 0.01, 1.0,
            fixed={"gamma": 0.5},
            eta_path=EtaPath(PathKind.CONSTRAINED),
        ),
    )
}


def preset_spec(name: str, points: int | None = None, channels=None, lo=None, hi=None, **params) -> SweepSpec:
    """Build the sweep for a figure preset.

    ``params`` supplies the FamilyParams fields the preset leaves open; it
    may not override what the preset fixes.  Missing required fields raise
    :class:`ParamOutOfRange`.
    """
    if name not in PRESETS:
        raise ParamOutOfRange(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    p = PRESETS[name]
    given = {k: v for k, v in params.items() if v is not None}
    clash = sorted(set(given) & set(p.fixed))
    if clash:
        raise ParamOutOfRange(f"preset {name} fixes {', '.join(clash)}")
    missing = [k for k in p.required if k not in given]
    if missing:
        raise ParamOutOfRange(f"preset {name} needs --{' --'.join(m.replace('_', '-') for m in missing)}")
    path = p.eta_path
    if channels is not None:
        if path is None or path.kind is not PathKind.UNISON:
            raise ParamOutOfRange(f"preset {name} has no unison path to choose channels for")
        path = EtaPath(PathKind.UNISON, tuple(channels))
    family = FamilyParams(p.family, **{**p.fixed, **given})
    return SweepSpec(
        family=family,
        axis=p.axis,
        lo=p.lo if lo is None else lo,
        hi=p.hi if hi is None else hi,
        points=p.points if points is None else points,
        eta_path=path,
    )
