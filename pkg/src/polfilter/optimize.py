"""Derivative-free search for filter settings that maximise post-filter EOF.

The search is a coarse grid over [0, 1]^4 followed by per-axis golden-section
refinement from the best few grid points and from the arm-balanced point.  Everything is deterministic.
EOF is not smooth (it has a kink where concurrence hits zero and wherever the
Wootters eigenvalues cross), which is why no gradients are used.

In ``SUBSYSTEM`` mode only settings whose filtered state has both reduced
entropies within ``entropy_tolerance`` of one are admitted.  That is an
equality constraint, which a grid essentially never hits, so every candidate
is first moved onto the set where both reduced states have balanced
diagonals (see :func:`balance_arms`) and then tested against the tolerance;
nothing is ever accepted on the strength of a penalty term.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .filtering import (
    VANISHING_P,
    FilterOutcome,
    FilterSettings,
    apply_filter,
    filter_operator,
    normalize_arms,
)
from .measures import MeasureReport, eof, report, subsystem_entropy
from .qlinalg import DensityMatrix4

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class NoFeasiblePoint(RuntimeError):
    pass


class Mode(enum.Enum):
    UNCONSTRAINED = "unconstrained"
    SUBSYSTEM = "subsystem"


@dataclass(frozen=True)
class OptimizeConfig:
    mode: Mode = Mode.UNCONSTRAINED
    grid_resolution: int = 8
    refine_rounds: int = 3
    entropy_tolerance: float = 1e-6
    eof_tie_tolerance: float = 1e-9
    min_probability: float = 0.0
    starts: int = 8
    record_trace: bool = False

    def __post_init__(self):
        if not isinstance(self.mode, Mode):
            object.__setattr__(self, "mode", Mode(self.mode))
        if self.grid_resolution < 8:
            raise ValueError("grid_resolution must be at least 8")
        if self.refine_rounds < 1:
            raise ValueError("refine_rounds must be at least 1")
        if self.starts < 1:
            raise ValueError("starts must be at least 1")
        if not 0.0 <= self.min_probability <= 1.0:
            raise ValueError("min_probability must lie in [0, 1]")


@dataclass(frozen=True)
class Candidate:
    etas: tuple[float, float, float, float]
    eof: float
    probability: float
    residuals: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class TraceRow:
    etas: tuple[float, float, float, float]
    eof: float | None
    probability: float
    feasible: bool


@dataclass(frozen=True)
class OptimizeResult:
    settings: FilterSettings
    outcome: FilterOutcome
    report: MeasureReport
    constraint_residuals: tuple[float, float]
    history: tuple[float, ...] = ()
    trace: tuple[TraceRow, ...] = field(default=(), repr=False)


def _improves(a: Candidate, b: Candidate | None) -> bool:
    if b is None:
        return True
    return a.eof > b.eof or (a.eof == b.eof and a.probability > b.probability)


def _select(cands, tol: float) -> Candidate:
    """Best EOF; within ``tol`` of it, highest probability, then largest settings."""
    top = max(c.eof for c in cands)
    return max((c for c in cands if c.eof >= top - tol), key=lambda c: (c.probability, c.etas))


def balance_arms(rho: DensityMatrix4, etas) -> tuple[float, float, float, float]:
    """Arm-normalised transmissions that give both reduced states equal
    diagonal weights.

    With diagonal weights d[a][b] (a, b in {V, H}) and intensity ratios
    u = eta_VA^2/eta_HA^2, v = eta_VB^2/eta_HB^2, balance needs
    u (d_VV v + d_VH) = d_HV v + d_HH and v (d_VV u + d_HV) = d_VH u + d_HH.
    With all weights positive the solution is the single point
    u = sqrt(d_HV d_HH / (d_VV d_VH)), v = sqrt(d_VH d_HH / (d_VV d_HV)).
    For phi-type diagonals (d_VH = d_HV = 0) only u v = d_HH/d_VV is fixed and
    for psi-type ones (d_VV = d_HH = 0) only u / v = d_HV/d_VH; the free
    combination is then taken from ``etas``.  Any other zero pattern is only
    balanced in a limit of vanishing transmission, and ``etas`` is returned
    unchanged.
    """
    d00, d01, d10, d11 = np.diag(rho.m).real.tolist()
    va, ha, vb, hb = etas
    if min(d00, d01, d10, d11) > 0.0:
        u = math.sqrt(d10 * d11 / (d00 * d01))
        v = math.sqrt(d01 * d11 / (d00 * d10))
    elif min(va, ha, vb, hb) <= 0.0:
        return tuple(etas)
    elif d01 == d10 == 0.0 and d00 > 0.0 and d11 > 0.0:
        # keep log(u) - log(v), move log(u) + log(v) onto the constraint
        lu, lv = 2.0 * math.log(va / ha), 2.0 * math.log(vb / hb)
        half = 0.5 * math.log(d11 / d00)
        diff = 0.5 * (lu - lv)
        u, v = math.exp(half + diff), math.exp(half - diff)
    elif d00 == d11 == 0.0 and d01 > 0.0 and d10 > 0.0:
        lu, lv = 2.0 * math.log(va / ha), 2.0 * math.log(vb / hb)
        half = 0.5 * math.log(d10 / d01)
        mean = 0.5 * (lu + lv)
        u, v = math.exp(mean + half), math.exp(mean - half)
    else:
        return tuple(etas)
    return normalize_arms(math.sqrt(u), 1.0, math.sqrt(v), 1.0).as_tuple()


class _Search:
    def __init__(self, rho: DensityMatrix4, cfg: OptimizeConfig):
        self.rho = rho
        self.cfg = cfg
        self.constrained = cfg.mode is Mode.SUBSYSTEM
        self.trace: list[TraceRow] = []
        self.cache: dict[tuple, Candidate | None] = {}

    def evaluate(self, etas) -> Candidate | None:
        etas = tuple(float(min(max(e, 0.0), 1.0)) for e in etas)
        if self.constrained:
            etas = tuple(float(min(max(e, 0.0), 1.0)) for e in balance_arms(self.rho, etas))
        if etas in self.cache:
            return self.cache[etas]
        cand = self._evaluate(etas)
        self.cache[etas] = cand
        return cand

    def _evaluate(self, etas) -> Candidate | None:
        f = np.diag(filter_operator(FilterSettings(*etas))).real
        out = self.rho.m * np.outer(f, f)
        p = float(np.trace(out).real)
        if p <= VANISHING_P or p < self.cfg.min_probability:
            if self.cfg.record_trace:
                self.trace.append(TraceRow(etas, None, p, False))
            return None
        m = out / p
        e = eof(m)
        residuals = (0.0, 0.0)
        feasible = True
        if self.constrained:
            residuals = (abs(subsystem_entropy(m, "A") - 1.0), abs(subsystem_entropy(m, "B") - 1.0))
            feasible = max(residuals) <= self.cfg.entropy_tolerance
        if self.cfg.record_trace:
            self.trace.append(TraceRow(etas, e, p, feasible))
        return Candidate(etas, e, p, residuals) if feasible else None

    def golden(self, base: Candidate, axis: int, lo: float, hi: float) -> Candidate | None:
        def f(x):
            etas = list(base.etas)
            etas[axis] = x
            c = self.evaluate(etas)
            return (-math.inf if c is None else c.eof), c

        a, b = lo, hi
        x1 = b - GOLDEN * (b - a)
        x2 = a + GOLDEN * (b - a)
        f1, c1 = f(x1)
        f2, c2 = f(x2)
        best = None
        for c in (c1, c2):
            if c is not None and _improves(c, best):
                best = c
        while b - a > 1e-12:
            if f1 >= f2:
                b, x2, f2 = x2, x1, f1
                x1 = b - GOLDEN * (b - a)
                f1, c = f(x1)
            else:
                a, x1, f1 = x1, x2, f2
                x2 = a + GOLDEN * (b - a)
                f2, c = f(x2)
            if c is not None and _improves(c, best):
                best = c
        for x in (lo, hi):
            _, c = f(x)
            if c is not None and _improves(c, best):
                best = c
        return best


def optimize_eof(rho: DensityMatrix4, cfg: OptimizeConfig | None = None) -> OptimizeResult:
    """Search filter settings for the largest post-filter EOF.

    Among every feasible candidate evaluated, those within
    ``eof_tie_tolerance`` of the best EOF compete on success probability, then
    on lexicographically larger settings.  Candidates
    whose coincidence probability vanishes are skipped.  Raises
    :class:`NoFeasiblePoint` when the subsystem constraint admits nothing.
    """
    cfg = cfg or OptimizeConfig()
    tol = cfg.eof_tie_tolerance
    search = _Search(rho, cfg)
    axis = np.linspace(0.0, 1.0, cfg.grid_resolution)

    pool: list[Candidate] = []
    for etas in itertools.product(axis, repeat=4):
        c = search.evaluate(etas)
        if c is not None:
            pool.append(c)
    if not pool:
        raise NoFeasiblePoint(
            "no grid point satisfies the subsystem-entropy constraint"
            if search.constrained
            else "every grid point has vanishing success probability"
        )

    ranked: list[Candidate] = []
    for c in sorted(pool, key=lambda c: (-c.eof, -c.probability, tuple(-e for e in c.etas))):
        if c not in ranked:
            ranked.append(c)
        if len(ranked) >= cfg.starts:
            break
    # the arm-balanced point is where local filtering usually peaks; always refine it
    seed = search.evaluate(balance_arms(rho, (1.0, 1.0, 1.0, 1.0)))
    if seed is not None and seed not in ranked:
        ranked.append(seed)

    history = [max(c.eof for c in ranked)]
    step = 1.0 / (cfg.grid_resolution - 1)
    current = list(ranked)
    for r in range(cfg.refine_rounds):
        half = step / 2.0**r
        for k, cand in enumerate(current):
            for ax in range(4):
                x = cand.etas[ax]
                found = search.golden(cand, ax, max(0.0, x - half), min(1.0, x + half))
                if found is not None and _improves(found, cand):
                    cand = found
            current[k] = cand
        history.append(max(history[-1], max(c.eof for c in current)))

    feasible = [c for c in search.cache.values() if c is not None]
    best = _select(feasible, tol)
    # each arm's overall scale leaves the state unchanged but raises the probability
    polished = search.evaluate(normalize_arms(*best.etas).as_tuple())
    if polished is not None:
        best = _select([best, polished], tol)

    settings = FilterSettings(*best.etas)
    outcome = apply_filter(rho, settings)
    rep = report(outcome.state)
    residuals = (abs(rep.entropy_a - 1.0), abs(rep.entropy_b - 1.0))
    return OptimizeResult(
        settings=settings,
        outcome=outcome,
        report=rep,
        constraint_residuals=residuals,
        history=tuple(history),
        trace=tuple(search.trace),
    )
