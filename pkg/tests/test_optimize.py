import itertools
import math

import numpy as np
import pytest

from polfilter import optimize as op
from polfilter.filtering import FilterSettings, apply_filter, solve_constraints
from polfilter.measures import eof
from polfilter.states import Family, FamilyParams, bell_psi, entangled_separable, two_bell_mixture, werner

from oracles import eof_oracle, filter_oracle


def test_pure_state_reaches_a_bell_state():
    res = op.optimize_eof(bell_psi(math.pi / 6).density())
    assert res.report.eof == pytest.approx(1, abs=1e-6)
    assert res.outcome.probability == pytest.approx(0.5, abs=1e-3)


def test_separable_werner_stays_at_zero():
    res = op.optimize_eof(werner(0.2))
    assert res.report.eof == 0.0


def test_grid_cannot_create_entanglement_from_separable_state():
    rho = werner(1 / 3)
    axis = np.linspace(0, 1, 8)
    worst = 0.0
    for etas in itertools.product(axis, repeat=4):
        m, p = filter_oracle(rho.m, etas)
        if p > 1e-12:
            worst = max(worst, eof_oracle(m))
    assert worst <= 1e-9
    assert op.optimize_eof(rho).report.eof <= 1e-9


@pytest.mark.parametrize("gamma", [0.4, 0.5, 0.8])
def test_maximal_werner_prefers_identity(gamma):
    res = op.optimize_eof(werner(gamma))
    assert res.settings.as_tuple() == (1.0, 1.0, 1.0, 1.0)
    assert res.report.eof == pytest.approx(eof(werner(gamma)), abs=1e-12)
    assert res.outcome.probability == 1.0


def test_constrained_werner_finds_the_balance_point():
    g, t = 0.8, math.atan(0.6)
    res = op.optimize_eof(werner(g, t), op.OptimizeConfig(mode="subsystem"))
    closed = solve_constraints(FamilyParams(Family.WERNER, gamma=g, theta=t))
    assert res.settings.as_tuple() == pytest.approx(closed.as_tuple(), abs=1 / 7)
    assert res.settings.eta_va**2 == pytest.approx(0.6, abs=0.05)
    assert max(res.constraint_residuals) <= 1e-6


def test_constrained_ent_sep_reports_no_feasible_point():
    with pytest.raises(op.NoFeasiblePoint):
        op.optimize_eof(entangled_separable(0.3), op.OptimizeConfig(mode="subsystem"))


@pytest.mark.parametrize(
    "params, rho",
    [
        (FamilyParams(Family.TWO_BELL, gamma=0.7, theta1=math.pi / 4, theta2=0.3), two_bell_mixture(0.7, math.pi / 4, 0.3)),
        (FamilyParams(Family.WERNER, gamma=0.8, theta=math.atan(0.6)), werner(0.8, math.atan(0.6))),
        (FamilyParams(Family.BELL_PSI, theta=0.4), bell_psi(0.4).density()),
    ],
)
def test_optimizer_matches_or_beats_closed_form(params, rho):
    closed = eof(apply_filter(rho, solve_constraints(params)).state)
    for mode in op.Mode:
        res = op.optimize_eof(rho, op.OptimizeConfig(mode=mode))
        assert res.report.eof >= closed - 1e-6


def test_deterministic():
    rho = two_bell_mixture(0.6, 0.5, 0.9)
    a, b = op.optimize_eof(rho), op.optimize_eof(rho)
    assert a.settings == b.settings
    assert a.history == b.history
    assert a.report == b.report


@pytest.mark.parametrize("rounds", [1, 2, 4])
def test_history_is_monotone(rounds):
    res = op.optimize_eof(two_bell_mixture(0.7, math.pi / 4, 0.3), op.OptimizeConfig(refine_rounds=rounds))
    assert len(res.history) == rounds + 1
    assert all(b >= a for a, b in zip(res.history, res.history[1:]))
    assert res.report.eof >= res.history[-1] - 1e-9


def test_tie_break_prefers_probability():
    # every setting with eta_va = eta_ha gives the same Werner output, so the
    # unconstrained search must pick the scale with the largest probability
    res = op.optimize_eof(werner(0.5))
    assert res.outcome.probability == 1.0


def test_min_probability_floor():
    cfg = op.OptimizeConfig(min_probability=0.6)
    res = op.optimize_eof(bell_psi(math.pi / 6).density(), cfg)
    assert res.outcome.probability >= 0.6
    assert res.report.eof < 1 - 1e-3


def test_trace_records_candidates():
    res = op.optimize_eof(werner(0.5), op.OptimizeConfig(record_trace=True))
    assert len(res.trace) >= 8**4
    assert all(isinstance(t, op.TraceRow) for t in res.trace)
    assert any(t.eof is None for t in res.trace)  # the all-blocked corner


def test_config_validation():
    with pytest.raises(ValueError):
        op.OptimizeConfig(grid_resolution=4)
    with pytest.raises(ValueError):
        op.OptimizeConfig(refine_rounds=0)
    with pytest.raises(ValueError):
        op.OptimizeConfig(min_probability=2)


def test_balance_arms_equalises_reduced_diagonals():
    rho = two_bell_mixture(0.7, math.pi / 4, 0.3)
    s = FilterSettings(*op.balance_arms(rho, (1, 1, 1, 1)))
    m = apply_filter(rho, s).state.m
    d = np.real(np.diag(m))
    assert d[0] + d[1] == pytest.approx(0.5, abs=1e-12)
    assert d[0] + d[2] == pytest.approx(0.5, abs=1e-12)
    # a zero diagonal weight means balance is only reachable in a limit
    assert op.balance_arms(entangled_separable(0.3), (0.5, 1, 1, 1)) == (0.5, 1, 1, 1)
