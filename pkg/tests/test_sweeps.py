import csv
import io
import math

import numpy as np
import pytest

from polfilter import sweeps as sw
from polfilter.filtering import FilterSettings
from polfilter.measures import report
from polfilter.states import Family, FamilyParams, ParamOutOfRange, mems_bound_state, werner

from golden_specs import GOLDEN, path


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_header_is_exact():
    spec = sw.SweepSpec(FamilyParams(Family.WERNER), sw.Axis.GAMMA, 0.0, 1.0, points=3)
    assert sw.sweep_csv(spec).splitlines()[0] == (
        "axis,eta_va,eta_ha,eta_vb,eta_hb,probability,concurrence,eof,"
        "entropy_joint,entropy_a,entropy_b,linear_entropy,purity"
    )


def test_two_points_gives_endpoints():
    spec = sw.SweepSpec(FamilyParams(Family.WERNER), sw.Axis.GAMMA, 0.2, 0.9, points=2)
    rows = sw.run_sweep(spec)
    assert [r.axis_value for r in rows] == [0.2, 0.9]


def test_rows_match_direct_evaluation():
    spec = sw.SweepSpec(FamilyParams(Family.WERNER, theta=0.4), sw.Axis.GAMMA, 0.0, 1.0, points=11)
    for r in sw.run_sweep(spec):
        assert r.report.as_dict() == pytest.approx(report(werner(r.axis_value, 0.4)).as_dict(), abs=1e-13)
        assert r.probability == pytest.approx(1.0, abs=1e-15)


def test_axis_ascending_and_angle_axes():
    spec = sw.SweepSpec(
        FamilyParams(Family.TWO_BELL, gamma=0.5, theta2=0.4), sw.Axis.THETA1, 0.0, math.pi / 2, points=7
    )
    xs = [r.axis_value for r in sw.run_sweep(spec)]
    assert xs == sorted(xs)
    assert xs[-1] == math.pi / 2


def test_unison_path_settings():
    path = sw.EtaPath(sw.PathKind.UNISON, ("va", "vb"))
    s = path.settings(FamilyParams(Family.WERNER), 0.36)
    assert s.as_tuple() == pytest.approx((0.6, 1, 0.6, 1))
    s = sw.EtaPath(sw.PathKind.UNISON, ("hb",)).settings(FamilyParams(Family.WERNER), 0.25)
    assert s.as_tuple() == (1, 1, 1, 0.5)


def test_constrained_path_settings():
    p = FamilyParams(Family.ENT_SEP, gamma=0.3, theta=math.atan(0.5))
    s = sw.EtaPath(sw.PathKind.CONSTRAINED).settings(p, 0.1)
    assert s.as_tuple() == pytest.approx((0.05, 1, 0.1, 1))


def test_vanishing_rows_have_empty_measures():
    spec = sw.preset_spec("fig7", theta=math.pi / 4)
    rows = rows_of(sw.sweep_csv(spec))
    assert rows[0]["axis"] == "0"
    assert rows[0]["probability"] == "0"
    assert all(rows[0][k] == "" for k in ("concurrence", "eof", "purity"))
    assert rows[1]["eof"] != ""


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(lo=0.5, hi=0.5),
        dict(lo=-0.1, hi=0.5),
        dict(lo=0.0, hi=1.5),
        dict(lo=0.0, hi=1.0, points=1),
        dict(lo=0.0, hi=1.0, points=2.5),
    ],
)
def test_spec_validation(kwargs):
    with pytest.raises(ParamOutOfRange):
        sw.SweepSpec(FamilyParams(Family.WERNER), sw.Axis.GAMMA, **kwargs)


def test_constrained_path_excludes_zero():
    with pytest.raises(ParamOutOfRange):
        sw.SweepSpec(
            FamilyParams(Family.ENT_SEP), sw.Axis.ETA_PATH, 0.0, 1.0, eta_path=sw.EtaPath(sw.PathKind.CONSTRAINED)
        )
    with pytest.raises(ParamOutOfRange):
        sw.SweepSpec(FamilyParams(Family.ENT_SEP), sw.Axis.ETA_PATH, 0.1, 1.0)
    with pytest.raises(ParamOutOfRange):
        sw.EtaPath(sw.PathKind.UNISON, ("va", "xx"))


@pytest.mark.parametrize(
    "x, text",
    [(0.0, "0"), (-0.0, "0"), (1.0, "1"), (0.1, "0.1"), (1 / 3, "0.333333333333"), (2.5e-7, "2.5e-07"), (None, "")],
)
def test_number_format(x, text):
    assert sw.format_number(x) == text


def test_presets_enforce_required_and_fixed():
    with pytest.raises(ParamOutOfRange, match="--gamma --theta2"):
        sw.preset_spec("fig3")
    with pytest.raises(ParamOutOfRange, match="fixes gamma"):
        sw.preset_spec("fig5", gamma=0.5)
    with pytest.raises(ParamOutOfRange):
        sw.preset_spec("fig99")
    with pytest.raises(ParamOutOfRange):
        sw.preset_spec("fig9", channels=["va"])
    spec = sw.preset_spec("fig5")
    assert spec.family.gamma == 0.8 and spec.family.theta == pytest.approx(math.atan(0.6))
    assert spec.points == 101


def test_fig2_preset_shape():
    rows = sw.run_sweep(sw.preset_spec("fig2", theta1=0.3))
    e = [r.report.eof for r in rows]
    k = int(np.argmin(e))
    assert 0 < k < 100
    assert all(b < a for a, b in zip(e[:k], e[1 : k + 1]))
    assert all(b > a for a, b in zip(e[k:], e[k + 1 :]))
    for r in rows:
        assert r.report.entropy_a == pytest.approx(r.report.entropy_b, abs=1e-12)


def test_fig5_preset_single_interior_peak_with_balanced_subsystems():
    rows = sw.run_sweep(sw.preset_spec("fig5"))
    e = np.array([r.report.eof for r in rows])
    k = int(np.argmax(e))
    assert 0 < k < len(rows) - 1
    assert np.all(np.diff(e[: k + 1]) > 0) and np.all(np.diff(e[k:]) < 0)
    peak = rows[k].report
    assert peak.entropy_a == pytest.approx(1, abs=1e-6)
    assert peak.entropy_b == pytest.approx(1, abs=1e-6)


def test_bounds_examples():
    w = sw.bound_curve("werner", 101)
    assert w[0][0] == pytest.approx(1 / 3) and w[0][1] == 0.0
    m = sw.bound_curve("mems", 101)
    assert m[-1][1:] == (1.0, 0.0, 0.0)
    assert m[-1][0] == 1.0


def test_mems_curve_continuous_at_branch_point():
    below = report(mems_bound_state(2 / 3 - 1e-12))
    at = report(mems_bound_state(2 / 3))
    assert below.linear_entropy == pytest.approx(at.linear_entropy, abs=1e-10)
    assert below.eof == pytest.approx(at.eof, abs=1e-10)
    # linear entropy closed forms on both sides
    for g in np.linspace(0, 1, 31):
        sl = report(mems_bound_state(g)).linear_entropy
        ref = 8 / 3 * g * (1 - g) if g >= 2 / 3 else 8 / 9 - 2 * g * g / 3
        assert sl == pytest.approx(ref, abs=1e-12)
    rows = sw.bound_curve("mems", 301)
    steps = [abs(b[3] - a[3]) for a, b in zip(rows, rows[1:])]
    assert max(steps) < 0.01


def test_bounds_header_and_points():
    lines = sw.bounds_csv("mems", 5).splitlines()
    assert lines[0] == "gamma,eof,entropy_joint,linear_entropy"
    assert len(lines) == 6
    with pytest.raises(ParamOutOfRange):
        sw.bound_curve("mems", 1)


def test_write_csv_to_file(tmp_path):
    out = tmp_path / "x.csv"
    text = sw.bounds_csv("werner", 3, out)
    assert out.read_bytes() == text.encode("ascii")
    assert b"\r" not in out.read_bytes()


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_golden_files_regenerate_byte_identically(name):
    assert path(name).exists(), f"missing golden file; run python3 tests/golden_specs.py"
    assert GOLDEN[name]().encode("ascii") == path(name).read_bytes()


def test_fixed_settings_on_state_axes():
    spec = sw.SweepSpec(
        FamilyParams(Family.BELL_PSI), sw.Axis.THETA, 0.1, 0.7, points=4, settings=FilterSettings(eta_hb=0.5)
    )
    for r in sw.run_sweep(spec):
        assert r.settings == FilterSettings(eta_hb=0.5)
