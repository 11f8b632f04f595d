import io
import math
import subprocess
import sys

import pytest

from polfilter import cli


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def parse(text):
    return {k: v for k, v in (line.split() for line in text.splitlines())}


def test_measures_werner():
    code, out, _ = run("measures", "--family", "werner", "--gamma", "0.5", "--theta", "0.7853981634")
    assert code == 0
    vals = parse(out)
    assert float(vals["concurrence"]) == pytest.approx(0.25, abs=1e-9)
    assert vals["entropy_a"] == "1"


def test_measures_bell():
    code, out, _ = run("measures", "--family", "bell-phi", "--theta", "0.7853981634")
    vals = parse(out)
    assert vals["eof"] == "1" and vals["entropy_joint"] == "0"


def test_measures_matrix_file(tmp_path):
    f = tmp_path / "maxmixed.mat"
    f.write_text("\n".join(" ".join("0.25+0j" if i == j else "0+0j" for j in range(4)) for i in range(4)) + "\n")
    code, out, _ = run("measures", "--matrix-file", str(f))
    vals = parse(out)
    assert code == 0
    assert vals["entropy_joint"] == "1" and vals["linear_entropy"] == "1"


@pytest.mark.parametrize(
    "body, invariant",
    [
        ("0.5 0 0 0\n0 0.5 0 0\n0 0 0.5 0\n0 0 0 0\n", "trace"),
        ("0.5 0 0 0\n0 0.5 0 0\n0 0 0 0\n", "shape"),
        ("0.5 0.1j 0 0\n0 0.5 0 0\n0 0 0 0\n0 0 0 0\n", "hermitian"),
        ("1.2 0 0 0\n0 -0.2 0 0\n0 0 0 0\n0 0 0 0\n", "psd"),
        ("0.5 abc 0 0\n0 0.5 0 0\n0 0 0 0\n0 0 0 0\n", "finite"),
    ],
)
def test_invalid_matrix_exit_2(tmp_path, body, invariant):
    f = tmp_path / "bad.mat"
    f.write_text(body)
    code, _, err = run("measures", "--matrix-file", str(f))
    assert code == 2
    assert invariant in err


def test_bad_parameters_exit_2():
    assert run("measures", "--family", "werner", "--gamma", "1.5")[0] == 2
    assert run("measures")[0] == 2
    assert run("measures", "--family", "werner", "--seed", "3")[0] == 2
    assert run("measures", "--family", "werner", "--theta", "1", "--theta-deg", "10")[0] == 2
    assert run("filter", "--family", "werner", "--eta-va", "1.5")[0] == 2


def test_theta_deg_matches_radians():
    a = run("measures", "--family", "bell-psi", "--theta-deg", "30")[1]
    b = run("measures", "--family", "bell-psi", "--theta", str(math.pi / 6))[1]
    assert a == b


def test_random_state_source():
    code, out, _ = run("measures", "--seed", "4", "--rank", "1")
    assert code == 0 and parse(out)["linear_entropy"] == "0"
    assert run("measures", "--seed", "4", "--rank", "9")[0] == 2


def test_filter_pure_state_with_oracle():
    code, out, _ = run(
        "filter", "--family", "bell-psi", "--theta-deg", "30", "--eta-va", str(math.tan(math.pi / 6)), "--oracle"
    )
    vals = parse(out)
    assert code == 0
    assert float(vals["probability"]) == pytest.approx(0.5, abs=1e-12)
    assert float(vals["concurrence"]) == pytest.approx(1, abs=1e-12)
    assert float(vals["oracle_distance"]) < 1e-10


def test_filter_identity_equals_measures():
    args = ("--family", "two-bell", "--gamma", "0.3", "--theta1", "0.4", "--theta2", "1.0")
    f = parse(run("filter", *args)[1])
    m = parse(run("measures", *args)[1])
    assert f["probability"] == "1"
    assert all(f[k] == v for k, v in m.items())


def test_filter_ent_sep_path():
    code, out, _ = run("filter", "--family", "ent-sep", "--gamma", "0.3", "--epsilon", "0.1")
    assert code == 0
    g, eps = 0.3, 0.1
    closed = g * eps**2 / (g * eps**2 + (1 - g) * eps**4)
    assert float(parse(out)["concurrence"]) == pytest.approx(closed, abs=1e-11)


def test_filter_solve_flag():
    code, out, _ = run("filter", "--family", "bell-phi", "--theta", "0.3", "--solve")
    assert code == 0 and float(parse(out)["concurrence"]) == pytest.approx(1, abs=1e-12)


def test_filter_vanishing_exit_3():
    code, _, err = run("filter", "--family", "bell-phi", "--eta-va", "0", "--eta-ha", "0")
    assert code == 3 and "vanishing" in err


def test_sweep_preset_to_file(tmp_path):
    out = tmp_path / "fig5.csv"
    assert run("sweep", "--preset", "fig5", "--out", str(out))[0] == 0
    again = tmp_path / "again.csv"
    run("sweep", "--preset", "fig5", "--out", str(again))
    assert out.read_bytes() == again.read_bytes()
    assert len(out.read_text().splitlines()) == 102


def test_sweep_preset_missing_flags_exit_2():
    code, _, err = run("sweep", "--preset", "fig3")
    assert code == 2 and "--gamma" in err


def test_sweep_custom_axis():
    code, out, _ = run("sweep", "--family", "werner", "--axis", "gamma", "--lo", "0", "--hi", "1", "--points", "2")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 3 and lines[1].startswith("0,") and lines[2].startswith("1,")


def test_sweep_custom_constrained_path():
    code, out, _ = run(
        "sweep", "--family", "ent-sep", "--gamma", "0.3", "--axis", "eta-path", "--path", "constrained",
        "--lo", "0.1", "--hi", "1", "--points", "3",
    )
    assert code == 0 and len(out.splitlines()) == 4


def test_bounds_cli():
    code, out, _ = run("bounds", "--curve", "mems", "--points", "3")
    assert code == 0
    assert out.splitlines()[-1] == "1,1,0,0"


def test_optimize_cli_and_trace(tmp_path):
    trace = tmp_path / "trace.csv"
    code, out, _ = run("optimize", "--family", "werner", "--gamma", "0.2", "--trace", str(trace))
    assert code == 0
    assert parse(out)["eof"] == "0"
    assert trace.read_text().splitlines()[0] == "eta_va,eta_ha,eta_vb,eta_hb,eof,probability,feasible"


def test_optimize_constrained_werner():
    code, out, _ = run(
        "optimize", "--family", "werner", "--gamma", "0.8", "--theta", str(math.atan(0.6)), "--mode", "subsystem"
    )
    vals = parse(out)
    assert code == 0
    assert float(vals["eta_va"]) ** 2 == pytest.approx(0.6, abs=0.05)
    assert float(vals["residual_a"]) <= 1e-6


def test_optimize_no_feasible_exit_4():
    code, _, err = run("optimize", "--family", "ent-sep", "--gamma", "0.3", "--mode", "subsystem")
    assert code == 4 and "feasible" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "polfilter", "measures", "--family", "werner", "--gamma", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "concurrence     1" in proc.stdout
