"""Concentrating a partially entangled pure state.

A pure state cos(t)|VH> + sin(t)|HV> carries less than one ebit when t is not
pi/4.  Attenuating the heavier amplitude with a single partial polariser in
arm A equalises the two terms; the photons that survive post-selection are
then in a maximally entangled state.  The price is the success probability
2 sin^2(t).
"""
from __future__ import annotations

import math

from polfilter import Family, FamilyParams, apply_filter, bell_psi, report, solve_constraints

print(f"{'theta/pi':>9} {'E before':>9} {'eta_va':>8} {'E after':>8} {'P':>8} {'2sin^2':>8}")
for frac in (1 / 12, 1 / 8, 1 / 6, 1 / 5, 1 / 4):
    t = frac * math.pi
    rho = bell_psi(t).density()
    s = solve_constraints(FamilyParams(Family.BELL_PSI, theta=t))
    out = apply_filter(rho, s)
    print(
        f"{frac:9.4f} {report(rho).eof:9.4f} {s.eta_va:8.4f} "
        f"{report(out.state).eof:8.4f} {out.probability:8.4f} {2 * math.sin(t) ** 2:8.4f}"
    )

# The only thing the filter needs to know is the amplitude ratio: eta_va = tan(t).
