"""Numerical search for the best local filter.

The closed-form settings only exist for a few families.  optimize_eof runs a
coarse grid over the four transmissions, refines the best points by golden
section search, and breaks EOF ties in favour of success probability.  Here it
is checked against the closed form for a two-Bell mixture and then run on a
random state with no closed form at all.
"""
from __future__ import annotations

import math

from polfilter import optimize
from polfilter.filtering import apply_filter, solve_constraints
from polfilter.measures import report
from polfilter.states import Family, FamilyParams, random_density, two_bell_mixture

params = FamilyParams(Family.TWO_BELL, gamma=0.7, theta1=math.pi / 4, theta2=0.3)
rho = two_bell_mixture(0.7, math.pi / 4, 0.3)
closed = apply_filter(rho, solve_constraints(params))
print(f"two-Bell input EOF        {report(rho).eof:.4f}")
print(f"closed-form filter        EOF {report(closed.state).eof:.4f}  P {closed.probability:.3f}")
for mode in optimize.Mode:
    res = optimize.optimize_eof(rho, optimize.OptimizeConfig(mode=mode))
    print(f"optimizer ({mode.value:<12}) EOF {res.report.eof:.4f}  P {res.outcome.probability:.3f}")
    print(f"  history {' '.join(f'{h:.4f}' for h in res.history)}")

rho = random_density(11, rank=2)
res = optimize.optimize_eof(rho)
print(f"random rank-2 state       EOF {report(rho).eof:.4f} -> {res.report.eof:.4f}"
      f"  P {res.outcome.probability:.3f}  etas {tuple(round(x, 3) for x in res.settings.as_tuple())}")
