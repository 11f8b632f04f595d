"""Local polarisation filtering of two-qubit entangled states.

Beam splitters in each arm of a photon pair attenuate the V and H modes
independently; keeping only coincidences applies a local diagonal filter to
the two-qubit state.  The package builds the relevant state families, applies
the filter, computes entanglement and entropy measures, searches for the
settings that concentrate entanglement, and writes sweep data as CSV.
"""
from .filtering import (
    IDENTITY,
    FilterOutcome,
    FilterSettings,
    NoSolution,
    VanishingEnsemble,
    apply_filter,
    mode_level_filter,
    solve_constraints,
)
from .measures import MeasureReport, concurrence, eof, linear_entropy, report, subsystem_entropy, von_neumann_joint
from .optimize import Mode, NoFeasiblePoint, OptimizeConfig, OptimizeResult, optimize_eof
from .qlinalg import ConvergenceFailure, DensityMatrix2, DensityMatrix4, InvalidState, NotHermitian, partial_trace
from .states import (
    Family,
    FamilyParams,
    ParamOutOfRange,
    PureState4,
    bell_phi,
    bell_psi,
    build,
    entangled_separable,
    mems_bound_state,
    random_density,
    random_pure,
    two_bell_mixture,
    werner,
)

__version__ = "0.1.0"
