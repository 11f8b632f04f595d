"""Entanglement and mixedness measures for two-qubit states."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .qlinalg import (
    ConvergenceFailure,
    DensityMatrix4,
    eigenvalues_general4,
    hermitian_eigenvalues,
    partial_trace_matrix,
    tensor,
)

SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
YY = tensor(SIGMA_Y, SIGMA_Y)

# eigenvalues of rho @ rho_tilde: tolerated imaginary part, negative clamp,
# and the floor below which a value is indistinguishable from rounding noise
IMAG_TOL = 1e-8
NEG_CLAMP = -1e-8
NOISE_FLOOR = 1e-14

EIG_CLAMP = -1e-10


@dataclass(frozen=True)
class MeasureReport:
    concurrence: float
    eof: float
    entropy_joint: float
    entropy_a: float
    entropy_b: float
    linear_entropy: float
    purity: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def _matrix(rho) -> np.ndarray:
    return rho.m if isinstance(rho, DensityMatrix4) else np.asarray(rho, dtype=np.complex128)


def spin_flip(rho: DensityMatrix4) -> np.ndarray:
    """(sigma_y x sigma_y) rho* (sigma_y x sigma_y), conjugation in the VV..HH basis."""
    return YY @ np.conj(_matrix(rho)) @ YY


def wootters_lambdas(rho: DensityMatrix4) -> np.ndarray:
    """Square roots of the eigenvalues of rho @ spin_flip(rho), descending."""
    m = _matrix(rho)
    vals = eigenvalues_general4(m @ spin_flip(rho))
    if np.max(np.abs(vals.imag)) > IMAG_TOL:
        raise ConvergenceFailure(
            f"rho rho~ has eigenvalue with imaginary part {np.max(np.abs(vals.imag)):.3e}"
        )
    re = vals.real
    if np.min(re) < NEG_CLAMP:
        raise ConvergenceFailure(f"rho rho~ has negative eigenvalue {np.min(re):.3e}")
    re = np.where(re <= NOISE_FLOOR, 0.0, re)
    return np.sort(np.sqrt(re))[::-1]


def concurrence(rho: DensityMatrix4) -> float:
    lam = wootters_lambdas(rho)
    c = lam[0] - lam[1] - lam[2] - lam[3]
    return float(min(max(c, 0.0), 1.0))


def binary_entropy(x: float) -> float:
    """Base-2 binary entropy with 0 log 0 = 0."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def eof_from_concurrence(c: float) -> float:
    c = min(max(c, 0.0), 1.0)
    return binary_entropy((1.0 + math.sqrt(1.0 - c * c)) / 2.0)


def eof(rho: DensityMatrix4) -> float:
    return eof_from_concurrence(concurrence(rho))


def _entropy(evals, base: float) -> float:
    s = 0.0
    for lam in map(float, evals):
        if lam < EIG_CLAMP:
            raise ValueError(f"negative eigenvalue {lam:.3e} in entropy")
        # rounding-level eigenvalues (near 0 or near 1) would otherwise leave
        # ~1e-16 of entropy on pure states
        if NOISE_FLOOR < lam < 1.0 - NOISE_FLOOR:
            s -= lam * math.log(lam)
    return min(max(s / math.log(base), 0.0), 1.0)


def von_neumann_joint(rho: DensityMatrix4) -> float:
    """Joint entropy in base 4, so that I/4 scores exactly one."""
    evals = rho.eigenvalues if isinstance(rho, DensityMatrix4) else hermitian_eigenvalues(rho)
    return _entropy(evals, 4.0)


def subsystem_entropy(rho: DensityMatrix4, which: str) -> float:
    """Base-2 entropy of the reduced state of ``which`` (``"A"`` or ``"B"``)."""
    return _entropy(hermitian_eigenvalues(partial_trace_matrix(_matrix(rho), which)), 2.0)


def purity(rho: DensityMatrix4) -> float:
    m = _matrix(rho)
    return float(np.real(np.vdot(m, m)))


def linear_entropy(rho: DensityMatrix4) -> float:
    """(4/3)(1 - Tr rho^2), normalised to [0, 1]."""
    d = 1.0 - purity(rho)
    if d <= NOISE_FLOOR:
        return 0.0
    return min(4.0 / 3.0 * d, 1.0)


def report(rho: DensityMatrix4) -> MeasureReport:
    c = concurrence(rho)
    return MeasureReport(
        concurrence=c,
        eof=eof_from_concurrence(c),
        entropy_joint=von_neumann_joint(rho),
        entropy_a=subsystem_entropy(rho, "A"),
        entropy_b=subsystem_entropy(rho, "B"),
        linear_entropy=linear_entropy(rho),
        purity=purity(rho),
    )
