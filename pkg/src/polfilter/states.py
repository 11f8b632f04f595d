"""Parametrised two-qubit state families and a seeded random-state sampler.

Basis order everywhere is VV, VH, HV, HH (arm A first).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .qlinalg import DensityMatrix4

_ANGLE_SLACK = 1e-12


class ParamOutOfRange(ValueError):
    pass


class Family(enum.Enum):
    BELL_PHI = "bell-phi"
    BELL_PSI = "bell-psi"
    TWO_BELL = "two-bell"
    WERNER = "werner"
    ENT_SEP = "ent-sep"
    MEMS = "mems"


@dataclass(frozen=True)
class FamilyParams:
    """Parameters selecting one member of a state family.

    Fields a family does not use are ignored.  ``theta`` is shared by the
    single-angle families; ``theta1``/``theta2`` are the angles of the
    phi+ and psi+ components of the two-Bell mixture.  For ``MEMS`` the
    ``gamma`` field is the bound-state parameter, not a mixing weight.
    """

    family: Family
    gamma: float = 1.0
    theta: float = math.pi / 4
    theta1: float = math.pi / 4
    theta2: float = math.pi / 4
    sign: int = 1

    def __post_init__(self):
        if not isinstance(self.family, Family):
            object.__setattr__(self, "family", Family(self.family))
        _check_unit("gamma", self.gamma)
        for name in ("theta", "theta1", "theta2"):
            _check_angle(name, getattr(self, name))
        if self.sign not in (1, -1):
            raise ParamOutOfRange(f"sign must be +1 or -1, got {self.sign!r}")


def _check_unit(name: str, x: float) -> None:
    if not (math.isfinite(x) and 0.0 <= x <= 1.0):
        raise ParamOutOfRange(f"{name}={x!r} outside [0, 1]")


def _check_angle(name: str, theta: float) -> None:
    if not (math.isfinite(theta) and -_ANGLE_SLACK <= theta <= math.pi / 2 + _ANGLE_SLACK):
        raise ParamOutOfRange(f"{name}={theta!r} outside [0, pi/2]")


@dataclass(frozen=True)
class PureState4:
    amplitudes: tuple[complex, complex, complex, complex]

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=np.complex128)
        if v.shape != (4,):
            raise ValueError("a two-qubit pure state needs exactly 4 amplitudes")
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"amplitudes have norm {norm!r}, expected 1")
        object.__setattr__(self, "amplitudes", tuple(complex(x) for x in v))

    @classmethod
    def normalized(cls, amplitudes) -> "PureState4":
        v = np.asarray(amplitudes, dtype=np.complex128)
        return cls(tuple(v / np.linalg.norm(v)))

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=np.complex128)

    def density(self) -> DensityMatrix4:
        v = self.vector
        return DensityMatrix4(np.outer(v, v.conj()))


def bell_phi(theta: float, sign: int = 1) -> PureState4:
    """cos(theta)|VV> + sign sin(theta)|HH>."""
    _check_angle("theta", theta)
    if sign not in (1, -1):
        raise ParamOutOfRange(f"sign must be +1 or -1, got {sign!r}")
    return PureState4((math.cos(theta), 0.0, 0.0, sign * math.sin(theta)))


def bell_psi(theta: float, sign: int = 1) -> PureState4:
    """cos(theta)|VH> + sign sin(theta)|HV>."""
    _check_angle("theta", theta)
    if sign not in (1, -1):
        raise ParamOutOfRange(f"sign must be +1 or -1, got {sign!r}")
    return PureState4((0.0, math.cos(theta), sign * math.sin(theta), 0.0))


def _projector(psi: PureState4) -> np.ndarray:
    v = psi.vector
    return np.outer(v, v.conj())


def two_bell_mixture(gamma: float, theta1: float, theta2: float) -> DensityMatrix4:
    """gamma |phi+(theta1)><phi+| + (1 - gamma) |psi+(theta2)><psi+|."""
    _check_unit("gamma", gamma)
    m = gamma * _projector(bell_phi(theta1)) + (1.0 - gamma) * _projector(bell_psi(theta2))
    return DensityMatrix4(m)


def werner(gamma: float, theta: float = math.pi / 4) -> DensityMatrix4:
    """(1 - gamma) I/4 + gamma |phi+(theta)><phi+(theta)|."""
    _check_unit("gamma", gamma)
    m = (1.0 - gamma) * np.eye(4, dtype=np.complex128) / 4.0 + gamma * _projector(bell_phi(theta))
    return DensityMatrix4(m)


def entangled_separable(gamma: float, theta: float = math.pi / 4) -> DensityMatrix4:
    """gamma |psi+(theta)><psi+(theta)| + (1 - gamma) |VV><VV|."""
    _check_unit("gamma", gamma)
    m = gamma * _projector(bell_psi(theta))
    m[0, 0] += 1.0 - gamma
    return DensityMatrix4(m)


def mems_g(gamma: float) -> float:
    return gamma / 2.0 if gamma >= 2.0 / 3.0 else 1.0 / 3.0


def mems_bound_state(gamma: float) -> DensityMatrix4:
    """Linear-entropy bound state: diag(1-2g, g, g, 0) with gamma/2 coupling VH-HV.

    ``g = gamma/2`` for ``gamma >= 2/3`` and ``1/3`` below; its concurrence is
    ``gamma``.
    """
    _check_unit("gamma", gamma)
    g = mems_g(gamma)
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = 1.0 - 2.0 * g
    m[1, 1] = m[2, 2] = g
    m[1, 2] = m[2, 1] = gamma / 2.0
    return DensityMatrix4(m)


def random_density(seed: int, rank: int = 4) -> DensityMatrix4:
    """Ginibre-ensemble state G G^H / Tr(G G^H) with G a 4 x rank complex Gaussian.

    Draws come from numpy's PCG64 generator seeded with ``seed``: real
    parts first, then imaginary parts, each as a row-major 4 x rank block.
    """
    if rank not in (1, 2, 3, 4):
        raise ParamOutOfRange(f"rank must be in 1..4, got {rank!r}")
    rng = np.random.Generator(np.random.PCG64(seed))
    g = rng.standard_normal((4, rank)) + 1j * rng.standard_normal((4, rank))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix4(m / np.trace(m).real)


def random_pure(seed: int) -> PureState4:
    """Haar-random pure state from the same seeded generator as :func:`random_density`."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return PureState4.normalized(rng.standard_normal(4) + 1j * rng.standard_normal(4))


def build(params: FamilyParams) -> DensityMatrix4:
    """Construct the density matrix named by ``params``."""
    f = params.family
    if f is Family.BELL_PHI:
        return bell_phi(params.theta, params.sign).density()
    if f is Family.BELL_PSI:
        return bell_psi(params.theta, params.sign).density()
    if f is Family.TWO_BELL:
        return two_bell_mixture(params.gamma, params.theta1, params.theta2)
    if f is Family.WERNER:
        return werner(params.gamma, params.theta)
    if f is Family.ENT_SEP:
        return entangled_separable(params.gamma, params.theta)
    if f is Family.MEMS:
        return mems_bound_state(params.gamma)
    raise ParamOutOfRange(f"unknown family {f!r}")
