"""The beam-splitter protocol as a local filter, plus its photonic-mode oracle.

Each of the four polarisation modes (V and H in arms A and B) meets a
variable beam splitter with amplitude transmission ``eta``.  Keeping only
coincidence events (one transmitted photon in each arm) is equivalent to the
diagonal local filter ``A (x) B`` with ``A = diag(eta_va, eta_ha)`` and
``B = diag(eta_vb, eta_hb)``.  :func:`apply_filter` implements that filter on
density matrices; :func:`full_mode_output` and :func:`coincidence_project`
rebuild the same result mode by mode, which makes them an independent check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qlinalg import DensityMatrix4, hermitian_eigenvalues, hermitian_eigh
from .states import Family, FamilyParams, ParamOutOfRange, PureState4

VANISHING_P = 1e-12

# mode labels for the extended space: 0 = vacuum, 1 = V, 2 = H
VAC, V, H = 0, 1, 2


class VanishingEnsemble(ArithmeticError):
    """No (numerically) nonzero subensemble survives the post-selection."""


class NoSolution(ValueError):
    pass


@dataclass(frozen=True)
class FilterSettings:
    eta_va: float = 1.0
    eta_ha: float = 1.0
    eta_vb: float = 1.0
    eta_hb: float = 1.0

    def __post_init__(self):
        for name, x in zip(("eta_va", "eta_ha", "eta_vb", "eta_hb"), self.as_tuple()):
            if not (math.isfinite(x) and 0.0 <= x <= 1.0):
                raise ParamOutOfRange(f"{name}={x!r} outside [0, 1]")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.eta_va, self.eta_ha, self.eta_vb, self.eta_hb)

    @property
    def eta_bar(self) -> float:
        return self.eta_va * self.eta_ha * self.eta_vb * self.eta_hb

    def arm(self, which: str) -> tuple[float, float]:
        """(eta_V, eta_H) for arm ``"A"`` or ``"B"``."""
        return (self.eta_va, self.eta_ha) if which == "A" else (self.eta_vb, self.eta_hb)


IDENTITY = FilterSettings()


@dataclass(frozen=True)
class FilterOutcome:
    state: DensityMatrix4
    probability: float


def filter_operator(s: FilterSettings) -> np.ndarray:
    """diag(eta_va eta_vb, eta_va eta_hb, eta_ha eta_vb, eta_ha eta_hb)."""
    return np.diag(
        np.array(
            [s.eta_va * s.eta_vb, s.eta_va * s.eta_hb, s.eta_ha * s.eta_vb, s.eta_ha * s.eta_hb],
            dtype=np.complex128,
        )
    )


def _filtered_unnormalized(m: np.ndarray, s: FilterSettings) -> np.ndarray:
    f = np.diag(filter_operator(s)).real
    return m * np.outer(f, f)


def apply_filter(rho: DensityMatrix4, s: FilterSettings) -> FilterOutcome:
    """Post-selected output state and its success probability.

    Raises :class:`VanishingEnsemble` when the probability is at most 1e-12.
    """
    out = _filtered_unnormalized(rho.m, s)
    p = float(np.trace(out).real)
    if p <= VANISHING_P:
        raise VanishingEnsemble(f"success probability {p:.3e} <= {VANISHING_P:g}")
    return FilterOutcome(DensityMatrix4(out / p), min(p, 1.0))


def filtered_probability(rho: DensityMatrix4, s: FilterSettings) -> float:
    f = np.diag(filter_operator(s)).real
    return float(np.dot(np.diag(rho.m).real, f * f))


def kraus_completion_check(s: FilterSettings) -> float:
    """Largest eigenvalue of (A x B)^H (A x B); at most one for physical settings."""
    f = filter_operator(s)
    return float(hermitian_eigenvalues(f.conj().T @ f)[0])


@dataclass(frozen=True)
class ExtendedState:
    """Amplitudes after all four beam splitters, before any detection.

    Indexed ``[arm_a, arm_b, refl_a, refl_b]`` with every slot in
    ``{VAC, V, H}``: the arm slots hold the transmitted photon and the
    ``refl`` slots the photon sent to that arm's ancilla (reflected) port.
    Keeping the reflected photon's polarisation makes the map an isometry;
    :meth:`ancilla_probabilities` gives the coarser "photon / no photon"
    record per ancilla.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=np.complex128)
        if a.shape != (3, 3, 3, 3):
            raise ValueError(f"extended state must have shape (3, 3, 3, 3), got {a.shape}")
        norm = float(np.linalg.norm(a))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"extended state has norm {norm!r}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    def coincidence_block(self) -> np.ndarray:
        """Unnormalised amplitudes on VV, VH, HV, HH with both ancillas empty."""
        return self.amplitudes[1:, 1:, VAC, VAC].reshape(4)

    def ancilla_probabilities(self) -> np.ndarray:
        """Probabilities indexed ``[arm_a, arm_b, anc_a, anc_b]``, ancilla slots in {0, 1}."""
        p = np.abs(self.amplitudes) ** 2
        out = np.zeros((3, 3, 2, 2))
        out[:, :, 0, 0] = p[:, :, VAC, VAC]
        out[:, :, 1, 0] = p[:, :, 1:, VAC].sum(axis=2)
        out[:, :, 0, 1] = p[:, :, VAC, 1:].sum(axis=2)
        out[:, :, 1, 1] = p[:, :, 1:, 1:].sum(axis=(2, 3))
        return out

    def block_probabilities(self) -> dict[str, float]:
        """Squared norms of the coincidence block and each ancilla-excited block."""
        q = self.ancilla_probabilities().sum(axis=(0, 1))
        return {
            "coincidence": float(q[0, 0]),
            "reflected_a": float(q[1, 0]),
            "reflected_b": float(q[0, 1]),
            "reflected_both": float(q[1, 1]),
        }


def _mode_map(pol: int, eta: float) -> list[tuple[int, int, float]]:
    # |pol>|0>  ->  eta |pol>|0> + sqrt(1 - eta^2) |0>|pol>
    return [(pol, VAC, eta), (VAC, pol, math.sqrt(max(0.0, 1.0 - eta * eta)))]


def _extend(vec: np.ndarray, s: FilterSettings) -> np.ndarray:
    out = np.zeros((3, 3, 3, 3), dtype=np.complex128)
    eta = {("A", V): s.eta_va, ("A", H): s.eta_ha, ("B", V): s.eta_vb, ("B", H): s.eta_hb}
    for idx, amp in enumerate(vec):
        if amp == 0:
            continue
        pa, pb = (V, H)[idx // 2], (V, H)[idx % 2]
        for arm_a, refl_a, ta in _mode_map(pa, eta["A", pa]):
            for arm_b, refl_b, tb in _mode_map(pb, eta["B", pb]):
                out[arm_a, arm_b, refl_a, refl_b] += amp * ta * tb
    return out


def full_mode_output(psi: PureState4, s: FilterSettings) -> ExtendedState:
    """Apply the four beam-splitter isometries to a pure input state."""
    return ExtendedState(_extend(psi.vector, s))


def coincidence_project(ext: ExtendedState) -> FilterOutcome:
    """Condition on one transmitted photon per arm and nothing in either ancilla."""
    block = ext.coincidence_block()
    p = float(np.vdot(block, block).real)
    if p <= VANISHING_P:
        raise VanishingEnsemble(f"coincidence probability {p:.3e} <= {VANISHING_P:g}")
    v = block / math.sqrt(p)
    return FilterOutcome(DensityMatrix4(np.outer(v, v.conj())), min(p, 1.0))


def mode_level_filter(rho: DensityMatrix4, s: FilterSettings) -> FilterOutcome:
    """Mode-by-mode route for a mixed input: decompose into eigenvectors,
    push each through the beam splitters and recombine the coincidence blocks
    with their eigenvalue weights."""
    vals, vecs = hermitian_eigh(rho.m)
    acc = np.zeros((4, 4), dtype=np.complex128)
    for lam, k in zip(vals, range(4)):
        if lam <= 0.0:
            continue
        block = _extend(vecs[:, k], s)[1:, 1:, VAC, VAC].reshape(4)
        acc += lam * np.outer(block, block.conj())
    p = float(np.trace(acc).real)
    if p <= VANISHING_P:
        raise VanishingEnsemble(f"coincidence probability {p:.3e} <= {VANISHING_P:g}")
    acc = 0.5 * (acc + acc.conj().T)
    return FilterOutcome(DensityMatrix4(acc / p), min(p, 1.0))


def normalize_arms(eta_va: float, eta_ha: float, eta_vb: float, eta_hb: float) -> FilterSettings:
    """Scale each arm so its larger transmission is one.

    The filtered state only depends on eta_va/eta_ha and eta_vb/eta_hb, and
    the success probability grows with each arm's overall scale, so this is
    the most probable representative of a given output state.
    """
    ma, mb = max(eta_va, eta_ha), max(eta_vb, eta_hb)
    if not (ma > 0.0 and mb > 0.0 and math.isfinite(ma) and math.isfinite(mb)):
        raise NoSolution(f"degenerate transmissions {(eta_va, eta_ha, eta_vb, eta_hb)!r}")
    return FilterSettings(eta_va / ma, eta_ha / ma, eta_vb / mb, eta_hb / mb)


def _ratio(num: float, den: float, what: str) -> float:
    if num <= 0.0 or den <= 0.0:
        raise NoSolution(f"{what}: no strictly positive transmissions satisfy the constraint")
    return num / den


def two_bell_transmissions(
    theta1: float, theta2: float, h_a: float = 1.0, h_b: float = 1.0
) -> tuple[float, float, float, float]:
    """Transmissions satisfying tan(theta1) = eta_va eta_vb / (eta_ha eta_hb)
    and tan(theta2) = eta_va eta_hb / (eta_ha eta_vb), given eta_ha = h_a and
    eta_hb = h_b.

    ``h_a``/``h_b`` are the residual freedom of the constraint set.  The
    values are not normalised and may exceed one; pass them through
    :func:`normalize_arms` for physical settings.
    """
    t1 = _ratio(math.sin(theta1), math.cos(theta1), "theta1")
    t2 = _ratio(math.sin(theta2), math.cos(theta2), "theta2")
    return (h_a * math.sqrt(t1 * t2), h_a, h_b * math.sqrt(t1 / t2), h_b)


def werner_balance_ratio(gamma: float, theta: float) -> float:
    """eta_V^2 / eta_H^2 (same in both arms) that makes both reduced states I/2.

    Solves (A + gamma cos^2) r^2 = A + gamma sin^2 with A = (1 - gamma)/4;
    for gamma = 1 this is r = tan(theta).
    """
    a = (1.0 - gamma) / 4.0
    num = a + gamma * math.sin(theta) ** 2
    den = a + gamma * math.cos(theta) ** 2
    return math.sqrt(_ratio(num, den, "werner"))


def solve_constraints(params: FamilyParams, epsilon: float | None = None) -> FilterSettings:
    """Closed-form settings that maximise both subsystem entropies.

    Pure Bell-type families get an exactly maximally entangled output at the
    largest success probability.  ``ENT_SEP`` and ``MEMS`` only reach
    maximal subsystem entropy in the limit of vanishing transmission, so
    they need ``epsilon`` (= eta_vb before normalisation) to pick a point on
    that path.
    """
    f = params.family
    c, s = math.cos(params.theta), math.sin(params.theta)
    if f is Family.BELL_PHI:
        # eta_va eta_vb cos = eta_ha eta_hb sin
        r = math.sqrt(_ratio(s, c, "bell-phi"))
        raw = (r, 1.0, r, 1.0)
    elif f is Family.BELL_PSI:
        # eta_va eta_hb cos = eta_ha eta_vb sin; attenuate only the heavier mode
        raw = (_ratio(s, c, "bell-psi"), 1.0, 1.0, 1.0) if c >= s else (1.0, _ratio(c, s, "bell-psi"), 1.0, 1.0)
    elif f is Family.TWO_BELL:
        raw = two_bell_transmissions(params.theta1, params.theta2)
    elif f is Family.WERNER:
        r = math.sqrt(werner_balance_ratio(params.gamma, params.theta))
        raw = (r, 1.0, r, 1.0)
    elif f in (Family.ENT_SEP, Family.MEMS):
        if epsilon is None:
            raise ValueError(f"{f.value} constraints need a path parameter epsilon in (0, 1]")
        if not (0.0 < epsilon <= 1.0):
            raise ParamOutOfRange(f"epsilon={epsilon!r} outside (0, 1]")
        t = _ratio(s, c, "ent-sep") if f is Family.ENT_SEP else 1.0
        raw = (epsilon * t, 1.0, epsilon, 1.0)
    else:
        raise ParamOutOfRange(f"no constraint solver for {f!r}")
    return normalize_arms(*raw)
