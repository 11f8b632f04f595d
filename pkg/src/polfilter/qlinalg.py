"""Small fixed-size complex linear algebra for one- and two-qubit operators.

Everything here works on 2x2 and 4x4 complex ``numpy`` arrays.  The two
density-matrix wrappers validate their invariants once, at construction, and
hold a read-only copy of the matrix afterwards.
"""
from __future__ import annotations

import math

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_FLOOR = -1e-10

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


class NotHermitian(ValueError):
    pass


class ConvergenceFailure(ArithmeticError):
    pass


class InvalidState(ValueError):
    """Raised when a matrix fails one of the density-matrix invariants.

    ``invariant`` names the violated condition (``"shape"``, ``"finite"``,
    ``"hermitian"``, ``"trace"`` or ``"psd"``).
    """

    def __init__(self, invariant: str, detail: str):
        super().__init__(f"{invariant}: {detail}")
        self.invariant = invariant


def _as_matrix(m, dim: int | None = None) -> np.ndarray:
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise ValueError(f"expected a {dim}x{dim} matrix, got shape {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def hermiticity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - dagger(m))))


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two 2x2 matrices, ``out[2i+k, 2j+l] = a[i,j] b[k,l]``."""
    a = _as_matrix(a, 2)
    b = _as_matrix(b, 2)
    return np.kron(a, b)


def partial_trace_matrix(m, keep: str) -> np.ndarray:
    """Partial trace of an arbitrary 4x4 operator; ``keep`` is ``"A"`` or ``"B"``."""
    r = _as_matrix(m, 4).reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ikjk->ij", r)
    if keep == "B":
        return np.einsum("kikj->ij", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def _jacobi(m: np.ndarray, vectors: bool = False):
    n = m.shape[0]
    a = [[complex(m[i, j]) for j in range(n)] for i in range(n)]
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)] if vectors else None
    scale = max(1.0, math.sqrt(sum(abs(x) ** 2 for row in a for x in row)))
    tol = JACOBI_TOL * scale
    for _ in range(JACOBI_MAX_SWEEPS):
        off = math.sqrt(sum(abs(a[i][j]) ** 2 for i in range(n) for j in range(n) if i != j))
        if off <= tol:
            return [a[i][i].real for i in range(n)], v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                tau = (a[q][q].real - a[p][p].real) / (2.0 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # J = [[c, s], [-s conj(phase), c conj(phase)]] on (p, q); A <- J^H A J
                jpp, jpq = c, s
                jqp, jqq = -s * phase.conjugate(), c * phase.conjugate()
                for k in range(n):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = akp * jpp + akq * jqp
                    a[k][q] = akp * jpq + akq * jqq
                for k in range(n):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = jpp * apk + jqp.conjugate() * aqk
                    a[q][k] = jpq * apk + jqq.conjugate() * aqk
                if v is not None:
                    for k in range(n):
                        vkp, vkq = v[k][p], v[k][q]
                        v[k][p] = vkp * jpp + vkq * jqp
                        v[k][q] = vkp * jpq + vkq * jqq
                a[p][q] = a[q][p] = 0j
                a[p][p] = complex(a[p][p].real, 0.0)
                a[q][q] = complex(a[q][q].real, 0.0)
    raise ConvergenceFailure(f"Jacobi sweeps exceeded {JACOBI_MAX_SWEEPS}")


def hermitian_eigenvalues(m) -> np.ndarray:
    """Eigenvalues of a Hermitian 2x2 or 4x4 matrix, in descending order.

    Uses cyclic complex Jacobi rotations until the off-diagonal Frobenius
    norm drops below ``1e-14`` (relative to the matrix norm when that exceeds
    one).
    """
    vals, _ = _jacobi(_checked_hermitian(m))
    return np.array(sorted(vals, reverse=True))


def hermitian_eigh(m) -> tuple[np.ndarray, np.ndarray]:
    """Descending eigenvalues and the matching orthonormal eigenvectors (as columns)."""
    vals, vecs = _jacobi(_checked_hermitian(m), vectors=True)
    order = sorted(range(len(vals)), key=lambda i: -vals[i])
    v = np.array(vecs, dtype=np.complex128)
    return np.array([vals[i] for i in order]), v[:, order]


def _checked_hermitian(m) -> np.ndarray:
    a = _as_matrix(m)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    err = hermiticity_error(a)
    if err > 1e-9:
        raise NotHermitian(f"max|m - m^H| = {err:.3e}")
    return 0.5 * (a + dagger(a))


def eigenvalues_general4(m) -> np.ndarray:
    """All four (complex) eigenvalues of a general 4x4 matrix.

    Backed by LAPACK ``zgeev``; a failure to converge there surfaces as
    :class:`ConvergenceFailure`.
    """
    a = _as_matrix(m, 4)
    if not np.all(np.isfinite(a)):
        raise ConvergenceFailure("matrix has non-finite entries")
    try:
        vals = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return vals.astype(np.complex128)


class _Density:
    dim = 0

    def __init__(self, m):
        a = _as_matrix(m)
        if a.shape != (self.dim, self.dim):
            raise InvalidState("shape", f"expected {self.dim}x{self.dim}, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidState("finite", "matrix has NaN or Inf entries")
        herr = hermiticity_error(a)
        if herr > HERMITIAN_TOL:
            raise InvalidState("hermitian", f"max|m - m^H| = {herr:.3e} > {HERMITIAN_TOL:g}")
        tr = complex(np.trace(a))
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidState("trace", f"Tr m = {tr.real:.15g}{tr.imag:+.3g}j, expected 1")
        evals = hermitian_eigenvalues(a)
        if evals[-1] < PSD_FLOOR:
            raise InvalidState("psd", f"min eigenvalue {evals[-1]:.3e} < {PSD_FLOOR:g}")
        a.setflags(write=False)
        self._m = a
        self._evals = evals

    @property
    def m(self) -> np.ndarray:
        return self._m

    @property
    def eigenvalues(self) -> np.ndarray:
        """Descending eigenvalues, computed once at validation time."""
        return self._evals

    def __array__(self, dtype=None, copy=None):
        return self._m if dtype is None else self._m.astype(dtype)

    def __eq__(self, other):
        return type(other) is type(self) and np.array_equal(self._m, other._m)

    def __hash__(self):
        return hash(self._m.tobytes())

    def __repr__(self):
        return f"{type(self).__name__}({np.array2string(self._m, precision=6)})"


class DensityMatrix4(_Density):
    """Two-qubit state in the ordered basis VV, VH, HV, HH."""

    dim = 4


class DensityMatrix2(_Density):
    dim = 2


def partial_trace(rho: DensityMatrix4, keep: str) -> DensityMatrix2:
    """Reduced state of subsystem ``keep`` (``"A"`` or ``"B"``)."""
    return DensityMatrix2(partial_trace_matrix(rho.m, keep))


def trace_distance(a, b) -> float:
    d = np.asarray(a) - np.asarray(b)
    return 0.5 * float(np.sum(np.abs(hermitian_eigenvalues(d))))

