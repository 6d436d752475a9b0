"""Dense complex linear algebra for 2-64 dimensional Hilbert spaces.

Matrices are plain ``complex128`` numpy arrays. Every function returns a new
array and never mutates its inputs.
"""
from typing import NamedTuple

import numpy as np

from . import _kernels

MAX_DIM = 64
HERMITIAN_TOL = 1e-12


class NumericalContractError(ArithmeticError):
    """An internal numerical invariant was violated."""


class NotHermitianError(NumericalContractError, ValueError):
    def __init__(self, defect):
        self.defect = defect
        super().__init__(f"matrix is not Hermitian: max |A - A^dagger| = {defect:.3e}")


class EigenDecomposition(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


def as_matrix(a):
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    return m


def dagger(a):
    return as_matrix(a).conj().T


def matmul(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b


def trace(a):
    return complex(np.trace(as_matrix(a)))


def frobenius_norm(a):
    return float(np.linalg.norm(as_matrix(a)))


def hermiticity_defect(a):
    a = as_matrix(a)
    return float(np.max(np.abs(a - a.conj().T)))


def kron(a, b):
    """Kronecker product; ``a`` carries the slow index."""
    return np.kron(as_matrix(a), as_matrix(b))


def _checked_hermitian(a):
    a = as_matrix(a)
    if a.shape[0] > MAX_DIM:
        raise ValueError(f"dimension {a.shape[0]} exceeds the supported bound {MAX_DIM}")
    defect = hermiticity_defect(a)
    if defect > HERMITIAN_TOL * max(1.0, float(np.max(np.abs(a)))):
        raise NotHermitianError(defect)
    return 0.5 * (a + a.conj().T)


def hermitian_eig(a):
    """Eigen-decompose a Hermitian matrix with cyclic Jacobi rotations.

    Eigenvalues come back ascending; column ``i`` of ``vectors`` belongs to
    ``values[i]``. Within a degenerate subspace the basis is arbitrary.
    """
    h = _checked_hermitian(a)
    values, vectors, _ = _kernels.jacobi_eigh(h)
    return EigenDecomposition(values, vectors)


def expi_hermitian(a, t):
    """Return ``exp(-i a t)`` for Hermitian ``a``."""
    values, vectors = hermitian_eig(a)
    return (vectors * np.exp(-1j * values * t)) @ vectors.conj().T


def partial_trace(rho, dim_keep, dim_drop, drop_last=True):
    """Trace out one factor of a bipartite operator.

    With ``drop_last`` the dropped factor is the fast (trailing) tensor index,
    otherwise it is the slow one.
    """
    rho = as_matrix(rho)
    if dim_keep < 1 or dim_drop < 1 or rho.shape[0] != dim_keep * dim_drop:
        raise ValueError(
            f"dimension mismatch: {rho.shape[0]} != {dim_keep} * {dim_drop}")
    if drop_last:
        return np.einsum("ijkj->ik", rho.reshape(dim_keep, dim_drop, dim_keep, dim_drop))
    return np.einsum("jijk->ik", rho.reshape(dim_drop, dim_keep, dim_drop, dim_keep))
