"""Hamiltonians of two trapped ions coupled to a shared, two-level phonon mode.

Single-ion convention: index 0 is ``|+>``, index 1 is ``|->``, with
``sz|+> = |+>`` and ``s+|-> = |+>``. The phonon mode is truncated to
``{|0>, |1>}``.

Two basis orders are used throughout:

* two-ion order ``TWO_ION_BASIS`` = ``|++>, |+->, |-+>, |-->``
* joint order ``JOINT_BASIS`` = ``|++1>, |++0>, |+-1>, |-+1>, |--1>, |+-0>, |-+0>, |--0>``

The joint order is not a plain tensor order, see ``JOINT_FROM_TENSOR``.
"""
from dataclasses import dataclass
from enum import IntEnum
import math

import numpy as np

from .linalg import kron

TWO_ION_BASIS = ("++", "+-", "-+", "--")
JOINT_BASIS = ("++1", "++0", "+-1", "-+1", "--1", "+-0", "-+0", "--0")

# Tensor order is (two-ion index) * 2 + phonon number.
JOINT_FROM_TENSOR = np.array(
    [2 * TWO_ION_BASIS.index(lbl[:2]) + int(lbl[2]) for lbl in JOINT_BASIS])

SIGMA_Z = np.diag([1.0, -1.0]).astype(np.complex128)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=np.complex128)
SIGMA_MINUS = SIGMA_PLUS.T.copy()
PHONON_LOWER = np.array([[0, 1], [0, 0]], dtype=np.complex128)  # |0><1|
I2 = np.eye(2, dtype=np.complex128)
I4 = np.eye(4, dtype=np.complex128)


class Level(IntEnum):
    """Fixed labels of the two-ion energy eigenstates."""

    E1 = 0
    E2 = 1
    E3 = 2
    E4 = 3

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls[str(value).strip().upper()]
        except KeyError:
            raise ValueError(f"unknown level {value!r}; expected one of e1, e2, e3, e4") from None


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters in units with hbar = 1.

    ``b`` is the field of whichever stroke the parameters describe;
    ``kbt_h`` is the hot-bath temperature times Boltzmann's constant.
    """

    j: float
    b: float
    omega: float = 1.0
    k: float = 0.1
    kbt_h: float = 3.5

    def __post_init__(self):
        checks = (
            ("j", self.j >= 0, "must be >= 0 (antiferromagnetic coupling only)"),
            ("b", self.b > 0, "must be > 0"),
            ("omega", self.omega > 0, "must be > 0"),
            ("k", self.k >= 0, "must be >= 0"),
            ("kbt_h", self.kbt_h > 0, "must be > 0"),
        )
        for name, ok, msg in checks:
            value = getattr(self, name)
            if not (ok and math.isfinite(value)):
                raise ValueError(f"{name}={value!r} {msg}")

    def with_field(self, b):
        return ModelParams(self.j, b, self.omega, self.k, self.kbt_h)


@dataclass(frozen=True)
class SystemEigensystem:
    energies: np.ndarray
    states: np.ndarray  # row i is |E_{i+1}> in TWO_ION_BASIS

    def state(self, level):
        return self.states[Level.parse(level)]

    def projector(self, level):
        v = self.state(level)
        return np.outer(v, v.conj())


_R2 = 1.0 / math.sqrt(2.0)
SYSTEM_STATES = np.array([
    [0, 0, 0, 1],
    [1, 0, 0, 0],
    [0, -_R2, _R2, 0],
    [0, _R2, _R2, 0],
], dtype=np.complex128)


def tensor_to_joint(m):
    """Reorder an operator from spin-phonon tensor order to ``JOINT_BASIS``."""
    m = np.asarray(m)
    return m[np.ix_(JOINT_FROM_TENSOR, JOINT_FROM_TENSOR)]


def joint_to_tensor(m):
    m = np.asarray(m)
    out = np.empty_like(m)
    out[np.ix_(JOINT_FROM_TENSOR, JOINT_FROM_TENSOR)] = m
    return out


def build_h_s(j, b):
    if j < 0:
        raise ValueError(f"j={j!r} must be >= 0 (antiferromagnetic coupling only)")
    flip = kron(SIGMA_PLUS, SIGMA_MINUS) + kron(SIGMA_MINUS, SIGMA_PLUS)
    return j * flip + b * (kron(SIGMA_Z, I2) + kron(I2, SIGMA_Z))


def system_energies(j, b):
    return np.array([-2.0 * b, 2.0 * b, -j, j])


def system_eigensystem(j, b):
    if j < 0:
        raise ValueError(f"j={j!r} must be >= 0 (antiferromagnetic coupling only)")
    return SystemEigensystem(system_energies(j, b), SYSTEM_STATES.copy())


def _h1_terms():
    """dH1/dJ, dH1/dB, dH1/domega, dH1/dk in tensor order."""
    flip = kron(kron(SIGMA_PLUS, SIGMA_MINUS) + kron(SIGMA_MINUS, SIGMA_PLUS), I2)
    field = kron(kron(SIGMA_Z, I2) + kron(I2, SIGMA_Z), I2)
    phonon = kron(I4, PHONON_LOWER.conj().T @ PHONON_LOWER)
    coupling = np.zeros((8, 8), dtype=np.complex128)
    for ion in (kron(SIGMA_MINUS, I2), kron(I2, SIGMA_MINUS)):
        lower = kron(ion, PHONON_LOWER.conj().T)  # a^dagger sigma_-
        coupling += lower + lower.conj().T
    return flip, field, phonon, coupling


_H1_TERMS = tuple(tensor_to_joint(t) for t in _h1_terms())


def build_h1(p):
    """Joint spin-spin-phonon Hamiltonian in ``JOINT_BASIS`` order."""
    flip, field, phonon, coupling = _H1_TERMS
    return p.j * flip + p.b * field + p.omega * phonon + p.k * coupling


def field_operator():
    """Diagonal of dH1/dB in ``JOINT_BASIS`` order (total sigma_z)."""
    return _H1_TERMS[1].diagonal().real.copy()
