"""The four Otto strokes in the ideal adiabatic limit, plus a propagator check.

Heat and work follow the population/energy bookkeeping of a two-ion
working medium: heat changes populations at fixed levels, work changes
levels at fixed populations. The explicit time-ordered propagator is only
used to check how well the fixed-population assumption holds.
"""
from dataclasses import dataclass
import warnings

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import _kernels
from .linalg import (EigenDecomposition, NumericalContractError, as_matrix,
                     hermitian_eig, hermiticity_defect, partial_trace)
from .model import Level, build_h1, field_operator, joint_to_tensor, tensor_to_joint

UNREACHABLE_PROB = 1e-15


class AdiabaticContinuationWarning(UserWarning):
    """Eigenstates could not be followed unambiguously through a ramp."""


@dataclass(frozen=True)
class Populations:
    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (4,):
            raise ValueError(f"expected four populations, got shape {p.shape}")
        object.__setattr__(self, "p", p)

    def __getitem__(self, level):
        return float(self.p[Level.parse(level)])

    @classmethod
    def indicator(cls, level):
        p = np.zeros(4)
        p[Level.parse(level)] = 1.0
        return cls(p)

    def is_probability(self, tol=1e-10):
        return bool(np.all(self.p >= -tol) and np.all(self.p <= 1 + tol)
                    and abs(self.p.sum() - 1.0) <= tol)


@dataclass(frozen=True)
class ThermalState:
    """Gibbs state together with the eigensystem it was built from."""

    rho: np.ndarray
    kbt: float
    energies: np.ndarray
    vectors: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class StrokeLedger:
    q_h: float
    w1: float
    q_l: float
    w2: float

    @property
    def closure(self):
        return self.q_h + self.w1 + self.q_l + self.w2


@dataclass(frozen=True)
class MeasurementOutcome:
    prob: float
    phonon_state: np.ndarray | None
    post_populations: Populations

    @property
    def reachable(self):
        return self.phonon_state is not None


def boltzmann_weights(energies, kbt):
    if not kbt > 0:
        raise ValueError(f"kbt={kbt!r} must be > 0")
    e = np.asarray(energies, dtype=float)
    w = np.exp(-(e - e.min()) / kbt)
    return w / w.sum()


def gibbs_state(h1, kbt):
    values, vectors = hermitian_eig(h1)
    p = boltzmann_weights(values, kbt)
    rho = (vectors * p) @ vectors.conj().T
    return ThermalState(rho, float(kbt), values, vectors, p)


def reduced_system_state(ts):
    """Trace the phonon out of a joint-order density matrix.

    Accepts a ``ThermalState`` or a bare 8x8 matrix in ``JOINT_BASIS`` order.
    """
    rho = ts.rho if isinstance(ts, ThermalState) else as_matrix(ts)
    if rho.shape != (8, 8):
        raise ValueError(f"expected an 8x8 joint density matrix, got {rho.shape}")
    return partial_trace(joint_to_tensor(rho), 4, 2, drop_last=True)


def populations(rho_s, es):
    """Occupations <E_i|rho_S|E_i> of the fixed two-ion eigenstates."""
    rho_s = as_matrix(rho_s)
    if rho_s.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got {rho_s.shape}")
    states = es.states
    return Populations(np.einsum("ia,ab,ib->i", states.conj(), rho_s, states).real)


def heat_hot(e_h, p_hot, p_prev):
    return float(np.dot(e_h, p_hot.p - p_prev.p))


def work_expansion(p_hot, e_l, e_h):
    return float(np.dot(p_hot.p, np.subtract(e_l, e_h)))


def heat_cold(e_l, p_post, p_hot):
    return float(np.dot(e_l, p_post.p - p_hot.p))


def work_compression(p_post, e_h, e_l):
    return float(np.dot(p_post.p, np.subtract(e_h, e_l)))


def system_projector(es, level):
    """|E><E| (x) 1_phonon in ``JOINT_BASIS`` order."""
    return tensor_to_joint(np.kron(es.projector(level), np.eye(2)))


def measure_system(rho_l, es, target):
    """Selective projective measurement of the two-ion state onto ``target``."""
    rho = as_matrix(rho_l)
    if rho.shape != (8, 8):
        raise ValueError(f"expected an 8x8 joint density matrix, got {rho.shape}")
    proj = system_projector(es, target)
    projected = proj @ rho @ proj
    prob = float(np.trace(projected).real)
    post = Populations.indicator(target)
    if prob < UNREACHABLE_PROB:
        return MeasurementOutcome(max(prob, 0.0), None, post)
    phonon = partial_trace(joint_to_tensor(projected / prob), 2, 4, drop_last=False)
    return MeasurementOutcome(prob, phonon, post)


def ramp_hamiltonians(p_start, b_end, samples):
    """H1 along a linear field ramp, ``samples`` points including both ends."""
    return [build_h1(p_start.with_field(b))
            for b in np.linspace(p_start.b, b_end, samples)]


def time_ordered_propagator(p_start, b_end, tau, steps):
    """Midpoint product of slice exponentials for a linear ramp B_start -> b_end."""
    if not tau > 0:
        raise ValueError(f"tau={tau!r} must be > 0")
    if steps < 1:
        raise ValueError(f"steps={steps!r} must be >= 1")
    z = field_operator()
    h0 = build_h1(p_start) - np.diag(p_start.b * z)
    return _kernels.ramp_propagator(h0, z, p_start.b, b_end, tau, int(steps))


def unitarity_defect(u):
    u = as_matrix(u)
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))


def track_eigenstates(h_path, degeneracy_tol=1e-9):
    """Follow eigenvectors through a sequence of Hamiltonians.

    Returns ``(perm, final, ambiguous)`` where start eigenstate ``n`` (sorted
    order) continues into eigenstate ``perm[n]`` of ``final``.
    """
    first = hermitian_eig(h_path[0])
    n = len(first.values)
    perm = np.arange(n)
    prev = first
    ambiguous = _has_degeneracy(first.values, degeneracy_tol)
    for h in h_path[1:]:
        cur = hermitian_eig(h)
        ambiguous |= _has_degeneracy(cur.values, degeneracy_tol)
        overlap = np.abs(prev.vectors.conj().T @ cur.vectors) ** 2
        rows, cols = linear_sum_assignment(-overlap)
        step = np.empty(n, dtype=int)
        step[rows] = cols
        if np.min(overlap[rows, cols]) < 0.5:
            ambiguous = True
        perm = step[perm]
        prev = cur
    return perm, prev, bool(ambiguous)


def _has_degeneracy(values, tol):
    scale = max(1.0, float(np.max(np.abs(values))))
    return bool(np.any(np.diff(values) < tol * scale))


def adiabaticity_leakage(rho_start, u, h_end, h_path=None):
    """Largest population change in the instantaneous eigenbasis after ``u``.

    Start and end eigenstates are paired by following them through ``h_path``
    (a list of Hamiltonians from start to end); without a path they are paired
    in sorted order. An ambiguous pairing emits ``AdiabaticContinuationWarning``.
    """
    u = as_matrix(u)
    if h_path is None:
        end = hermitian_eig(h_end)
        perm = np.arange(len(end.values))
        ambiguous = _has_degeneracy(end.values, 1e-9) or _has_degeneracy(rho_start.energies, 1e-9)
    else:
        perm, end, ambiguous = track_eigenstates(list(h_path) + [h_end])
    if ambiguous:
        warnings.warn("eigenstate continuation is ambiguous (degenerate levels along the ramp)",
                      AdiabaticContinuationWarning, stacklevel=2)
    start_pop = np.einsum("an,ab,bn->n", rho_start.vectors.conj(), rho_start.rho,
                          rho_start.vectors).real
    evolved = u @ rho_start.rho @ u.conj().T
    v = end.vectors[:, perm]
    end_pop = np.einsum("an,ab,bn->n", v.conj(), evolved, v).real
    return float(np.max(np.abs(end_pop - start_pop)))


def adiabatic_transport(ts, p_start, b_end, samples=33):
    """Joint state after an ideal (infinitely slow) ramp of the field.

    Each eigenstate population of ``ts`` is carried onto the eigenstate of the
    end Hamiltonian it continues into.
    """
    perm, end, _ = track_eigenstates(ramp_hamiltonians(p_start, b_end, samples))
    v = end.vectors[:, perm]
    return (v * ts.weights) @ v.conj().T


def check_density_matrix(rho, tol=1e-10):
    """Raise ``NumericalContractError`` if ``rho`` is not a density matrix."""
    rho = as_matrix(rho)
    if hermiticity_defect(rho) > tol:
        raise NumericalContractError(f"state not Hermitian (defect {hermiticity_defect(rho):.3e})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise NumericalContractError(f"state trace {tr!r} != 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise NumericalContractError("state has a negative eigenvalue")
    return rho


__all__ = [
    "AdiabaticContinuationWarning", "EigenDecomposition", "MeasurementOutcome",
    "Populations", "StrokeLedger", "ThermalState", "adiabatic_transport",
    "adiabaticity_leakage", "boltzmann_weights", "check_density_matrix", "gibbs_state",
    "heat_cold", "heat_hot", "measure_system", "populations", "ramp_hamiltonians",
    "reduced_system_state", "system_projector", "time_ordered_propagator",
    "track_eigenstates", "unitarity_defect", "work_compression", "work_expansion",
]
