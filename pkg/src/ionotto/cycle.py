"""One full Otto cycle at a parameter point, and its figures of merit."""
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
import math

from .model import Level, ModelParams, build_h1, system_eigensystem, system_energies
from .thermo import (Populations, StrokeLedger, adiabatic_transport, gibbs_state,
                     heat_cold, heat_hot, measure_system, populations,
                     reduced_system_state, work_compression, work_expansion)

REGIME_TOL = 1e-12


class Regime(str, Enum):
    ENGINE = "engine"
    REFRIGERATOR = "refrigerator"
    UNPHYSICAL = "unphysical"


class RegimeError(ValueError):
    pass


@dataclass(frozen=True)
class CyclePoint:
    j: float
    q_h: float
    q_l: float
    w1: float
    w2: float
    w_net: float
    regime: Regime
    eta: float | None = None
    cop: float | None = None
    eta_prime: float | None = None
    outcome_prob: float | None = None

    @property
    def ledger(self):
        return StrokeLedger(self.q_h, self.w1, self.q_l, self.w2)


def classify_regime(q_h, q_l, w_net, tol=REGIME_TOL):
    if q_h > tol and q_l < -tol and w_net > tol:
        return Regime.ENGINE
    if q_l > tol and q_h < -tol and w_net < -tol:
        return Regime.REFRIGERATOR
    return Regime.UNPHYSICAL


def efficiency(q_h, q_l):
    if classify_regime(q_h, q_l, q_h + q_l) is not Regime.ENGINE:
        raise RegimeError(f"efficiency is defined for an engine only (q_h={q_h!r}, q_l={q_l!r})")
    return (q_h + q_l) / q_h


def cop(q_h, q_l):
    if classify_regime(q_h, q_l, q_h + q_l) is not Regime.REFRIGERATOR:
        raise RegimeError(f"COP is defined for a refrigerator only (q_h={q_h!r}, q_l={q_l!r})")
    return q_l / abs(q_h + q_l)


def measurement_cost(kbt, qubits=2):
    """Landauer-type cost of projectively measuring ``qubits`` qubits."""
    return qubits * kbt * math.log(2.0)


def efficiency_with_cost(q_in, q_out, kbt):
    """Engine efficiency with the two-qubit measurement cost added to the input."""
    if not kbt > 0:
        raise ValueError(f"kbt={kbt!r} must be > 0")
    efficiency(q_in, q_out)
    return (q_in + q_out) / (q_in + measurement_cost(kbt))


@lru_cache(maxsize=256)
def _hot_stage(p_hot, b_l):
    ts = gibbs_state(build_h1(p_hot), p_hot.kbt_h)
    es = system_eigensystem(p_hot.j, p_hot.b)
    pops = populations(reduced_system_state(ts), es)
    rho_l = adiabatic_transport(ts, p_hot, b_l)
    return pops, rho_l, es


def run_otto_cycle(p_hot, b_l, m, cost=False, cost_kbt=None):
    """Run the four strokes at hot field ``p_hot.b`` and cold field ``b_l``.

    The cycle is evaluated at its fixed point: the populations entering the
    hot stroke are those left by the previous cycle's measurement of ``m``.
    With ``cost`` the measurement cost is charged at ``cost_kbt``
    (default: the hot-bath temperature).
    """
    if not isinstance(p_hot, ModelParams):
        raise TypeError("p_hot must be a ModelParams")
    if not 0 < b_l < p_hot.b:
        raise ValueError(f"b_l={b_l!r} must satisfy 0 < b_l < b_h={p_hot.b!r}")
    m = Level.parse(m)
    e_h = system_energies(p_hot.j, p_hot.b)
    e_l = system_energies(p_hot.j, b_l)

    p_th, rho_l, es = _hot_stage(p_hot, float(b_l))
    w1 = work_expansion(p_th, e_l, e_h)
    outcome = measure_system(rho_l, es, m)
    p_post = outcome.post_populations
    q_l = heat_cold(e_l, p_post, p_th)
    w2 = work_compression(p_post, e_h, e_l)
    q_h = heat_hot(e_h, p_th, Populations.indicator(m))

    w_net = q_h + q_l
    regime = classify_regime(q_h, q_l, w_net)
    eta = cop_value = eta_prime = None
    if regime is Regime.ENGINE:
        eta = efficiency(q_h, q_l)
        if cost:
            eta_prime = efficiency_with_cost(
                q_h, q_l, p_hot.kbt_h if cost_kbt is None else cost_kbt)
    elif regime is Regime.REFRIGERATOR:
        cop_value = cop(q_h, q_l)
    return CyclePoint(j=p_hot.j, q_h=q_h, q_l=q_l, w1=w1, w2=w2, w_net=w_net,
                      regime=regime, eta=eta, cop=cop_value, eta_prime=eta_prime,
                      outcome_prob=outcome.prob)


def sweep_j(b_h, b_l, m, j_values, omega=1.0, k=0.1, kbt_h=3.5, cost=False, cost_kbt=None):
    return [run_otto_cycle(ModelParams(j=float(j), b=b_h, omega=omega, k=k, kbt_h=kbt_h),
                           b_l, m, cost=cost, cost_kbt=cost_kbt)
            for j in j_values]
