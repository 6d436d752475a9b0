"""Simulator for a two-ion quantum Otto machine driven by projective measurement."""
from ._kernels import BACKEND
from .cycle import (CyclePoint, Regime, RegimeError, classify_regime, cop, efficiency,
                    efficiency_with_cost, run_otto_cycle, sweep_j)
from .linalg import NotHermitianError, NumericalContractError
from .model import Level, ModelParams, build_h1, build_h_s, system_eigensystem

__all__ = [
    "BACKEND", "CyclePoint", "Level", "ModelParams", "NotHermitianError",
    "NumericalContractError", "Regime", "RegimeError", "build_h1", "build_h_s",
    "classify_regime", "cop", "efficiency", "efficiency_with_cost", "run_otto_cycle",
    "sweep_j", "system_eigensystem",
]
__version__ = "0.1.0"
