"""Optimal policies for Markovian models with finite response spaces."""

from changeaccel.dp.bellman import BellmanOperator, posterior_update, predictive_density
from changeaccel.dp.calibrate import CalibrationRow, calibrate_c, default_c_grid, simulated_cost
from changeaccel.dp.grid import build_grid
from changeaccel.dp.policy import STOP, DPPolicy, ValueFunction, load_policy, save_policy
from changeaccel.dp.simulate import run_dp
from changeaccel.dp.solver import bellman_apply, effective_tolerance, value_iterate

__all__ = [
    "STOP",
    "BellmanOperator",
    "CalibrationRow",
    "DPPolicy",
    "ValueFunction",
    "bellman_apply",
    "build_grid",
    "calibrate_c",
    "default_c_grid",
    "effective_tolerance",
    "load_policy",
    "posterior_update",
    "predictive_density",
    "run_dp",
    "save_policy",
    "simulated_cost",
    "value_iterate",
]
