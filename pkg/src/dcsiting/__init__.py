"""Distribution-aware siting and sizing of data-center DG injections."""

from .economics import EconomicData, default_land_costs, investment_cost
from .ga import GAConfig, GARun, run_ga
from .metrics import MetricSet, VoltageLimits, collect_metrics
from .network import NetworkModel, apply_dg, builtin_ieee33, load_network
from .objective import CandidateSolution, Problem, WeightVector, evaluate
from .powerflow import PowerFlowSolution, SolverSettings, min_voltage, solve
from .scenario import FinalDesign, ScenarioResult, run_multi_scenario

__version__ = "0.1.0"
