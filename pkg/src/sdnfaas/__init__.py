"""Delay and power models for an SDN controller -> event gateway -> serverless function pipeline,
with a seeded discrete-event simulator to check them against."""

from .analytic import run_analytic
from .compare import Tolerances, run_compare
from .config import ScenarioConfig, loads, parse_scenario, shipped_scenario
from .engine import run_simulation
from .errors import ConfigInvalid, Infeasible, NoReplica, OverCapacity, Unstable, UnmappedTopic
from .sweep import run_sweep

__version__ = "0.1.0"

__all__ = [
    "ConfigInvalid",
    "Infeasible",
    "NoReplica",
    "OverCapacity",
    "ScenarioConfig",
    "Tolerances",
    "UnmappedTopic",
    "Unstable",
    "loads",
    "parse_scenario",
    "run_analytic",
    "run_compare",
    "run_simulation",
    "run_sweep",
    "shipped_scenario",
]
