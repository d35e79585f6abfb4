"""Agent-based simulator of emotion contagion on directed follower networks."""

from .emotions import Emotion, EmotionParams, SimulationConfig, default_params
from .engine import RunResult, run, tendency
from .graph import GeneratorParams, NetworkGraph, generate_network, load_edge_list

__version__ = "0.1.0"

__all__ = [
    "Emotion",
    "EmotionParams",
    "SimulationConfig",
    "default_params",
    "RunResult",
    "run",
    "tendency",
    "GeneratorParams",
    "NetworkGraph",
    "generate_network",
    "load_edge_list",
    "__version__",
]
