"""Agent-based simulator of friction interventions in social-media sharing."""

from .engine import Post, SimParams, SimState
from .errors import GenerationError, InvalidParameterError, RunTimeoutError
from .netgen import Network, generate
from .runner import RunResult, SweepCell, build_grid, run_once, sweep
from .sampling import RandomSource, bernoulli, sample_unit_linear, weighted_choice

__all__ = [
    "Post", "SimParams", "SimState",
    "GenerationError", "InvalidParameterError", "RunTimeoutError",
    "Network", "generate",
    "RunResult", "SweepCell", "build_grid", "run_once", "sweep",
    "RandomSource", "bernoulli", "sample_unit_linear", "weighted_choice",
]
