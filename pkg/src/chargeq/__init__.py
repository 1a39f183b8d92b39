"""Two charge qubits in a common resonator: exact dynamics, correlations and deficits."""

from .dynamics import FieldSpec, ModelParams, ManifoldEngine, propagate, reduced_density_series
from .measures import OptimizerConfig, evaluate_all

__all__ = [
    "FieldSpec",
    "ModelParams",
    "ManifoldEngine",
    "propagate",
    "reduced_density_series",
    "OptimizerConfig",
    "evaluate_all",
]
