"""vqlab: a workbench for benchmarking variational quantum circuits.

Builds two hardware-efficient circuit families over four entanglement
topologies on a dense statevector simulator, estimates their expressibility
and entangling capability, and trains them on two small quantum machine
learning tasks: discrete distribution generation with an adversarial loop
and image classification with amplitude embedding.
"""

from .ansatz import AnsatzSpec, entangler_pairs, parameter_count, apply_ansatz
from .errors import (
    ConfigurationError,
    DataFormatError,
    DegenerateInputError,
    TrainingDivergedError,
    UndefinedDivergenceError,
)
from .metrics import (
    MetricEstimate,
    SamplingConfig,
    estimate_entangling_capability,
    estimate_expressibility,
    hellinger,
    kl_divergence,
    meyer_wallach,
)

__all__ = [
    "AnsatzSpec",
    "SamplingConfig",
    "MetricEstimate",
    "entangler_pairs",
    "parameter_count",
    "apply_ansatz",
    "estimate_expressibility",
    "estimate_entangling_capability",
    "meyer_wallach",
    "kl_divergence",
    "hellinger",
    "ConfigurationError",
    "DataFormatError",
    "DegenerateInputError",
    "TrainingDivergedError",
    "UndefinedDivergenceError",
]

__version__ = "0.1.0"
