"""
Measuring approximate discontinuity in fully connected networks: minimum output
separation, FGSM versus random expansion ratios over shrinking perturbations, and a
bit-interleaving bijection that shows the same blow-up exactly.
"""
from .errors import DiscontinuityError
from .models import Model, ModelSpec, TrainConfig, build_mlp, named_spec
from .metrics import (
    EtaSweepConfig,
    SweepResult,
    eta_sweep,
    expansion_adversarial,
    expansion_random,
    expansion_ratio,
    fgsm_perturb,
    min_pairwise_output_distance,
    random_perturb,
)

__version__ = "0.1.0"

__all__ = [
    "DiscontinuityError",
    "EtaSweepConfig",
    "Model",
    "ModelSpec",
    "SweepResult",
    "TrainConfig",
    "build_mlp",
    "eta_sweep",
    "expansion_adversarial",
    "expansion_random",
    "expansion_ratio",
    "fgsm_perturb",
    "min_pairwise_output_distance",
    "named_spec",
    "random_perturb",
]
