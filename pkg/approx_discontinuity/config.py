"""
Experiment configuration.

A config is a JSON document with ``"config_version": 1``. Each section maps onto a frozen
dataclass that validates itself; unknown keys anywhere are rejected.
"""
import dataclasses
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple, Union

from .data_utils import load_json_data
from .errors import ConfigError
from .metrics import DROPOUT_POLICIES, EtaSweepConfig, default_eta_grid
from .models import DiffusionConfig, ModelSpec, TrainConfig, named_spec

logger = logging.getLogger(__name__)

CONFIG_VERSION = 1

EXPERIMENT_KINDS = (
    "table1_dm",
    "fig2_compression",
    "fig3_gan_vs_diffusion",
    "figS1_denoise",
    "figS2_train_vs_untrained",
    "dropout_control",
    "bijection_demo",
)
DATA_FORMATS = ("idx", "cifar10", "cifar100", "synthetic")
DM_SPLITS = ("combined", "train", "test")
MODEL_ROLES = ("classifier", "generator", "discriminator", "denoiser")
AUTOENCODER_FAMILIES = ("funnel16", "funnel8", "overcomplete")


@dataclass(frozen=True)
class DataConfig:
    format: str = "synthetic"
    train_images: Optional[str] = None
    train_labels: Optional[str] = None
    test_images: Optional[str] = None
    test_labels: Optional[str] = None
    cifar_train: Tuple[str, ...] = ()
    cifar_test: Tuple[str, ...] = ()
    synthetic_samples: int = 600
    synthetic_dim: int = 16
    synthetic_classes: int = 4
    test_fraction: float = 0.25
    train_subset: Optional[int] = None
    dm_inputs: Optional[int] = None
    dm_split: str = "combined"
    deduplicate: bool = True

    def __post_init__(self):
        if self.format not in DATA_FORMATS:
            raise ConfigError(f"data.format must be one of {DATA_FORMATS}")
        if self.format == "idx" and not (self.train_images and self.train_labels):
            raise ConfigError("idx data needs train_images and train_labels")
        if self.format.startswith("cifar") and not self.cifar_train:
            raise ConfigError("cifar data needs cifar_train batch paths")
        if self.dm_split not in DM_SPLITS:
            raise ConfigError(f"data.dm_split must be one of {DM_SPLITS}")
        if not 0.0 < self.test_fraction < 1.0:
            raise ConfigError("data.test_fraction must lie in (0, 1)")
        if min(self.synthetic_samples, self.synthetic_dim, self.synthetic_classes) < 1:
            raise ConfigError("synthetic sizes must be >= 1")
        for name in ("train_subset", "dm_inputs"):
            value = getattr(self, name)
            if value is not None and value < 2:
                raise ConfigError(f"data.{name} must be >= 2")


@dataclass(frozen=True)
class SweepSettings:
    eta_max: float = 1e-1
    eta_min: float = 1e-5
    points: int = 13
    inputs: int = 200
    noise_seeds: int = 5
    clip: bool = False
    dropout: str = "off"
    retain_raw: bool = False

    def __post_init__(self):
        default_eta_grid(self.eta_max, self.eta_min, self.points)
        if self.inputs < 1 or self.noise_seeds < 1:
            raise ConfigError("sweep.inputs and sweep.noise_seeds must be >= 1")
        if self.dropout not in ("off",) + DROPOUT_POLICIES:
            raise ConfigError(f"sweep.dropout must be 'off' or one of {DROPOUT_POLICIES}")

    def to_sweep_config(self, seed: int, dropout: Optional[str] = None) -> EtaSweepConfig:
        mode = dropout or self.dropout
        return EtaSweepConfig(
            eta_grid=default_eta_grid(self.eta_max, self.eta_min, self.points),
            num_inputs=self.inputs,
            num_noise_seeds=self.noise_seeds,
            seed=seed,
            clip=self.clip,
            dropout_active=mode != "off",
            dropout_policy=mode if mode != "off" else "shared",
            mask_seed=seed,
            retain_raw=self.retain_raw,
        )


@dataclass(frozen=True)
class AutoencoderSettings:
    noise_std: float = 0.0
    families: Tuple[str, ...] = AUTOENCODER_FAMILIES
    denoise_noise_std: float = 0.1
    denoise_family: str = "overcomplete"
    denoise_inputs: int = 500

    def __post_init__(self):
        bad = [f for f in tuple(self.families) + (self.denoise_family,) if f not in AUTOENCODER_FAMILIES]
        if bad or not self.families:
            raise ConfigError(f"autoencoder families must be drawn from {AUTOENCODER_FAMILIES}")
        if self.noise_std < 0 or self.denoise_noise_std <= 0:
            raise ConfigError("autoencoder noise levels must be non-negative (denoise > 0)")
        if self.denoise_inputs < 1:
            raise ConfigError("autoencoder.denoise_inputs must be >= 1")


@dataclass(frozen=True)
class GanSettings:
    latent_dim: int = 100
    output_dim: Optional[int] = None
    probe_discriminator: bool = True

    def __post_init__(self):
        if self.latent_dim < 1 or (self.output_dim is not None and self.output_dim < 1):
            raise ConfigError("gan widths must be >= 1")


@dataclass(frozen=True)
class DiffusionSettings:
    steps: int = 1000
    beta_min: float = 1e-4
    beta_max: float = 0.02
    probe_timestep: int = 100

    def __post_init__(self):
        self.schedule()
        if not 1 <= self.probe_timestep <= self.steps:
            raise ConfigError(f"diffusion.probe_timestep must lie in 1..{self.steps}")

    def schedule(self) -> DiffusionConfig:
        return DiffusionConfig(self.steps, self.beta_min, self.beta_max)


@dataclass(frozen=True)
class DropoutSettings:
    rate: float = 0.2

    def __post_init__(self):
        if not 0.0 <= self.rate < 1.0:
            raise ConfigError("dropout.rate must lie in [0, 1)")


@dataclass(frozen=True)
class BijectionSettings:
    precision: int = 32
    exhaustive_precision: int = 8

    def __post_init__(self):
        if not 3 <= self.precision <= 52:
            raise ConfigError("bijection.precision must lie in 3..52")
        if not 1 <= self.exhaustive_precision <= 8:
            raise ConfigError("bijection.exhaustive_precision must lie in 1..8")


ModelRef = Union[str, Dict[str, Any]]


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    seed: int = 0
    width_multiplier: float = 1.0
    output_dir: str = "results"
    threads: int = 1
    data: DataConfig = field(default_factory=DataConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    sweep: SweepSettings = field(default_factory=SweepSettings)
    models: Dict[str, ModelRef] = field(default_factory=dict)
    autoencoder: AutoencoderSettings = field(default_factory=AutoencoderSettings)
    gan: GanSettings = field(default_factory=GanSettings)
    diffusion: DiffusionSettings = field(default_factory=DiffusionSettings)
    dropout: DropoutSettings = field(default_factory=DropoutSettings)
    bijection: BijectionSettings = field(default_factory=BijectionSettings)

    def __post_init__(self):
        if self.experiment not in EXPERIMENT_KINDS:
            raise ConfigError(f"experiment must be one of {EXPERIMENT_KINDS}, got {self.experiment!r}")
        if not self.width_multiplier > 0:
            raise ConfigError("width_multiplier must be > 0")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        unknown = set(self.models) - set(MODEL_ROLES)
        if unknown:
            raise ConfigError(f"unknown model roles {sorted(unknown)}; expected {MODEL_ROLES}")
        for role, ref in self.models.items():
            if not isinstance(ref, (str, dict)):
                raise ConfigError(f"models.{role} must be a name or an inline spec")

    def model_spec(self, role: str, input_dim: int, output_dim: Optional[int] = None,
                   default: Optional[str] = None, dropout_rate: float = 0.0) -> ModelSpec:
        """Resolve a role to a ModelSpec: a named architecture or an inline spec."""
        ref = self.models.get(role, default or role)
        if isinstance(ref, dict):
            spec = ModelSpec.from_dict(ref)
            if spec.input_dim != input_dim:
                raise ConfigError(f"inline {role} spec has input {spec.input_dim}, data needs {input_dim}")
            return spec
        return named_spec(ref, input_dim, output_dim, self.width_multiplier,
                          init_seed=self.seed, dropout_rate=dropout_rate)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_SECTIONS = {
    "data": DataConfig,
    "train": TrainConfig,
    "sweep": SweepSettings,
    "autoencoder": AutoencoderSettings,
    "gan": GanSettings,
    "diffusion": DiffusionSettings,
    "dropout": DropoutSettings,
    "bijection": BijectionSettings,
}
_SCALARS = ("experiment", "seed", "width_multiplier", "output_dir", "threads", "models")


def _section(cls, values: Any, name: str):
    if not isinstance(values, dict):
        raise ConfigError(f"section {name!r} must be an object")
    known = {f.name: f for f in dataclasses.fields(cls)}
    unknown = set(values) - set(known)
    if unknown:
        raise ConfigError(f"unknown keys in {name!r}: {sorted(unknown)}")
    kwargs = {}
    for key, value in values.items():
        if isinstance(value, list):
            value = tuple(value)
        kwargs[key] = value
    try:
        return cls(**kwargs)
    except TypeError as e:
        raise ConfigError(f"invalid {name!r} section: {e}") from e


def parse_config(doc: Dict[str, Any]) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config root must be an object")
    version = doc.get("config_version")
    if version != CONFIG_VERSION:
        raise ConfigError(f"config_version must be {CONFIG_VERSION}, got {version!r}")
    unknown = set(doc) - set(_SECTIONS) - set(_SCALARS) - {"config_version"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "experiment" not in doc:
        raise ConfigError("config needs an 'experiment' kind")
    kwargs = {key: doc[key] for key in _SCALARS if key in doc}
    for name, cls in _SECTIONS.items():
        if name in doc:
            kwargs[name] = _section(cls, doc[name], name)
    try:
        return ExperimentConfig(**kwargs)
    except TypeError as e:
        raise ConfigError(f"invalid config: {e}") from e


def load_config(path) -> ExperimentConfig:
    """Read and validate a JSON experiment config."""
    logger.info("Loading config %s", path)
    return parse_config(load_json_data(os.fspath(path)))


def apply_overrides(cfg: ExperimentConfig, *, eta_min: Optional[float] = None,
                    eta_max: Optional[float] = None, inputs: Optional[int] = None,
                    seed: Optional[int] = None, width_mult: Optional[float] = None,
                    out: Optional[str] = None, threads: Optional[int] = None) -> ExperimentConfig:
    """Layer command-line overrides on top of a loaded config."""
    sweep_changes = {k: v for k, v in (("eta_min", eta_min), ("eta_max", eta_max),
                                       ("inputs", inputs)) if v is not None}
    top = {k: v for k, v in (("seed", seed), ("width_multiplier", width_mult),
                             ("output_dir", out), ("threads", threads)) if v is not None}
    if sweep_changes:
        top["sweep"] = dataclasses.replace(cfg.sweep, **sweep_changes)
    if seed is not None:
        top["train"] = dataclasses.replace(cfg.train, seed=seed)
    return dataclasses.replace(cfg, **top) if top else cfg
