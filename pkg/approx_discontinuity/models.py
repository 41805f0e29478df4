"""
Fully connected model families and their training loops: MLP classifier, funnel and
overcomplete autoencoders, GAN generator/discriminator, and a diffusion denoiser whose
timestep arrives as one extra input element.
"""
import logging
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .data_utils import Dataset
from .errors import ConfigError, ContractError, DimensionError, ParameterError
from .tensor import (
    ACTIVATIONS,
    LOSSES,
    Tape,
    Tensor,
    activation,
    add,
    affine,
    as_tensor,
    backward,
    dropout,
    loss,
    matmul,
)

logger = logging.getLogger(__name__)

FUNNEL16_WIDTHS = (2000, 1000, 500, 250, 166, 125, 166, 250, 500, 1000, 2000)
FUNNEL8_WIDTHS = (2000, 1000, 500, 250, 500, 1000, 2000)
OVERCOMPLETE_WIDTHS = (2000, 2000, 2000)
CLASSIFIER_WIDTHS = (512, 256)
GENERATOR_WIDTHS = (200, 400, 800)
DISCRIMINATOR_WIDTHS = (512, 256)
DENOISER_WIDTHS = (2000, 2000, 2000)

MODEL_NAMES = (
    "classifier", "funnel16", "funnel8", "overcomplete",
    "generator", "discriminator", "denoiser", "linear",
)


@dataclass(frozen=True)
class ModelSpec:
    """Architecture of a fully connected model (no residual connections)."""

    input_dim: int
    hidden_widths: Tuple[int, ...]
    output_dim: int
    hidden_activation: str = "relu"
    output_activation: str = "identity"
    dropout_rate: Tuple[float, ...] = ()
    init_seed: int = 0
    rescale_output: bool = False

    def __post_init__(self):
        widths = tuple(int(w) for w in self.hidden_widths)
        object.__setattr__(self, "hidden_widths", widths)
        rates = self.dropout_rate
        if np.ndim(rates) == 0:
            rates = (float(rates),) * len(widths)
        rates = tuple(float(r) for r in rates) or (0.0,) * len(widths)
        object.__setattr__(self, "dropout_rate", rates)
        if self.input_dim < 1 or self.output_dim < 1 or any(w < 1 for w in widths):
            raise ConfigError(f"all widths must be >= 1: {self.input_dim}, {widths}, {self.output_dim}")
        if len(rates) != len(widths):
            raise ConfigError(f"{len(rates)} dropout rates for {len(widths)} hidden layers")
        if any(not 0.0 <= r < 1.0 for r in rates):
            raise ConfigError(f"dropout rates must lie in [0, 1): {rates}")
        for kind in (self.hidden_activation, self.output_activation):
            if kind not in ACTIVATIONS:
                raise ConfigError(f"unknown activation {kind!r}")
        if self.rescale_output and self.output_activation != "tanh":
            raise ConfigError("rescale_output only applies to a tanh output")

    @property
    def layer_shapes(self) -> List[Tuple[int, int]]:
        dims = (self.input_dim,) + self.hidden_widths + (self.output_dim,)
        return list(zip(dims[:-1], dims[1:]))

    @property
    def parameter_count(self) -> int:
        return sum(i * o + o for i, o in self.layer_shapes)

    @property
    def bottleneck(self) -> int:
        return min((self.input_dim,) + self.hidden_widths + (self.output_dim,))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["hidden_widths"] = list(self.hidden_widths)
        d["dropout_rate"] = list(self.dropout_rate)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpec":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown ModelSpec fields: {sorted(unknown)}")
        d = dict(d)
        d["hidden_widths"] = tuple(d.get("hidden_widths", ()))
        if "dropout_rate" in d and np.ndim(d["dropout_rate"]) > 0:
            d["dropout_rate"] = tuple(d["dropout_rate"])
        try:
            return cls(**d)
        except TypeError as e:
            raise ConfigError(f"invalid ModelSpec: {e}") from e


def scale_widths(widths: Sequence[int], multiplier: float, floor: int = 1) -> Tuple[int, ...]:
    """Multiply every width by `multiplier`, keeping each at least `floor`."""
    if multiplier <= 0:
        raise ConfigError(f"width multiplier must be positive, got {multiplier}")
    return tuple(max(floor, int(round(w * multiplier))) for w in widths)


def named_spec(name: str, input_dim: int, output_dim: Optional[int] = None,
               width_multiplier: float = 1.0, init_seed: int = 0,
               dropout_rate: float = 0.0) -> ModelSpec:
    """
    Reference architectures by name.

    `input_dim` is the data width for every family except `generator` (latent width)
    and `denoiser` (data width; the timestep slot is added here).
    """
    m = width_multiplier
    if name == "classifier":
        if output_dim is None:
            raise ConfigError("classifier spec needs output_dim (class count)")
        return ModelSpec(input_dim, scale_widths(CLASSIFIER_WIDTHS, m), output_dim,
                         "relu", "softmax", dropout_rate, init_seed)
    if name in ("funnel16", "funnel8", "overcomplete"):
        base = {"funnel16": FUNNEL16_WIDTHS, "funnel8": FUNNEL8_WIDTHS,
                "overcomplete": OVERCOMPLETE_WIDTHS}[name]
        floor = input_dim if name == "overcomplete" else 1
        return ModelSpec(input_dim, scale_widths(base, m, floor), input_dim,
                         "relu", "identity", dropout_rate, init_seed)
    if name == "generator":
        if output_dim is None:
            raise ConfigError("generator spec needs output_dim (data width)")
        return ModelSpec(input_dim, scale_widths(GENERATOR_WIDTHS, m), output_dim,
                         "relu", "tanh", dropout_rate, init_seed, rescale_output=True)
    if name == "discriminator":
        return ModelSpec(input_dim, scale_widths(DISCRIMINATOR_WIDTHS, m), 1,
                         "relu", "sigmoid", dropout_rate, init_seed)
    if name == "denoiser":
        return ModelSpec(input_dim + 1, scale_widths(DENOISER_WIDTHS, m, input_dim), input_dim,
                         "relu", "identity", dropout_rate, init_seed)
    if name == "linear":
        return ModelSpec(input_dim, (), output_dim or input_dim, "identity", "identity",
                         (), init_seed)
    raise ConfigError(f"unknown model name {name!r}; expected one of {MODEL_NAMES}")


def _layer_seed(seed, layer: int):
    """Mix the layer index into a dropout seed (or into each per-row seed)."""
    if np.ndim(seed) == 0:
        return int(np.random.SeedSequence([int(seed), layer]).generate_state(1)[0])
    return [int(np.random.SeedSequence([int(s), layer]).generate_state(1)[0]) for s in seed]


class Model:
    """A ModelSpec with its parameters θ (one weight matrix and bias row per layer)."""

    def __init__(self, spec: ModelSpec, weights: Sequence[np.ndarray], biases: Sequence[np.ndarray]):
        self.spec = spec
        self.weights: List[np.ndarray] = []
        self.biases: List[np.ndarray] = []
        self._frozen: Optional[List[Tensor]] = None
        self.set_parameters([p for wb in zip(weights, biases) for p in wb])

    @property
    def input_dim(self) -> int:
        return self.spec.input_dim

    @property
    def output_dim(self) -> int:
        return self.spec.output_dim

    @property
    def num_layers(self) -> int:
        return len(self.weights)

    def parameters(self) -> List[np.ndarray]:
        """Flat parameter list in layer order: W0, b0, W1, b1, ..."""
        return [p for wb in zip(self.weights, self.biases) for p in wb]

    def set_parameters(self, params: Sequence[np.ndarray]):
        shapes = self.spec.layer_shapes
        if len(params) != 2 * len(shapes):
            raise DimensionError(f"expected {2 * len(shapes)} parameter arrays, got {len(params)}")
        weights, biases = [], []
        for (fan_in, fan_out), w, b in zip(shapes, params[0::2], params[1::2]):
            w = np.array(w, dtype=np.float64)
            b = np.array(b, dtype=np.float64)
            if w.shape != (fan_in, fan_out) or b.shape != (fan_out,):
                raise DimensionError(f"layer expects {(fan_in, fan_out)}, got {w.shape} / {b.shape}")
            w.setflags(write=False)
            b.setflags(write=False)
            weights.append(w)
            biases.append(b)
        self.weights, self.biases = weights, biases
        self._frozen = None

    def parameter_tensors(self, requires_grad: bool = True) -> List[Tensor]:
        if not requires_grad:
            if self._frozen is None:
                self._frozen = [Tensor(p) for p in self.parameters()]
            return self._frozen
        return [Tensor(p, requires_grad=True) for p in self.parameters()]

    def copy(self) -> "Model":
        return Model(self.spec, self.weights, self.biases)

    def forward(self, x, *, params: Optional[Sequence[Tensor]] = None,
                dropout_active: bool = False, dropout_seed=None,
                apply_output_activation: bool = True) -> Tensor:
        """
        O(x, θ) for a batch of rows.

        With `dropout_active` each hidden layer applies its dropout rate using masks drawn
        from `dropout_seed` (an int, or one seed per row).
        """
        h = as_tensor(x)
        if h.values.ndim != 2 or h.shape[1] != self.input_dim:
            raise DimensionError(f"input {h.shape} for model input width {self.input_dim}")
        if dropout_active and dropout_seed is None:
            raise ParameterError("active dropout needs a dropout_seed")
        params = params if params is not None else self.parameter_tensors(requires_grad=False)
        last = self.num_layers - 1
        for layer in range(self.num_layers):
            h = add(matmul(h, params[2 * layer]), params[2 * layer + 1])
            if layer < last:
                h = activation(h, self.spec.hidden_activation)
                if dropout_active:
                    h = dropout(h, self.spec.dropout_rate[layer],
                                _layer_seed(dropout_seed, layer), active=True)
            elif apply_output_activation:
                h = activation(h, self.spec.output_activation)
                if self.spec.rescale_output:
                    h = affine(h, 0.5, 0.5)
        return h

    def predict(self, x, **kwargs) -> np.ndarray:
        """Evaluation-mode forward pass on raw arrays."""
        arr = np.asarray(x, dtype=np.float64)
        single = arr.ndim == 1
        out = self.forward(arr.reshape(1, -1) if single else arr, **kwargs).values
        return out[0] if single else out


def build_mlp(spec: ModelSpec) -> Model:
    """Seeded init: weights uniform in ±sqrt(6 / fan_in), zero biases."""
    rng = np.random.default_rng(spec.init_seed)
    weights, biases = [], []
    for fan_in, fan_out in spec.layer_shapes:
        bound = np.sqrt(6.0 / fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return Model(spec, weights, biases)


# --- training configuration ---

@dataclass(frozen=True)
class TrainConfig:
    """Optimizer and schedule settings; epochs = 0 leaves a model untouched."""

    epochs: int = 10
    batch_size: int = 64
    learning_rate: float = 1e-3
    optimizer: str = "adam"
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    seed: int = 0
    loss_kind: Optional[str] = None

    def __post_init__(self):
        if self.epochs < 0:
            raise ConfigError(f"epochs must be >= 0, got {self.epochs}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if not self.learning_rate > 0:
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.optimizer not in ("adam", "sgd"):
            raise ConfigError(f"unknown optimizer {self.optimizer!r}")
        if self.loss_kind is not None and self.loss_kind not in LOSSES:
            raise ConfigError(f"unknown loss {self.loss_kind!r}")


@dataclass(frozen=True)
class DiffusionConfig:
    """Forward-process schedule: T steps with β linear from beta_min to beta_max."""

    steps: int = 1000
    beta_min: float = 1e-4
    beta_max: float = 0.02

    def __post_init__(self):
        if self.steps < 1:
            raise ConfigError(f"diffusion steps must be >= 1, got {self.steps}")
        if not 0.0 < self.beta_min <= self.beta_max < 1.0:
            raise ConfigError("need 0 < beta_min <= beta_max < 1")

    @property
    def betas(self) -> np.ndarray:
        return np.linspace(self.beta_min, self.beta_max, self.steps)

    @property
    def alpha_bars(self) -> np.ndarray:
        return np.cumprod(1.0 - self.betas)

    def noised(self, x0: np.ndarray, t: np.ndarray, eps: np.ndarray) -> np.ndarray:
        """x_t = sqrt(ᾱ_t)·x0 + sqrt(1-ᾱ_t)·ε for timesteps t in 1..T."""
        ab = self.alpha_bars[np.asarray(t) - 1].reshape(-1, 1)
        return np.sqrt(ab) * x0 + np.sqrt(1.0 - ab) * eps

    def encode(self, x_t: np.ndarray, t) -> np.ndarray:
        """Append the scalar timestep t/T as one extra input column."""
        x_t = np.atleast_2d(x_t)
        t_col = np.broadcast_to(np.asarray(t, dtype=np.float64) / self.steps, (x_t.shape[0],))
        return np.hstack([x_t, t_col.reshape(-1, 1)])


# --- optimizers ---

class SGD:
    def __init__(self, learning_rate: float):
        self.learning_rate = learning_rate

    def step(self, params: Sequence[np.ndarray], grads: Sequence[np.ndarray]) -> List[np.ndarray]:
        return [p - self.learning_rate * g for p, g in zip(params, grads)]


class Adam:
    def __init__(self, learning_rate: float, beta1: float = 0.9, beta2: float = 0.999,
                 epsilon: float = 1e-8):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.t = 0
        self.m: Optional[List[np.ndarray]] = None
        self.v: Optional[List[np.ndarray]] = None

    def step(self, params: Sequence[np.ndarray], grads: Sequence[np.ndarray]) -> List[np.ndarray]:
        if self.m is None:
            self.m = [np.zeros_like(p) for p in params]
            self.v = [np.zeros_like(p) for p in params]
        self.t += 1
        c1 = 1.0 - self.beta1 ** self.t
        c2 = 1.0 - self.beta2 ** self.t
        updated = []
        for i, (p, g) in enumerate(zip(params, grads)):
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g
            updated.append(p - self.learning_rate * (self.m[i] / c1) / (np.sqrt(self.v[i] / c2) + self.epsilon))
        return updated


def make_optimizer(cfg: TrainConfig):
    if cfg.optimizer == "sgd":
        return SGD(cfg.learning_rate)
    return Adam(cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon)


@dataclass
class TrainingHistory:
    """Per-step losses plus per-epoch aggregates."""

    losses: List[float] = field(default_factory=list)
    epoch_losses: List[float] = field(default_factory=list)
    epoch_accuracy: List[float] = field(default_factory=list)

    def smoothed(self, window: int = 100) -> np.ndarray:
        """Trailing moving average of the step losses."""
        values = np.asarray(self.losses, dtype=np.float64)
        if values.size == 0:
            return values
        window = max(1, min(window, values.size))
        kernel = np.ones(window) / window
        return np.convolve(values, kernel, mode="valid")

    def close_epoch(self, steps: int):
        if steps:
            self.epoch_losses.append(float(np.mean(self.losses[-steps:])))


@dataclass
class GanHistory:
    d_losses: List[float] = field(default_factory=list)
    g_losses: List[float] = field(default_factory=list)
    d_accuracy: List[float] = field(default_factory=list)


@dataclass
class GanResult:
    generator: Model
    discriminator: Model
    history: GanHistory


def _batches(rng: np.random.Generator, n: int, batch_size: int):
    order = rng.permutation(n)
    for start in range(0, n, batch_size):
        yield order[start:start + batch_size]


def _step_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2 ** 63 - 1))


def _train_step(model: Model, optimizer, xb: np.ndarray, target, loss_kind: str,
                dropout_seed: int) -> float:
    with Tape() as tape:
        params = model.parameter_tensors(requires_grad=True)
        out = model.forward(
            xb, params=params, dropout_active=True, dropout_seed=dropout_seed,
            apply_output_activation=(loss_kind != "cross_entropy"),
        )
        value = loss(out, target, loss_kind)
    grads = backward(tape, value)
    model.set_parameters(optimizer.step(model.parameters(), [grads[p] for p in params]))
    return float(value.values)


def evaluate_accuracy(model: Model, dataset: Dataset, batch_size: int = 1024) -> float:
    """Fraction of rows whose argmax output equals the label."""
    correct = 0
    for start in range(0, len(dataset), batch_size):
        out = model.predict(dataset.inputs[start:start + batch_size])
        correct += int(np.sum(out.argmax(axis=1) == dataset.labels[start:start + batch_size]))
    return correct / len(dataset)


def train_classifier(model: Model, dataset: Dataset, cfg: TrainConfig) -> Tuple[Model, TrainingHistory]:
    """Mini-batch cross-entropy training on a copy of `model`."""
    if model.output_dim != dataset.class_count:
        raise ContractError(f"classifier has {model.output_dim} outputs for {dataset.class_count} classes")
    if model.input_dim != dataset.input_dim:
        raise ContractError(f"classifier input {model.input_dim} vs data width {dataset.input_dim}")
    loss_kind = cfg.loss_kind or "cross_entropy"
    model = model.copy()
    history = TrainingHistory()
    optimizer = make_optimizer(cfg)
    rng = np.random.default_rng(cfg.seed)
    logger.info("Training classifier on %s for %d epochs", dataset.name, cfg.epochs)
    for epoch in range(cfg.epochs):
        steps = 0
        for idx in _batches(rng, len(dataset), cfg.batch_size):
            history.losses.append(_train_step(
                model, optimizer, dataset.inputs[idx], dataset.labels[idx], loss_kind, _step_seed(rng)
            ))
            steps += 1
        history.close_epoch(steps)
        history.epoch_accuracy.append(evaluate_accuracy(model, dataset))
        logger.debug("epoch %d loss %.5f accuracy %.4f", epoch, history.epoch_losses[-1],
                     history.epoch_accuracy[-1])
    return model, history


def train_autoencoder(model: Model, dataset: Dataset, cfg: TrainConfig,
                      noise_std: float = 0.0) -> Tuple[Model, TrainingHistory]:
    """Reconstruct x from x + N(0, noise_std²) under mse; noise_std = 0 is a plain autoencoder."""
    if not model.input_dim == model.output_dim == dataset.input_dim:
        raise ContractError(
            f"autoencoder widths {model.input_dim}->{model.output_dim} for data width {dataset.input_dim}"
        )
    if noise_std < 0:
        raise ParameterError(f"noise_std must be >= 0, got {noise_std}")
    loss_kind = cfg.loss_kind or "mse"
    model = model.copy()
    history = TrainingHistory()
    optimizer = make_optimizer(cfg)
    rng = np.random.default_rng(cfg.seed)
    logger.info("Training autoencoder %s (noise %.3f) for %d epochs",
                model.spec.hidden_widths, noise_std, cfg.epochs)
    for epoch in range(cfg.epochs):
        steps = 0
        for idx in _batches(rng, len(dataset), cfg.batch_size):
            clean = dataset.inputs[idx]
            corrupted = clean + noise_std * rng.standard_normal(clean.shape) if noise_std else clean
            history.losses.append(_train_step(model, optimizer, corrupted, clean, loss_kind, _step_seed(rng)))
            steps += 1
        history.close_epoch(steps)
    return model, history


def train_gan(gen_spec: ModelSpec, disc_spec: ModelSpec, dataset: Dataset,
              cfg: TrainConfig) -> GanResult:
    """
    Alternating discriminator/generator updates (1:1) with bce; the generator uses the
    non-saturating objective -log D(G(z)). Mode collapse is only visible in the history.
    """
    if not gen_spec.output_dim == disc_spec.input_dim == dataset.input_dim:
        raise ContractError(
            f"generator output {gen_spec.output_dim}, discriminator input {disc_spec.input_dim}, "
            f"data width {dataset.input_dim} must agree"
        )
    if disc_spec.output_dim != 1:
        raise ContractError("discriminator must have one output")
    generator = build_mlp(gen_spec)
    discriminator = build_mlp(disc_spec)
    g_opt = make_optimizer(cfg)
    d_opt = make_optimizer(cfg)
    rng = np.random.default_rng(cfg.seed)
    history = GanHistory()
    latent = gen_spec.input_dim
    logger.info("Training GAN on %s for %d epochs", dataset.name, cfg.epochs)
    for epoch in range(cfg.epochs):
        for idx in _batches(rng, len(dataset), cfg.batch_size):
            real = dataset.inputs[idx]
            b = real.shape[0]
            fake = generator.predict(rng.standard_normal((b, latent)))
            batch = np.vstack([real, fake])
            labels = np.concatenate([np.ones(b), np.zeros(b)]).reshape(-1, 1)

            # 判別器更新
            with Tape() as tape:
                d_params = discriminator.parameter_tensors(requires_grad=True)
                d_out = discriminator.forward(batch, params=d_params, dropout_active=True,
                                              dropout_seed=_step_seed(rng))
                d_loss = loss(d_out, labels, "bce")
            grads = backward(tape, d_loss)
            discriminator.set_parameters(d_opt.step(discriminator.parameters(),
                                                    [grads[p] for p in d_params]))
            history.d_losses.append(float(d_loss.values))
            history.d_accuracy.append(float(np.mean((d_out.values > 0.5) == (labels > 0.5))))

            # 生成器更新 (判別器參數凍結)
            z = rng.standard_normal((b, latent))
            with Tape() as tape:
                g_params = generator.parameter_tensors(requires_grad=True)
                generated = generator.forward(z, params=g_params, dropout_active=True,
                                              dropout_seed=_step_seed(rng))
                judged = discriminator.forward(generated)
                g_loss = loss(judged, np.ones((b, 1)), "bce")
            grads = backward(tape, g_loss)
            generator.set_parameters(g_opt.step(generator.parameters(),
                                                [grads[p] for p in g_params]))
            history.g_losses.append(float(g_loss.values))
        logger.debug("epoch %d d_loss %.4f g_loss %.4f", epoch,
                     history.d_losses[-1] if history.d_losses else float("nan"),
                     history.g_losses[-1] if history.g_losses else float("nan"))
    return GanResult(generator, discriminator, history)


def train_diffusion(model: Model, dataset: Dataset, cfg: TrainConfig,
                    dcfg: DiffusionConfig) -> Tuple[Model, TrainingHistory]:
    """Train the denoiser to predict ε from (x_t, t/T) with uniformly sampled t."""
    if model.input_dim != dataset.input_dim + 1:
        raise ContractError(
            f"denoiser input {model.input_dim} must be data width {dataset.input_dim} + 1 timestep slot"
        )
    if model.output_dim != dataset.input_dim:
        raise ContractError(f"denoiser output {model.output_dim} vs data width {dataset.input_dim}")
    loss_kind = cfg.loss_kind or "mse"
    model = model.copy()
    history = TrainingHistory()
    optimizer = make_optimizer(cfg)
    rng = np.random.default_rng(cfg.seed)
    logger.info("Training diffusion denoiser on %s for %d epochs (T=%d)",
                dataset.name, cfg.epochs, dcfg.steps)
    for epoch in range(cfg.epochs):
        steps = 0
        for idx in _batches(rng, len(dataset), cfg.batch_size):
            x0 = dataset.inputs[idx]
            t = rng.integers(1, dcfg.steps + 1, size=x0.shape[0])
            eps = rng.standard_normal(x0.shape)
            inputs = dcfg.encode(dcfg.noised(x0, t, eps), t)
            history.losses.append(_train_step(model, optimizer, inputs, eps, loss_kind, _step_seed(rng)))
            steps += 1
        history.close_epoch(steps)
    return model, history


def denoiser_mse(model: Model, dataset: Dataset, dcfg: DiffusionConfig, seed: int = 0,
                 timestep: Optional[int] = None) -> float:
    """Noise-prediction mse on `dataset` with seeded t (or a fixed timestep) and ε."""
    rng = np.random.default_rng(seed)
    n = len(dataset)
    t = np.full(n, timestep) if timestep is not None else rng.integers(1, dcfg.steps + 1, size=n)
    eps = rng.standard_normal(dataset.inputs.shape)
    pred = model.predict(dcfg.encode(dcfg.noised(dataset.inputs, t, eps), t))
    return float(np.mean((pred - eps) ** 2))
