"""
Approximate-discontinuity measurements.

- d_m: minimum pairwise L1 distance between model outputs over a dataset.
- FGSM and random perturbations of size η.
- e_a / e_n: L1 output change over L1 input change along the adversarial / random
  direction, and their ratio r.
- η-sweeps averaging r over inputs for several noise seeds.

Each model family is measured through a probe target that fixes what O(x) is and
which loss drives ∇_x L.
"""
import logging
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .data_utils import Dataset
from .errors import (
    ConfigError,
    ContractError,
    DimensionError,
    InstabilityError,
    NumericError,
    ParameterError,
    SweepError,
)
from .models import DiffusionConfig, Model
from .tensor import Tape, Tensor, backward, input_gradient, loss

logger = logging.getLogger(__name__)

DENOMINATOR_FLOOR = 1e-12
ETA_FLOOR = 1e-7
MAX_DISCARD_FRACTION = 0.5
DROPOUT_POLICIES = ("shared", "independent")


# --- probe targets ---

class ProbeTarget(ABC):
    """What is measured for one model family: O(x) and the loss behind ∇_x L."""

    family = "model"

    def __init__(self, dropout_active: bool = False):
        self.dropout_active = dropout_active

    @property
    @abstractmethod
    def input_dim(self) -> int:
        pass

    @abstractmethod
    def outputs(self, x: np.ndarray, dropout_seeds=None) -> np.ndarray:
        """O(x, θ) for a batch of rows."""
        pass

    @abstractmethod
    def input_gradient(self, x: np.ndarray, targets, dropout_seeds=None) -> np.ndarray:
        """∇_x L(O(x, θ), y) for a batch of rows."""
        pass

    def default_targets(self, x: np.ndarray, labels: Optional[np.ndarray] = None):
        """Targets the family was trained against, given probe inputs and labels."""
        return labels

    def _dropout_kwargs(self, dropout_seeds):
        if self.dropout_active and dropout_seeds is not None:
            return {"dropout_active": True, "dropout_seed": dropout_seeds}
        return {}


class ModelProbe(ProbeTarget):
    """A single model with a fixed loss kind."""

    def __init__(self, model: Model, loss_kind: Optional[str], dropout_active: bool = False):
        super().__init__(dropout_active)
        self.model = model
        self.loss_kind = loss_kind

    @property
    def input_dim(self) -> int:
        return self.model.input_dim

    def outputs(self, x, dropout_seeds=None):
        return self.model.predict(x, **self._dropout_kwargs(dropout_seeds))

    def input_gradient(self, x, targets, dropout_seeds=None):
        if self.loss_kind is None:
            raise ContractError("this probe has no loss bound; pass loss_kind")
        return input_gradient(self.model, x, targets, self.loss_kind,
                              **self._dropout_kwargs(dropout_seeds))

    def sample_losses(self, x, targets) -> np.ndarray:
        """Per-row loss values (evaluation mode)."""
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        targets = np.asarray(targets)
        values = []
        for i in range(x.shape[0]):
            out = self.model.forward(x[i:i + 1],
                                     apply_output_activation=(self.loss_kind != "cross_entropy"))
            tgt = targets[i:i + 1]
            values.append(float(loss(out, tgt, self.loss_kind).values))
        return np.array(values)


class ClassifierProbe(ModelProbe):
    """Softmax outputs; cross-entropy against the true label."""

    family = "classifier"

    def __init__(self, model: Model, dropout_active: bool = False):
        super().__init__(model, "cross_entropy", dropout_active)


class AutoencoderProbe(ModelProbe):
    """Reconstruction outputs; mse against the clean input."""

    family = "autoencoder"

    def __init__(self, model: Model, dropout_active: bool = False):
        super().__init__(model, "mse", dropout_active)

    def default_targets(self, x, labels=None):
        return np.array(x, dtype=np.float64)


class DiscriminatorProbe(ModelProbe):
    """Real/fake probability; bce against the true real/fake label."""

    family = "discriminator"

    def __init__(self, model: Model, dropout_active: bool = False):
        super().__init__(model, "bce", dropout_active)

    def default_targets(self, x, labels=None):
        if labels is not None:
            return np.asarray(labels, dtype=np.float64).reshape(-1, 1)
        return np.ones((np.atleast_2d(x).shape[0], 1))


class DenoiserProbe(ProbeTarget):
    """
    Noise prediction at a fixed timestep. Inputs are noisy images x_t; the timestep slot
    is appended internally and never perturbed. Loss is mse against the true ε.
    """

    family = "denoiser"

    def __init__(self, model: Model, dcfg: DiffusionConfig, timestep: int,
                 dropout_active: bool = False):
        super().__init__(dropout_active)
        if not 1 <= timestep <= dcfg.steps:
            raise ConfigError(f"probe timestep {timestep} outside 1..{dcfg.steps}")
        self.model = model
        self.dcfg = dcfg
        self.timestep = timestep

    @property
    def input_dim(self) -> int:
        return self.model.input_dim - 1

    def outputs(self, x, dropout_seeds=None):
        return self.model.predict(self.dcfg.encode(x, self.timestep),
                                  **self._dropout_kwargs(dropout_seeds))

    def input_gradient(self, x, targets, dropout_seeds=None):
        full = input_gradient(self.model, self.dcfg.encode(x, self.timestep), targets, "mse",
                              **self._dropout_kwargs(dropout_seeds))
        return full[:, :-1]

    def noisy_inputs(self, x0: np.ndarray, seed: int) -> Tuple[np.ndarray, np.ndarray]:
        """Seeded (x_t, ε) pairs at the probe timestep for clean images x0."""
        eps = np.random.default_rng(seed).standard_normal(x0.shape)
        t = np.full(x0.shape[0], self.timestep)
        return self.dcfg.noised(x0, t, eps), eps


class GeneratorProbe(ProbeTarget):
    """
    Generator outputs G(z); the perturbation acts on the latent z and the loss is the
    non-saturating generator loss through the frozen discriminator.
    """

    family = "generator"

    def __init__(self, generator: Model, discriminator: Model, dropout_active: bool = False):
        super().__init__(dropout_active)
        if generator.output_dim != discriminator.input_dim:
            raise DimensionError("generator output and discriminator input widths differ")
        self.generator = generator
        self.discriminator = discriminator

    @property
    def input_dim(self) -> int:
        return self.generator.input_dim

    def outputs(self, x, dropout_seeds=None):
        return self.generator.predict(x, **self._dropout_kwargs(dropout_seeds))

    def input_gradient(self, x, targets=None, dropout_seeds=None):
        z = np.atleast_2d(np.asarray(x, dtype=np.float64))
        with Tape() as tape:
            zt = Tensor(z, requires_grad=True)
            generated = self.generator.forward(zt, **self._dropout_kwargs(dropout_seeds))
            value = loss(self.discriminator.forward(generated), np.ones((z.shape[0], 1)), "bce")
        return backward(tape, value)[zt]

    def default_targets(self, x, labels=None):
        return np.ones((np.atleast_2d(x).shape[0], 1))


def as_probe(model, loss_kind: Optional[str] = None, dropout_active: bool = False) -> ProbeTarget:
    if isinstance(model, ProbeTarget):
        return model
    return ModelProbe(model, loss_kind, dropout_active)


# --- d_m ---

@dataclass(frozen=True)
class PairwiseResult:
    """Minimum pairwise L1 output distance and the first pair (i < j) attaining it."""

    d_m: float
    pair: Tuple[int, int]
    count: int
    duplicates: bool = False


def _l1(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.sum(np.abs(a - b)))


def _has_duplicate_rows(rows: np.ndarray) -> bool:
    rows = np.ascontiguousarray(rows)
    seen = set()
    for row in rows:
        key = row.tobytes()
        if key in seen:
            return True
        seen.add(key)
    return False


def _scan_block(outputs: np.ndarray, i0: int, i1: int, col_block: int, tolerance: float):
    """Block minimum over pairs (i, j), i in [i0, i1), j > i, plus near-minimal candidates."""
    n = outputs.shape[0]
    best = np.inf
    found = []
    for j0 in range(i0, n, col_block):
        j1 = min(n, j0 + col_block)
        dist = np.abs(outputs[i0:i1, None, :] - outputs[None, j0:j1, :]).sum(axis=-1)
        ii, jj = np.meshgrid(np.arange(i0, i1), np.arange(j0, j1), indexing="ij")
        upper = jj > ii
        if not upper.any():
            continue
        local = dist[upper].min()
        if local < best:
            best = local
        keep = upper & (dist <= local * (1.0 + tolerance))
        found.extend(zip(dist[keep].tolist(), ii[keep].tolist(), jj[keep].tolist()))
    return best, found


def min_pairwise_distance(outputs: np.ndarray, block_rows: int = 64, threads: int = 1,
                          tolerance: float = 1e-9) -> Tuple[float, Tuple[int, int]]:
    """
    Exact minimum L1 distance over all row pairs of `outputs` and its first (i, j).

    The blocked scan only nominates candidates; every candidate is re-evaluated with the
    same per-pair expression a plain double loop uses, so the result is independent of
    blocking and thread count.
    """
    outputs = np.ascontiguousarray(np.asarray(outputs, dtype=np.float64))
    if outputs.ndim == 1:
        outputs = outputs.reshape(-1, 1)
    n, width = outputs.shape
    if n < 2:
        raise ContractError(f"d_m needs at least 2 inputs, got {n}")
    col_block = max(1, min(n, (1 << 22) // max(1, block_rows * width)))
    starts = list(range(0, n - 1, block_rows))
    scan = lambda i0: _scan_block(outputs, i0, min(n - 1, i0 + block_rows), col_block, tolerance)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(scan, starts))
        # blocks come back in submission order
    else:
        blocks = [scan(i0) for i0 in starts]
    global_best = min(b for b, _ in blocks)
    limit = global_best * (1.0 + tolerance)
    candidates = sorted((i, j) for _, found in blocks for d, i, j in found if d <= limit)
    d_m, pair = np.inf, None
    for i, j in candidates:
        d = _l1(outputs[i], outputs[j])
        if d < d_m:
            d_m, pair = d, (i, j)
    return d_m, pair


def min_pairwise_output_distance(model, dataset: Dataset, block_rows: int = 64,
                                 threads: int = 1, batch_size: int = 1024) -> PairwiseResult:
    """d_m = min ||O(x_i) - O(x_j)||_1 over all i != j of an (ideally deduplicated) dataset."""
    if len(dataset) < 2:
        raise ContractError(f"d_m needs at least 2 inputs, got {len(dataset)}")
    rows = dataset.raw.reshape(len(dataset), -1) if dataset.raw is not None else dataset.inputs
    duplicates = _has_duplicate_rows(rows)
    if duplicates:
        logger.warning("%s contains duplicate inputs; d_m will be 0 for them", dataset.name)
    probe = as_probe(model)
    outputs = np.vstack([
        np.atleast_2d(probe.outputs(dataset.inputs[s:s + batch_size]))
        for s in range(0, len(dataset), batch_size)
    ])
    d_m, pair = min_pairwise_distance(outputs, block_rows=block_rows, threads=threads)
    logger.info("d_m over %d inputs of %s: %.6g at %s", len(dataset), dataset.name, d_m, pair)
    return PairwiseResult(d_m, pair, len(dataset), duplicates)


def invert_by_nearest_output(outputs: np.ndarray, y: np.ndarray) -> int:
    """Index of the dataset row whose output is L1-nearest to `y` (lowest index on ties)."""
    outputs = np.atleast_2d(np.asarray(outputs, dtype=np.float64))
    dist = np.abs(outputs - np.asarray(y, dtype=np.float64)).sum(axis=1)
    return int(np.argmin(dist))


# --- perturbations and expansions ---

def fgsm_perturb(model, x, target, loss_kind: Optional[str], eta: float, *,
                 clip: bool = False, dropout_seeds=None) -> np.ndarray:
    """x_a = x + η · sign(∇_x L(O(x, θ), y)); sign(0) = 0; no clipping unless asked."""
    if eta < 0:
        raise ParameterError(f"eta must be >= 0, got {eta}")
    probe = as_probe(model, loss_kind)
    x = np.asarray(x, dtype=np.float64)
    grad = probe.input_gradient(x, target, dropout_seeds)
    if not np.all(np.isfinite(grad)):
        raise NumericError("non-finite input gradient")
    x_a = x + eta * np.sign(grad).reshape(x.shape)
    return np.clip(x_a, 0.0, 1.0) if clip else x_a


def random_perturb(x, eta: float, noise_seed: int) -> np.ndarray:
    """x' = x + η · ε with ε elementwise standard normal from `noise_seed`."""
    if not eta > 0:
        raise ParameterError(f"eta must be > 0, got {eta}")
    x = np.asarray(x, dtype=np.float64)
    return x + eta * np.random.default_rng(noise_seed).standard_normal(x.shape)


def _expansion_rows(out, out_pert, x, x_pert):
    num = np.abs(np.atleast_2d(out) - np.atleast_2d(out_pert)).sum(axis=1)
    den = np.abs(np.atleast_2d(x) - np.atleast_2d(x_pert)).sum(axis=1)
    valid = np.isfinite(num) & np.isfinite(den) & (den >= DENOMINATOR_FLOOR)
    e = np.full(num.shape, np.nan)
    e[valid] = num[valid] / den[valid]
    return e, valid


def expansion(model, x, x_pert, dropout_seeds=None):
    """||O(x) - O(x_pert)||_1 / ||x - x_pert||_1, per row for a batch."""
    probe = as_probe(model)
    x = np.asarray(x, dtype=np.float64)
    x_pert = np.asarray(x_pert, dtype=np.float64)
    if x.shape != x_pert.shape:
        raise DimensionError(f"{x.shape} vs {x_pert.shape}")
    e, valid = _expansion_rows(probe.outputs(np.atleast_2d(x), dropout_seeds),
                               probe.outputs(np.atleast_2d(x_pert), dropout_seeds),
                               x, x_pert)
    if not valid.all():
        raise InstabilityError("input change below 1e-12 or non-finite expansion")
    return float(e[0]) if x.ndim == 1 else e


def expansion_adversarial(model, x, x_a, dropout_seeds=None):
    """e_a: output expansion along the FGSM direction."""
    return expansion(model, x, x_a, dropout_seeds)


def expansion_random(model, x, x_n, dropout_seeds=None):
    """e_n: output expansion along a random direction."""
    return expansion(model, x, x_n, dropout_seeds)


def expansion_ratio(e_a: float, e_n: float) -> float:
    """r = e_a / e_n."""
    if not np.isfinite(e_a) or not np.isfinite(e_n) or e_n == 0:
        raise InstabilityError(f"cannot form ratio {e_a} / {e_n}")
    return e_a / e_n


def composite_ratio(out, out_a, out_n, x, x_a, x_n) -> float:
    """The ratio written as one fraction of the four L1 norms."""
    return (_l1(out, out_a) * _l1(x, x_n)) / (_l1(out, out_n) * _l1(x, x_a))


# --- η-sweeps ---

def default_eta_grid(eta_max: float = 1e-1, eta_min: float = 1e-5, points: int = 13) -> Tuple[float, ...]:
    """Log-spaced, strictly decreasing grid (13 points from 1e-1 to 1e-5 by default)."""
    if points < 2 or not eta_max > eta_min > 0:
        raise ConfigError(f"bad eta grid {eta_max}..{eta_min} with {points} points")
    return tuple(float(v) for v in np.logspace(np.log10(eta_max), np.log10(eta_min), points))


@dataclass(frozen=True)
class EtaSweepConfig:
    eta_grid: Tuple[float, ...] = field(default_factory=default_eta_grid)
    num_inputs: int = 200
    num_noise_seeds: int = 5
    seed: int = 0
    clip: bool = False
    dropout_active: bool = False
    dropout_policy: str = "shared"
    mask_seed: int = 0
    retain_raw: bool = False

    def __post_init__(self):
        grid = tuple(float(v) for v in self.eta_grid)
        if any(not v > 0 for v in grid):
            raise ConfigError("eta values must be positive")
        if any(a <= b for a, b in zip(grid, grid[1:])):
            raise ConfigError("eta grid must be strictly decreasing")
        kept = tuple(v for v in grid if v >= ETA_FLOOR)
        if len(kept) != len(grid):
            logger.warning("dropping eta values below %g (numerically unstable): %s",
                           ETA_FLOOR, [v for v in grid if v < ETA_FLOOR])
        if not kept:
            raise ConfigError("no eta values left above the 1e-7 floor")
        object.__setattr__(self, "eta_grid", kept)
        if self.num_inputs < 1 or self.num_noise_seeds < 1:
            raise ConfigError("num_inputs and num_noise_seeds must be >= 1")
        if self.dropout_policy not in DROPOUT_POLICIES:
            raise ConfigError(f"dropout_policy must be one of {DROPOUT_POLICIES}")

    @property
    def noise_seeds(self) -> Tuple[int, ...]:
        return tuple(self.seed + k for k in range(self.num_noise_seeds))


@dataclass
class SweepResult:
    """Mean expansion ratio per (η, noise seed) plus per-η aggregates."""

    etas: np.ndarray
    noise_seeds: Tuple[int, ...]
    mean_r: np.ndarray
    std_r: np.ndarray
    n_discarded: np.ndarray
    input_indices: Tuple[int, ...]
    instability_count: int
    label: str = ""
    e_a: Optional[np.ndarray] = None
    e_n: Optional[np.ndarray] = None

    @property
    def grand_mean(self) -> np.ndarray:
        return self.mean_r.mean(axis=1)

    @property
    def grand_std(self) -> np.ndarray:
        return self.mean_r.std(axis=1)

    def curve(self) -> List[Tuple[float, float]]:
        return [(float(e), float(m)) for e, m in zip(self.etas, self.grand_mean)]

    def to_frame(self) -> pd.DataFrame:
        """One row per (η, seed): descending η, then ascending seed."""
        rows = []
        for k, eta in enumerate(self.etas):
            for j in np.argsort(self.noise_seeds, kind="stable"):
                rows.append({
                    "eta": float(eta),
                    "noise_seed": int(self.noise_seeds[j]),
                    "mean_r": float(self.mean_r[k, j]),
                    "std_r": float(self.std_r[k, j]),
                    "n_discarded": int(self.n_discarded[k, j]),
                })
        frame = pd.DataFrame(rows, columns=["eta", "noise_seed", "mean_r", "std_r", "n_discarded"])
        return frame.sort_values(["eta", "noise_seed"], ascending=[False, True], kind="stable",
                                 ignore_index=True)

    def summary(self) -> dict:
        return {
            "label": self.label,
            "etas": [float(e) for e in self.etas],
            "mean_r": [float(v) for v in self.grand_mean],
            "std_r": [float(v) for v in self.grand_std],
            "instability_count": int(self.instability_count),
            "growth": growth_factor(self),
            "variation": variation_factor(self),
            "trend": trend_statistic(self.etas, self.grand_mean),
        }


def _row_seeds(base: Sequence[int], indices: Sequence[int]) -> np.ndarray:
    return np.array([np.random.SeedSequence(list(base) + [int(i)]).generate_state(1)[0]
                     for i in indices], dtype=np.uint64)


def _noise_directions(seed: int, indices: Sequence[int], width: int) -> np.ndarray:
    """One standard normal direction per input, keyed by (seed, input index), shared across η."""
    return np.stack([
        np.random.default_rng(np.random.SeedSequence([seed, int(i)])).standard_normal(width)
        for i in indices
    ])


def eta_sweep(model, inputs, targets, cfg: EtaSweepConfig, *, loss_kind: Optional[str] = None,
              input_indices: Optional[Sequence[int]] = None, threads: int = 1,
              label: str = "") -> SweepResult:
    """
    Mean r_η over the first `cfg.num_inputs` inputs for every η and noise seed.

    Samples with a non-finite value or a degenerate denominator are discarded and
    counted; more than half discarded at any η, or every sample of one noise seed,
    raises SweepError.
    """
    inputs = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
    if cfg.num_inputs > inputs.shape[0]:
        raise ContractError(f"sweep wants {cfg.num_inputs} inputs, only {inputs.shape[0]} given")
    probe = as_probe(model, loss_kind, cfg.dropout_active)
    probe.dropout_active = cfg.dropout_active
    n = cfg.num_inputs
    x = inputs[:n]
    tgt = targets[:n] if targets is not None else probe.default_targets(x)
    indices = tuple(int(i) for i in (input_indices[:n] if input_indices is not None else range(n)))
    etas = np.asarray(cfg.eta_grid)
    seeds = cfg.noise_seeds

    def mask(role: Sequence[int]):
        if not cfg.dropout_active:
            return None
        if cfg.dropout_policy == "shared":
            return _row_seeds([cfg.mask_seed], indices)
        return _row_seeds([cfg.mask_seed] + list(role), indices)

    logger.info("Sweeping %d eta values x %d seeds over %d inputs (%s)",
                len(etas), len(seeds), n, label or probe.family)
    base_mask = mask([0])
    out = probe.outputs(x, base_mask)
    grad = probe.input_gradient(x, tgt, base_mask)
    if not np.all(np.isfinite(grad)):
        raise NumericError("non-finite input gradient in sweep")
    direction = np.sign(grad)
    noise = [_noise_directions(s, indices, x.shape[1]) for s in seeds]

    def one_eta(k: int):
        eta = etas[k]
        x_a = x + eta * direction
        if cfg.clip:
            x_a = np.clip(x_a, 0.0, 1.0)
        e_a, valid_a = _expansion_rows(out, probe.outputs(x_a, mask([1, k])), x, x_a)
        rows = []
        for j, eps in enumerate(noise):
            x_n = x + eta * eps
            if cfg.clip:
                x_n = np.clip(x_n, 0.0, 1.0)
            e_n, valid_n = _expansion_rows(out, probe.outputs(x_n, mask([2, k, j])), x, x_n)
            valid = valid_a & valid_n
            valid[valid] &= (e_a[valid] > 0) & (e_n[valid] > 0)
            r = e_a[valid] / e_n[valid]
            rows.append((
                float(r.mean()) if r.size else np.nan,
                float(r.std()) if r.size else np.nan,
                int(n - valid.sum()),
                np.where(valid, e_a, np.nan),
                np.where(valid, e_n, np.nan),
            ))
        return rows

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_eta = list(pool.map(one_eta, range(len(etas))))
    else:
        per_eta = [one_eta(k) for k in range(len(etas))]

    shape = (len(etas), len(seeds))
    mean_r, std_r = np.empty(shape), np.empty(shape)
    discarded = np.zeros(shape, dtype=np.int64)
    raw_a = np.empty(shape + (n,)) if cfg.retain_raw else None
    raw_n = np.empty(shape + (n,)) if cfg.retain_raw else None
    for k, rows in enumerate(per_eta):
        for j, (m, s, d, ea, en) in enumerate(rows):
            mean_r[k, j], std_r[k, j], discarded[k, j] = m, s, d
            if cfg.retain_raw:
                raw_a[k, j], raw_n[k, j] = ea, en
        total = int(discarded[k].sum())
        if total > MAX_DISCARD_FRACTION * n * len(seeds):
            raise SweepError(float(etas[k]), total, n * len(seeds))
        # 單一種子全部丟棄時平均值無定義
        for j in np.flatnonzero(discarded[k] == n):
            raise SweepError(float(etas[k]), n, n, noise_seed=seeds[j])
        if total:
            logger.warning("eta=%g: discarded %d of %d samples", etas[k], total, n * len(seeds))

    return SweepResult(etas, seeds, mean_r, std_r, discarded, indices,
                       int(discarded.sum()), label, raw_a, raw_n)


# --- curve statistics ---

def rank_correlation(a, b) -> float:
    """Spearman correlation: Pearson correlation of the average ranks; 0 when undefined."""
    frame = pd.DataFrame({"a": np.asarray(a, dtype=np.float64), "b": np.asarray(b, dtype=np.float64)})
    ranks = frame.rank()
    value = ranks["a"].corr(ranks["b"])
    return float(value) if np.isfinite(value) else 0.0


def trend_statistic(etas, means) -> float:
    """Rank correlation of (-log η, mean r); near 1 when r grows as η shrinks."""
    return rank_correlation(-np.log10(np.asarray(etas, dtype=np.float64)), means)


def growth_factor(result: SweepResult) -> float:
    """Mean r at the smallest η over mean r at the largest η."""
    means = result.grand_mean
    return float(means[-1] / means[0])


def variation_factor(result: SweepResult) -> float:
    """max/min of the mean-r curve across the grid."""
    means = result.grand_mean
    return float(means.max() / means.min())
