"""
Config-driven experiment runner.

`ExperimentRunner.run_analysis` trains what the experiment needs, measures d_m and
η-sweeps, writes CSV/SVG/checkpoint artifacts, then a JSON summary, a Markdown report
and a manifest listing every file it produced.
"""
import dataclasses
import json
import logging
import os
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from .bijection import boundary_sweep, is_bijective
from .checkpoint import save_checkpoint
from .config import AUTOENCODER_FAMILIES, ExperimentConfig
from .data_utils import Dataset, combine, deduplicate, load_cifar, load_idx, synthesize
from .errors import ContractError
from .metrics import (
    AutoencoderProbe,
    ClassifierProbe,
    DenoiserProbe,
    DiscriminatorProbe,
    GeneratorProbe,
    ProbeTarget,
    SweepResult,
    eta_sweep,
    invert_by_nearest_output,
    min_pairwise_output_distance,
    rank_correlation,
    variation_factor,
)
from .models import (
    Model,
    ModelSpec,
    build_mlp,
    denoiser_mse,
    evaluate_accuracy,
    named_spec,
    train_autoencoder,
    train_classifier,
    train_diffusion,
    train_gan,
)
from .plotting import emit_boundary_csv, emit_plot_svg, emit_sweep_csv

logger = logging.getLogger(__name__)

TABLE1_DISCLAIMER = (
    "d_m is measured on this run's reference MLP classifier; the architecture behind the "
    "published table is unknown, so only the sign and rough magnitude are comparable."
)

# 內建檢查門檻
DENOISE_PASS_FRACTION = 0.9
NOT_IDENTITY_PER_DIM = 0.01
FLAT_VARIATION = 3.0
GAN_OVER_DIFFUSION = 5.0
DM_TRAINING_RATIO = 10.0


# --- data ---

def load_splits(cfg: ExperimentConfig) -> Tuple[Dataset, Dataset]:
    """(train, test) splits for the configured data source."""
    data = cfg.data
    if data.format == "synthetic":
        full = synthesize(cfg.seed, data.synthetic_samples, data.synthetic_dim, data.synthetic_classes)
        n_test = max(1, int(round(len(full) * data.test_fraction)))
        train = full.subset(range(len(full) - n_test), f"{full.name}-train")
        test = full.subset(range(len(full) - n_test, len(full)), f"{full.name}-test")
    elif data.format == "idx":
        train = load_idx(data.train_images, data.train_labels, "train")
        test = load_idx(data.test_images, data.test_labels, "test") if data.test_images else None
    else:
        train = load_cifar(data.cifar_train, data.format, f"{data.format}-train")
        test = load_cifar(data.cifar_test, data.format, f"{data.format}-test") if data.cifar_test else None
    if test is None:
        shuffled = train.permute(cfg.seed)
        n_test = max(1, int(round(len(shuffled) * data.test_fraction)))
        test = shuffled.subset(range(len(shuffled) - n_test, len(shuffled)), "test")
        train = shuffled.subset(range(len(shuffled) - n_test), "train")
    if data.train_subset is not None and data.train_subset < len(train):
        train = train.permute(cfg.seed).subset(range(data.train_subset), train.name)
    logger.info("Loaded %d train / %d test inputs of width %d", len(train), len(test), train.input_dim)
    return train, test


def dm_dataset(cfg: ExperimentConfig, train: Dataset, test: Dataset) -> Tuple[Dataset, int]:
    """The d_m input set and the number of duplicates removed from it."""
    d = {"combined": lambda: combine(train, test, "combined"),
         "train": lambda: train, "test": lambda: test}[cfg.data.dm_split]()
    removed = 0
    if cfg.data.deduplicate:
        before = len(d)
        d = deduplicate(d)
        removed = before - len(d)
    if cfg.data.dm_inputs is not None and cfg.data.dm_inputs < len(d):
        d = d.subset(range(cfg.data.dm_inputs))
    return d, removed


def select_indices(n_available: int, n: int, seed: int) -> List[int]:
    """Seeded, sorted sample of sweep input indices."""
    if n > n_available:
        raise ContractError(f"sweep wants {n} inputs, only {n_available} available")
    rng = np.random.default_rng(seed)
    return sorted(int(i) for i in rng.choice(n_available, size=n, replace=False))


def denoising_errors(model: Model, clean: np.ndarray, noise: np.ndarray) -> pd.DataFrame:
    """Per-input L1 errors: ||ε||, ||AE(x+ε) − x|| and ||AE(x) − x||."""
    denoised = model.predict(clean + noise)
    reconstructed = model.predict(clean)
    return pd.DataFrame({
        "sample": np.arange(len(clean)),
        "noise_l1": np.abs(noise).sum(axis=1),
        "denoised_l1": np.abs(denoised - clean).sum(axis=1),
        "identity_l1": np.abs(reconstructed - clean).sum(axis=1),
    })


def denoise_checks(errors: pd.DataFrame, input_dim: int) -> dict:
    """Fraction of inputs the model denoises, and whether it moved away from the identity."""
    passed = float((errors["denoised_l1"] < errors["noise_l1"]).mean())
    return {
        "denoised_fraction": passed,
        "denoising_reduces_error": passed >= DENOISE_PASS_FRACTION,
        "mean_identity_l1": float(errors["identity_l1"].mean()),
        "not_identity": bool(errors["identity_l1"].mean() > NOT_IDENTITY_PER_DIM * input_dim),
    }


def ordered_by_compression(final_r: Dict[str, float]) -> bool:
    """Mean r at the smallest η falls strictly from funnel16 to funnel8 to overcomplete."""
    ranked = [final_r[f] for f in AUTOENCODER_FAMILIES if f in final_r]
    return all(a > b for a, b in zip(ranked, ranked[1:]))


class ExperimentRunner:
    """運行單一實驗配置並輸出所有結果檔案"""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.output_dir = config.output_dir
        os.makedirs(self.output_dir, exist_ok=True)
        self.analysis_results: Dict = {}
        self.checks: Dict[str, bool] = {}
        self.curves: Dict[str, List[Tuple[float, float]]] = {}
        self.artifacts: Dict[str, List[str]] = {"csv": [], "svg": [], "checkpoints": []}
        self._splits: Optional[Tuple[Dataset, Dataset]] = None

    # --- helpers ---

    def _path(self, name: str) -> str:
        return os.path.join(self.output_dir, name)

    def splits(self) -> Tuple[Dataset, Dataset]:
        if self._splits is None:
            self._splits = load_splits(self.config)
        return self._splits

    def save_model(self, model: Model, name: str) -> str:
        path = save_checkpoint(model, self._path(f"{name}.adpr"))
        self.artifacts["checkpoints"].append(path)
        return path

    def train_classifier(self, dropout_rate: float = 0.0, epochs: Optional[int] = None) -> Model:
        train, _ = self.splits()
        spec = self.config.model_spec("classifier", train.input_dim, train.class_count,
                                      dropout_rate=dropout_rate)
        cfg = self.config.train
        if epochs is not None:
            cfg = dataclasses.replace(cfg, epochs=epochs)
        model, history = train_classifier(build_mlp(spec), train, cfg)
        self.analysis_results.setdefault("training", {})[
            self._training_key(dropout_rate, cfg.epochs)
        ] = {
            "epochs": cfg.epochs,
            "final_loss": history.epoch_losses[-1] if history.epoch_losses else None,
            "train_accuracy": history.epoch_accuracy[-1] if history.epoch_accuracy else None,
        }
        return model

    @staticmethod
    def _training_key(dropout_rate: float, epochs: int) -> str:
        if epochs == 0:
            return "classifier_untrained"
        return "classifier" if not dropout_rate else f"classifier_dropout_{dropout_rate:g}"

    def gan_specs(self) -> Tuple[ModelSpec, ModelSpec, Dataset]:
        train, _ = self.splits()
        gan = self.config.gan
        data = train.crop_features(gan.output_dim) if gan.output_dim else train
        gen_spec = self.config.model_spec("generator", gan.latent_dim, data.input_dim)
        disc_spec = self.config.model_spec("discriminator", data.input_dim)
        return gen_spec, disc_spec, data

    def train_gan(self) -> Tuple[Model, Model, Dataset]:
        gen_spec, disc_spec, data = self.gan_specs()
        result = train_gan(gen_spec, disc_spec, data, self.config.train)
        h = result.history
        self.analysis_results.setdefault("training", {})["gan"] = {
            "epochs": self.config.train.epochs,
            "final_d_loss": h.d_losses[-1] if h.d_losses else None,
            "final_g_loss": h.g_losses[-1] if h.g_losses else None,
            "final_d_accuracy": h.d_accuracy[-1] if h.d_accuracy else None,
        }
        self.save_model(result.generator, "generator")
        self.save_model(result.discriminator, "discriminator")
        return result.generator, result.discriminator, data

    def sweep(self, probe: ProbeTarget, inputs: np.ndarray, targets, name: str,
              indices: List[int], dropout: Optional[str] = None) -> SweepResult:
        cfg = self.config.sweep.to_sweep_config(self.config.seed, dropout)
        result = eta_sweep(probe, inputs, targets, cfg, input_indices=indices,
                           threads=self.config.threads, label=name)
        self.artifacts["csv"].append(emit_sweep_csv(result, self._path(f"sweep_{name}.csv")))
        self.curves[name] = result.curve()
        summary = result.summary()
        summary["input_indices"] = list(result.input_indices)
        self.analysis_results.setdefault("sweeps", {})[name] = summary
        logger.info("Sweep %s: growth %.3g, trend %.3f", name, summary["growth"], summary["trend"])
        return result

    def classifier_sweep(self, model: Model, name: str, dropout: Optional[str] = None) -> SweepResult:
        _, test = self.splits()
        idx = select_indices(len(test), self.config.sweep.inputs, self.config.seed)
        probe = ClassifierProbe(model)
        return self.sweep(probe, test.inputs[idx], test.labels[idx], name, idx, dropout)

    def plot(self, name: str, title: str, curves: Optional[Dict] = None, log_y: bool = True,
             xlabel: str = "eta", ylabel: str = "mean r") -> str:
        path = emit_plot_svg(curves or self.curves, self._path(f"{name}.svg"), log_y=log_y,
                             title=title, xlabel=xlabel, ylabel=ylabel)
        self.artifacts["svg"].append(path)
        return path

    # --- experiments ---

    def run_table1_dm(self):
        train, test = self.splits()
        model = self.train_classifier()
        self.save_model(model, "classifier")
        data, removed = dm_dataset(self.config, train, test)
        pairwise = min_pairwise_output_distance(model, data, threads=self.config.threads)
        probe_rows = min(len(data), 32)
        outputs = model.predict(data.inputs)
        inverted = all(invert_by_nearest_output(outputs, outputs[i]) == i for i in range(probe_rows))
        self.analysis_results["table1"] = {
            "dataset": data.name,
            "n_inputs": len(data),
            "duplicates_removed": removed,
            "d_m": pairwise.d_m,
            "pair": list(pairwise.pair),
            "test_accuracy": evaluate_accuracy(model, test),
            "disclaimer": TABLE1_DISCLAIMER,
        }
        self.checks["d_m_positive"] = pairwise.d_m > 0
        self.checks["nearest_output_inversion"] = bool(inverted)

    def run_fig2_compression(self):
        train, test = self.splits()
        seed = self.config.seed
        n = self.config.sweep.inputs
        compression = {}
        growth = {}
        final_r = {}

        classifier = self.train_classifier()
        self.save_model(classifier, "classifier")
        growth["classifier"] = self.classifier_sweep(classifier, "classifier").summary()["growth"]
        compression["classifier"] = train.input_dim / classifier.spec.bottleneck

        idx = select_indices(len(test), n, seed)
        autoencoders = {}
        for family in self.config.autoencoder.families:
            spec = self.autoencoder_spec(family, train.input_dim)
            model, _ = train_autoencoder(build_mlp(spec), train, self.config.train,
                                         self.config.autoencoder.noise_std)
            self.save_model(model, family)
            result = self.sweep(AutoencoderProbe(model), test.inputs[idx], None, family, idx)
            autoencoders[family] = result
            growth[family] = result.summary()["growth"]
            final_r[family] = float(result.grand_mean[-1])
            compression[family] = train.input_dim / spec.bottleneck

        generator, discriminator, data = self.train_gan()
        z = np.random.default_rng(seed).standard_normal((n, generator.input_dim))
        result = self.sweep(GeneratorProbe(generator, discriminator), z, None, "generator", list(range(n)))
        growth["generator"] = result.summary()["growth"]
        compression["generator"] = data.input_dim / generator.input_dim
        if self.config.gan.probe_discriminator:
            real = test.crop_features(data.input_dim) if data.input_dim != test.input_dim else test
            self.sweep(DiscriminatorProbe(discriminator), real.inputs[idx], np.ones((n, 1)),
                       "discriminator", idx)

        names = sorted(growth)
        self.analysis_results["compression"] = {
            name: {"input_to_bottleneck": compression[name], "growth": growth[name]} for name in names
        }
        for family, r in final_r.items():
            self.analysis_results["compression"][family]["mean_r_at_eta_min"] = r
        self.checks["classifier_growth_exceeds_autoencoders"] = all(
            growth["classifier"] > growth[f] for f in self.config.autoencoder.families
        )
        self.checks["growth_tracks_compression"] = rank_correlation(
            [compression[k] for k in names], [growth[k] for k in names]
        ) > 0
        if len(final_r) >= 2:
            self.checks["compression_ordering_at_eta_min"] = ordered_by_compression(final_r)
        if "overcomplete" in autoencoders:
            variation = variation_factor(autoencoders["overcomplete"])
            self.analysis_results["compression"]["overcomplete"]["variation"] = variation
            self.checks["overcomplete_flat"] = variation <= FLAT_VARIATION
        self.plot("fig2_compression", "Expansion ratio by model family")

    def autoencoder_spec(self, family: str, input_dim: int) -> ModelSpec:
        return named_spec(family, input_dim, width_multiplier=self.config.width_multiplier,
                          init_seed=self.config.seed)

    def run_fig3_gan_vs_diffusion(self):
        train, test = self.splits()
        seed = self.config.seed
        n = self.config.sweep.inputs
        z = np.random.default_rng(seed).standard_normal((n, self.config.gan.latent_dim))
        gen_spec, disc_spec, _ = self.gan_specs()
        before = self.sweep(GeneratorProbe(build_mlp(gen_spec), build_mlp(disc_spec)), z, None,
                            "generator_untrained", list(range(n)))

        generator, discriminator, data = self.train_gan()
        gan_result = self.sweep(GeneratorProbe(generator, discriminator), z, None, "generator",
                                list(range(n)))
        idx = select_indices(len(test), n, seed)
        if self.config.gan.probe_discriminator:
            real = test.crop_features(data.input_dim) if data.input_dim != test.input_dim else test
            self.sweep(DiscriminatorProbe(discriminator), real.inputs[idx], np.ones((n, 1)),
                       "discriminator", idx)

        dcfg = self.config.diffusion.schedule()
        spec = self.config.model_spec("denoiser", train.input_dim)
        denoiser, history = train_diffusion(build_mlp(spec), train, self.config.train, dcfg)
        self.save_model(denoiser, "denoiser")
        probe = DenoiserProbe(denoiser, dcfg, self.config.diffusion.probe_timestep)
        x_t, eps = probe.noisy_inputs(test.inputs[idx], seed)
        diffusion_result = self.sweep(probe, x_t, eps, "denoiser", idx)

        at_eta_min = float(gan_result.grand_mean[-1] / diffusion_result.grand_mean[-1])
        untrained_variation = variation_factor(before)
        self.analysis_results["gan_vs_diffusion"] = {
            "generator_growth": gan_result.summary()["growth"],
            "denoiser_growth": diffusion_result.summary()["growth"],
            "generator_over_denoiser_at_eta_min": at_eta_min,
            "untrained_generator_variation": untrained_variation,
            "denoiser_test_mse": denoiser_mse(denoiser, test, dcfg, seed=seed),
            "probe_timestep": self.config.diffusion.probe_timestep,
            "final_denoiser_loss": history.epoch_losses[-1] if history.epoch_losses else None,
        }
        self.checks["gan_exceeds_diffusion_at_eta_min"] = at_eta_min >= GAN_OVER_DIFFUSION
        self.checks["untrained_generator_flat"] = untrained_variation <= FLAT_VARIATION
        self.plot("fig3_gan_vs_diffusion", "GAN generator vs diffusion denoiser")

    def run_figS1_denoise(self):
        train, test = self.splits()
        settings = self.config.autoencoder
        noise = settings.denoise_noise_std
        family = settings.denoise_family
        spec = self.autoencoder_spec(family, train.input_dim)
        model, history = train_autoencoder(build_mlp(spec), train, self.config.train, noise)
        self.save_model(model, f"denoising_{family}")
        idx = select_indices(len(test), min(settings.denoise_inputs, len(test)), self.config.seed)
        clean = test.inputs[idx]
        eps = noise * np.random.default_rng(self.config.seed).standard_normal(clean.shape)
        errors = denoising_errors(model, clean, eps)
        errors["sample"] = idx
        path = self._path("denoise_errors.csv")
        errors.to_csv(path, index=False, float_format="%.17g")
        self.artifacts["csv"].append(path)
        checks = denoise_checks(errors, train.input_dim)
        self.analysis_results["denoise"] = {
            "family": family,
            "noise_std": noise,
            "n_inputs": len(idx),
            "mean_noise_l1": float(errors["noise_l1"].mean()),
            "mean_denoised_l1": float(errors["denoised_l1"].mean()),
            "mean_identity_l1": checks["mean_identity_l1"],
            "identity_threshold": NOT_IDENTITY_PER_DIM * train.input_dim,
            "denoised_fraction": checks["denoised_fraction"],
            "final_loss": history.epoch_losses[-1] if history.epoch_losses else None,
        }
        self.checks["not_identity"] = checks["not_identity"]
        self.checks["denoising_reduces_error"] = checks["denoising_reduces_error"]

    def run_figS2_train_vs_untrained(self):
        train, test = self.splits()
        untrained = self.train_classifier(epochs=0)
        trained = self.train_classifier()
        self.save_model(untrained, "classifier_untrained")
        self.save_model(trained, "classifier_trained")
        data, removed = dm_dataset(self.config, train, test)
        dm_before = min_pairwise_output_distance(untrained, data, threads=self.config.threads)
        dm_after = min_pairwise_output_distance(trained, data, threads=self.config.threads)
        before = self.classifier_sweep(untrained, "untrained")
        after = self.classifier_sweep(trained, "trained")
        ratio = dm_after.d_m / dm_before.d_m if dm_before.d_m > 0 else None
        self.analysis_results["train_vs_untrained"] = {
            "d_m_untrained": dm_before.d_m,
            "d_m_trained": dm_after.d_m,
            "d_m_ratio": ratio,
            "duplicates_removed": removed,
            "growth_untrained": before.summary()["growth"],
            "growth_trained": after.summary()["growth"],
        }
        self.checks["training_increases_growth"] = bool(
            after.summary()["growth"] > before.summary()["growth"]
        )
        self.checks["d_m_training_ratio_at_least_10x"] = bool(
            ratio is not None and ratio >= DM_TRAINING_RATIO
        )
        self.plot("figS2_train_vs_untrained", "Trained vs untrained classifier")

    def run_dropout_control(self):
        rate = self.config.dropout.rate
        model = self.train_classifier(dropout_rate=rate)
        self.save_model(model, "classifier_dropout")
        off = self.classifier_sweep(model, "dropout_off", dropout="off")
        shared = self.classifier_sweep(model, "dropout_shared", dropout="shared")
        independent = self.classifier_sweep(model, "dropout_independent", dropout="independent")
        self.analysis_results["dropout_control"] = {
            "rate": rate,
            "growth_off": off.summary()["growth"],
            "growth_shared": shared.summary()["growth"],
            "growth_independent": independent.summary()["growth"],
        }
        self.checks["dropout_growth_at_least_10x"] = bool(independent.summary()["growth"] >= 10.0)
        self.plot("dropout_control", "Dropout at measurement")

    def run_bijection_demo(self):
        b = self.config.bijection
        frame = boundary_sweep(b.precision)
        self.artifacts["csv"].append(emit_boundary_csv(frame, self._path("bijection_boundary.csv")))
        ratios = frame["ratio"].to_numpy()
        self.analysis_results["bijection"] = {
            "precision": b.precision,
            "k": frame["k"].tolist(),
            "ratio": [float(r) for r in ratios],
        }
        self.checks["exhaustively_bijective"] = is_bijective(b.exhaustive_precision)
        self.checks["ratio_strictly_increasing"] = bool(np.all(np.diff(ratios) > 0))
        self.checks["ratio_grows_geometrically"] = bool(np.all(ratios[2:] / ratios[:-2] >= 2.0))
        curve = {"interleave": list(zip(frame["distance"].tolist(), ratios.tolist()))}
        self.plot("bijection_boundary", "Interleave expansion at dyadic boundaries", curve,
                  xlabel="input distance", ylabel="output change / input change")

    # --- orchestration ---

    def run_analysis(self) -> Dict:
        """運行完整實驗並返回產出清單"""
        kind = self.config.experiment
        logger.info("Starting experiment %s", kind)
        getattr(self, f"run_{kind}")()
        self.save_results()
        self.generate_report()
        manifest = self.write_manifest()
        logger.info("Experiment %s completed", kind)
        return manifest

    def summary(self) -> Dict:
        recorded = self.config.to_dict()
        recorded.pop("output_dir")
        recorded.pop("threads")
        return {
            "experiment": self.config.experiment,
            "config": recorded,
            "results": self.analysis_results,
            "checks": self.checks,
        }

    def save_results(self):
        path = self._path("summary.json")
        with open(path, "w") as f:
            json.dump(self.convert_to_serializable(self.summary()), f, indent=2, sort_keys=True)
            f.write("\n")
        logger.info("Results saved to %s", self.output_dir)

    def convert_to_serializable(self, obj):
        """將結果轉換為可序列化的格式"""
        if isinstance(obj, dict):
            return {str(k): self.convert_to_serializable(v) for k, v in obj.items()}
        elif isinstance(obj, (list, tuple)):
            return [self.convert_to_serializable(item) for item in obj]
        elif isinstance(obj, (np.bool_, bool)):
            return bool(obj)
        elif isinstance(obj, np.integer):
            return int(obj)
        elif isinstance(obj, (np.floating, float)):
            value = float(obj)
            return value if np.isfinite(value) else None
        elif isinstance(obj, np.ndarray):
            return self.convert_to_serializable(obj.tolist())
        return obj

    def generate_report(self):
        """生成實驗報告"""
        report = f"# {self.config.experiment}\n\n"
        report += f"- seed: {self.config.seed}\n"
        report += f"- width multiplier: {self.config.width_multiplier}\n\n"

        if "sweeps" in self.analysis_results:
            report += "## Expansion ratio sweeps\n\n"
            report += "| Model | Mean r (largest eta) | Mean r (smallest eta) | Growth | Trend | Discarded |\n"
            report += "|-------|------|------|--------|-------|-----------|\n"
            for name, s in sorted(self.analysis_results["sweeps"].items()):
                report += (f"| {name} | {s['mean_r'][0]:.4g} | {s['mean_r'][-1]:.4g} | "
                           f"{s['growth']:.4g} | {s['trend']:.3f} | {s['instability_count']} |\n")
            report += "\n"

        for section in ("table1", "compression", "gan_vs_diffusion", "denoise",
                        "train_vs_untrained", "dropout_control"):
            if section in self.analysis_results:
                report += f"## {section}\n\n"
                report += "| Field | Value |\n|-------|-------|\n"
                for key, value in sorted(self.analysis_results[section].items()):
                    report += f"| {key} | {value} |\n"
                report += "\n"

        if "bijection" in self.analysis_results:
            b = self.analysis_results["bijection"]
            report += f"## Bit-interleave boundaries (B = {b['precision']})\n\n| k | ratio |\n|---|-------|\n"
            for k, r in zip(b["k"], b["ratio"]):
                report += f"| {k} | {r:.6g} |\n"
            report += "\n"

        report += "## Checks\n\n"
        for name, passed in sorted(self.checks.items()):
            report += f"- {name}: {'pass' if passed else 'fail'}\n"

        with open(self._path("report.md"), "w") as f:
            f.write(report)

    def write_manifest(self) -> Dict:
        manifest = {
            "experiment": self.config.experiment,
            "summary": self._path("summary.json"),
            "report": self._path("report.md"),
            "csv": list(self.artifacts["csv"]),
            "svg": list(self.artifacts["svg"]),
            "checkpoints": list(self.artifacts["checkpoints"]),
        }
        path = self._path("manifest.json")
        manifest["manifest"] = path
        with open(path, "w") as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
            f.write("\n")
        return manifest


def run(config: ExperimentConfig) -> Dict:
    """Run one experiment config and return its artifact manifest."""
    return ExperimentRunner(config).run_analysis()
