"""
Command-line surface: train, dm, sweep, demo, run and plot subcommands.

Each command prints one JSON line with its results on stdout. Failures print
``{"error": ..., "message": ...}`` on stderr and exit nonzero.
"""
import argparse
import dataclasses
import json
import logging
import os
import sys
from typing import List, Optional

from .checkpoint import load_checkpoint
from .config import ExperimentConfig, apply_overrides, load_config
from .errors import ContractError, DiscontinuityError, UsageError
from .experiments import ExperimentRunner, dm_dataset, run
from .metrics import min_pairwise_output_distance
from .models import build_mlp, train_autoencoder, train_diffusion
from .plotting import curve_from_frame, emit_plot_svg, read_sweep_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2
EXIT_IO = 3


class ArgumentParser(argparse.ArgumentParser):
    """Raises UsageError instead of printing usage and exiting."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_config_options(p: argparse.ArgumentParser, required: bool = True):
    p.add_argument("--config", required=required, help="JSON experiment config")
    p.add_argument("--eta-min", type=float, help="Smallest eta of the sweep grid")
    p.add_argument("--eta-max", type=float, help="Largest eta of the sweep grid")
    p.add_argument("--inputs", type=int, help="Number of sweep inputs")
    p.add_argument("--seed", type=int, help="Global seed")
    p.add_argument("--width-mult", type=float, help="Hidden width multiplier")
    p.add_argument("--out", help="Output directory")
    p.add_argument("--threads", type=int, help="Worker threads (1 = bitwise deterministic)")


def build_parser() -> argparse.ArgumentParser:
    parser = ArgumentParser(description="Approximate discontinuity experiments")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    subparsers = parser.add_subparsers(dest="command")

    p = subparsers.add_parser("train", help="Train a model and write its checkpoint")
    _add_config_options(p)
    p.add_argument("--model", choices=("classifier", "autoencoder", "generator", "denoiser"),
                   default="classifier")

    p = subparsers.add_parser("dm", help="Minimum pairwise output distance d_m")
    _add_config_options(p)
    p.add_argument("--checkpoint", help="Classifier checkpoint (trained from the config if omitted)")

    p = subparsers.add_parser("sweep", help="Expansion-ratio sweep over eta")
    _add_config_options(p)
    p.add_argument("--checkpoint", help="Classifier checkpoint (trained from the config if omitted)")
    p.add_argument("--dropout", choices=("off", "shared", "independent"), help="Dropout at measurement")

    p = subparsers.add_parser("demo", help="Bit-interleave bijection boundary expansion")
    _add_config_options(p, required=False)
    p.add_argument("--precision", type=int, help="Bits per coordinate")

    p = subparsers.add_parser("run", help="Run a full experiment config")
    _add_config_options(p)

    p = subparsers.add_parser("plot", help="Rebuild an SVG plot from sweep CSVs")
    p.add_argument("--csv", nargs="+", required=True, help="Sweep CSV files")
    p.add_argument("--out", required=True, help="SVG path")
    p.add_argument("--log-y", action="store_true", help="Logarithmic y axis")
    p.add_argument("--title", default="Expansion ratio vs perturbation size")
    return parser


def _config(args) -> ExperimentConfig:
    if getattr(args, "config", None):
        cfg = load_config(args.config)
    else:
        cfg = ExperimentConfig(experiment="bijection_demo")
    return apply_overrides(cfg, eta_min=args.eta_min, eta_max=args.eta_max, inputs=args.inputs,
                           seed=args.seed, width_mult=args.width_mult, out=args.out,
                           threads=args.threads)


def _classifier(runner: ExperimentRunner, checkpoint: Optional[str]):
    if checkpoint:
        return load_checkpoint(checkpoint)
    return runner.train_classifier()


def cmd_train(args) -> dict:
    runner = ExperimentRunner(_config(args))
    cfg = runner.config
    train, _ = runner.splits()
    if args.model == "classifier":
        runner.save_model(runner.train_classifier(), "classifier")
    elif args.model == "autoencoder":
        family = cfg.autoencoder.families[0]
        spec = runner.autoencoder_spec(family, train.input_dim)
        model, _ = train_autoencoder(build_mlp(spec), train, cfg.train, cfg.autoencoder.noise_std)
        runner.save_model(model, family)
    elif args.model == "generator":
        runner.train_gan()
    else:
        spec = cfg.model_spec("denoiser", train.input_dim)
        model, _ = train_diffusion(build_mlp(spec), train, cfg.train, cfg.diffusion.schedule())
        runner.save_model(model, "denoiser")
    return {"checkpoints": runner.artifacts["checkpoints"],
            "training": runner.convert_to_serializable(runner.analysis_results.get("training", {}))}


def cmd_dm(args) -> dict:
    runner = ExperimentRunner(_config(args))
    model = _classifier(runner, args.checkpoint)
    data, removed = dm_dataset(runner.config, *runner.splits())
    result = min_pairwise_output_distance(model, data, threads=runner.config.threads)
    return {"d_m": result.d_m, "pair": list(result.pair), "n_inputs": result.count,
            "duplicates_removed": removed}


def cmd_sweep(args) -> dict:
    runner = ExperimentRunner(_config(args))
    model = _classifier(runner, args.checkpoint)
    result = runner.classifier_sweep(model, "classifier", args.dropout)
    svg = runner.plot("sweep_classifier", "Classifier expansion ratio", log_y=True)
    return {"csv": runner.artifacts["csv"], "svg": svg,
            "summary": runner.convert_to_serializable(result.summary())}


def cmd_demo(args) -> dict:
    cfg = _config(args)
    if args.precision is not None:
        cfg = dataclasses.replace(
            cfg, bijection=dataclasses.replace(cfg.bijection, precision=args.precision))
    runner = ExperimentRunner(cfg)
    runner.run_bijection_demo()
    return {"csv": runner.artifacts["csv"], "svg": runner.artifacts["svg"], "checks": runner.checks}


def cmd_run(args) -> dict:
    return run(_config(args))


def cmd_plot(args) -> dict:
    curves = {}
    for path in args.csv:
        name = os.path.splitext(os.path.basename(path))[0]
        if name in curves:
            raise ContractError(f"duplicate series name {name!r}")
        curves[name] = curve_from_frame(read_sweep_csv(path))
    return {"svg": emit_plot_svg(curves, args.out, log_y=args.log_y, title=args.title)}


COMMANDS = {
    "train": cmd_train,
    "dm": cmd_dm,
    "sweep": cmd_sweep,
    "demo": cmd_demo,
    "run": cmd_run,
    "plot": cmd_plot,
}


def _fail(exc: BaseException, code: int) -> int:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        return _fail(e, EXIT_USAGE)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    if args.command is None:
        parser.print_help()
        return EXIT_USAGE
    try:
        result = COMMANDS[args.command](args)
    except DiscontinuityError as e:
        return _fail(e, EXIT_FAILURE)
    except OSError as e:
        return _fail(e, EXIT_IO)
    print(json.dumps(result, sort_keys=True, default=str))
    return EXIT_OK
