"""
Result files: sweep CSVs and SVG plots of mean-r curves over η.
"""
import logging
import math
import os
from typing import Dict, List, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
from matplotlib.ticker import NullFormatter  # noqa: E402

from .errors import ContractError  # noqa: E402
from .metrics import SweepResult  # noqa: E402

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["eta", "noise_seed", "mean_r", "std_r", "n_discarded"]
FLOAT_FORMAT = "%.17g"

# stable SVG text: no timestamps, fixed element ids, real <text> nodes
SVG_RC = {
    "svg.fonttype": "none",
    "svg.hashsalt": "approx-discontinuity",
    "axes.unicode_minus": False,
}

Curve = Sequence[Tuple[float, float]]


def emit_sweep_csv(result: SweepResult, path) -> str:
    """One row per (η, noise seed), descending η then ascending seed, 17 significant digits."""
    if result.mean_r.size == 0 or len(result.etas) == 0 or len(result.noise_seeds) == 0:
        raise ContractError("cannot write an empty sweep result")
    path = os.fspath(path)
    result.to_frame().to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.debug("Wrote sweep CSV %s", path)
    return path


def read_sweep_csv(path) -> pd.DataFrame:
    frame = pd.read_csv(path, float_precision="round_trip")
    missing = [c for c in SWEEP_COLUMNS if c not in frame.columns]
    if missing:
        raise ContractError(f"{path}: not a sweep CSV, missing columns {missing}")
    return frame


def curve_from_frame(frame: pd.DataFrame) -> List[Tuple[float, float]]:
    """Mean over noise seeds of mean_r per η, η descending."""
    grouped = frame.groupby("eta", sort=True)["mean_r"].mean()
    return [(float(e), float(m)) for e, m in grouped.iloc[::-1].items()]


def emit_boundary_csv(frame: pd.DataFrame, path) -> str:
    path = os.fspath(path)
    frame[["k", "ratio"]].to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def decade_label(exponent: int) -> str:
    return f"1e{exponent}"


def _decades(values: np.ndarray) -> List[int]:
    low = math.floor(math.log10(values.min()) + 1e-9)
    high = max(low + 1, math.ceil(math.log10(values.max()) - 1e-9))
    return list(range(low, high + 1))


def emit_plot_svg(curves: Dict[str, Curve], path, log_y: bool = False,
                  title: str = "Expansion ratio vs perturbation size",
                  xlabel: str = "eta", ylabel: str = "mean r") -> str:
    """
    Plot named (η, mean r) series on a log10 η axis running from large η on the left
    to small η on the right. Line i carries the SVG id `series-i`.
    """
    if not curves:
        raise ContractError("need at least one series to plot")
    for name, points in curves.items():
        if len(points) < 2:
            raise ContractError(f"series {name!r} needs at least 2 points")
        if any(not (e > 0) for e, _ in points):
            raise ContractError(f"series {name!r} has non-positive eta")

    path = os.fspath(path)
    all_etas = np.array([e for points in curves.values() for e, _ in points], dtype=np.float64)
    decades = _decades(all_etas)

    with plt.rc_context(SVG_RC):
        fig = plt.figure(figsize=(8, 5))
        ax = fig.add_subplot(1, 1, 1)
        for i, (name, points) in enumerate(curves.items()):
            etas = [e for e, _ in points]
            means = [m for _, m in points]
            (line,) = ax.plot(etas, means, marker=None, linewidth=1.5, label=name)
            line.set_gid(f"series-{i}")
        ax.set_xscale("log")
        if log_y:
            ax.set_yscale("log")
        ax.set_xticks([10.0 ** d for d in decades])
        ax.set_xticklabels([decade_label(d) for d in decades])
        ax.xaxis.set_minor_formatter(NullFormatter())
        ax.set_xlim(10.0 ** decades[-1], 10.0 ** decades[0])
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    logger.debug("Wrote plot %s", path)
    return path
