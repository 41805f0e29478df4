import struct

import numpy as np
import pytest

from approx_discontinuity.data_utils import synthesize
from approx_discontinuity.models import Model, ModelSpec


def write_idx_pair(directory, images: np.ndarray, labels: np.ndarray, prefix: str = "data"):
    """Write uint8 images (N, rows, cols) and labels as an IDX file pair."""
    image_path = directory / f"{prefix}-images-idx3-ubyte"
    label_path = directory / f"{prefix}-labels-idx1-ubyte"
    n, rows, cols = images.shape
    image_path.write_bytes(struct.pack(">IIII", 0x00000803, n, rows, cols)
                           + images.astype(np.uint8).tobytes())
    label_path.write_bytes(struct.pack(">II", 0x00000801, n) + labels.astype(np.uint8).tobytes())
    return image_path, label_path


def linear_model(weights, bias=None) -> Model:
    """Identity-activation model computing x @ W + b."""
    w = np.asarray(weights, dtype=np.float64)
    b = np.zeros(w.shape[1]) if bias is None else np.asarray(bias, dtype=np.float64)
    spec = ModelSpec(w.shape[0], (), w.shape[1], "identity", "identity")
    return Model(spec, [w], [b])


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def tiny_dataset():
    return synthesize(3, 120, 6, 3)


@pytest.fixture
def idx_files(tmp_path):
    rng = np.random.default_rng(0)
    images = rng.integers(0, 256, size=(5, 4, 3), dtype=np.uint8)
    labels = np.array([0, 3, 9, 3, 1], dtype=np.uint8)
    image_path, label_path = write_idx_pair(tmp_path, images, labels)
    return image_path, label_path, images, labels
