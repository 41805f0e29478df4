"""
Dataset loading, normalization, deduplication and synthesis.

Readers cover the IDX files of MNIST/FashionMNIST and the binary CIFAR-10/100 batches.
Pixels are scaled by 1/255 into [0, 1] and images are flattened row-major; raw bytes are
kept alongside so duplicate detection compares the original pixels exactly.
"""
import gzip
import json
import logging
import os
import struct
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, ConsistencyError, ContractError, FormatError, LengthError

logger = logging.getLogger(__name__)

IDX_LABEL_MAGIC = 0x00000801
IDX_IMAGE_MAGIC = 0x00000803

CIFAR_PIXELS = 3072
CIFAR_LABEL_BYTES = {"cifar10": 1, "cifar100": 2}
CIFAR_CLASSES = {"cifar10": 10, "cifar100": 100}


@dataclass(frozen=True)
class Dataset:
    """N flattened inputs in [0, 1] with integer labels below `class_count`."""

    inputs: np.ndarray
    labels: np.ndarray
    name: str
    class_count: int
    raw: Optional[np.ndarray] = field(default=None, repr=False)
    image_shape: Optional[tuple] = None

    def __post_init__(self):
        inputs = np.array(self.inputs, dtype=np.float64)
        labels = np.array(self.labels, dtype=np.int64).reshape(-1)
        if inputs.ndim != 2 or inputs.shape[0] < 1 or inputs.shape[1] < 1:
            raise ContractError(f"inputs must be a non-empty N x n matrix, got {inputs.shape}")
        if labels.shape[0] != inputs.shape[0]:
            raise ConsistencyError(f"{inputs.shape[0]} inputs but {labels.shape[0]} labels")
        if not np.all((inputs >= 0.0) & (inputs <= 1.0)):
            raise ContractError(f"{self.name}: input values outside [0, 1]")
        if self.class_count < 1 or np.any(labels < 0) or np.any(labels >= self.class_count):
            raise ContractError(f"{self.name}: labels must lie in [0, {self.class_count})")
        inputs.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "labels", labels)
        if self.raw is not None:
            raw = np.array(self.raw)
            if raw.shape[0] != inputs.shape[0]:
                raise ConsistencyError("raw pixel rows do not match inputs")
            raw.setflags(write=False)
            object.__setattr__(self, "raw", raw)

    def __len__(self):
        return self.inputs.shape[0]

    @property
    def input_dim(self) -> int:
        return self.inputs.shape[1]

    def subset(self, indices: Sequence[int], name: Optional[str] = None) -> "Dataset":
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(
            self.inputs[idx],
            self.labels[idx],
            name or self.name,
            self.class_count,
            None if self.raw is None else self.raw[idx],
            self.image_shape,
        )

    def permute(self, seed: int) -> "Dataset":
        """Seeded shuffle of the rows."""
        order = np.random.default_rng(seed).permutation(len(self))
        return self.subset(order)

    def crop_features(self, width: int) -> "Dataset":
        """Keep the first `width` input features."""
        if not 1 <= width <= self.input_dim:
            raise ContractError(f"cannot crop {self.input_dim} features to {width}")
        return Dataset(
            self.inputs[:, :width],
            self.labels,
            f"{self.name}[:{width}]",
            self.class_count,
            None if self.raw is None else self.raw.reshape(len(self), -1)[:, :width],
            None,
        )


def combine(first: Dataset, second: Dataset, name: Optional[str] = None) -> Dataset:
    """Row-wise union of two splits of the same dataset."""
    if first.input_dim != second.input_dim:
        raise ConsistencyError("cannot combine datasets of different input width")
    raw = None
    if first.raw is not None and second.raw is not None:
        raw = np.concatenate(
            [first.raw.reshape(len(first), -1), second.raw.reshape(len(second), -1)]
        )
    return Dataset(
        np.concatenate([first.inputs, second.inputs]),
        np.concatenate([first.labels, second.labels]),
        name or f"{first.name}+{second.name}",
        max(first.class_count, second.class_count),
        raw,
        first.image_shape if first.image_shape == second.image_shape else None,
    )


# --- IDX ---

def _open(path):
    path = os.fspath(path)
    if path.endswith(".gz"):
        return gzip.open(path, "rb")
    return open(path, "rb")


def _read_idx(path, expected_magic: int):
    with _open(path) as f:
        data = f.read()
    if len(data) < 4:
        raise LengthError(f"{path}: too short for an IDX header")
    (magic,) = struct.unpack(">I", data[:4])
    if magic != expected_magic:
        raise FormatError(
            f"{path}: magic 0x{magic:08x}, expected 0x{expected_magic:08x}"
        )
    ndim = magic & 0xFF
    header = 4 + 4 * ndim
    if len(data) < header:
        raise LengthError(f"{path}: truncated IDX header")
    dims = struct.unpack(">" + "I" * ndim, data[4:header])
    count = int(np.prod(dims, dtype=np.int64))
    if len(data) - header < count:
        raise LengthError(f"{path}: expected {count} data bytes, found {len(data) - header}")
    body = np.frombuffer(data, dtype=np.uint8, count=count, offset=header)
    return dims, body


def load_idx(image_path, label_path, name: Optional[str] = None) -> Dataset:
    """Read an IDX image/label file pair (optionally gzipped) into a Dataset."""
    logger.info("Loading IDX images from %s", image_path)
    image_dims, pixels = _read_idx(image_path, IDX_IMAGE_MAGIC)
    label_dims, labels = _read_idx(label_path, IDX_LABEL_MAGIC)
    if image_dims[0] != label_dims[0]:
        raise ConsistencyError(f"{image_dims[0]} images but {label_dims[0]} labels")
    raw = pixels.reshape(image_dims[0], -1)
    class_count = max(10, int(labels.max()) + 1) if labels.size else 10
    return Dataset(
        raw / 255.0,
        labels.astype(np.int64),
        name or os.path.basename(os.fspath(image_path)),
        class_count,
        raw,
        tuple(image_dims[1:]),
    )


def write_idx(dataset: Dataset, image_path, label_path, image_shape: Optional[tuple] = None):
    """Write a Dataset back in IDX format; inputs are re-quantized to bytes."""
    raw = dataset.raw
    if raw is None:
        raw = np.rint(dataset.inputs * 255.0).astype(np.uint8)
    raw = np.asarray(raw, dtype=np.uint8).reshape(len(dataset), -1)
    shape = tuple(image_shape or dataset.image_shape or (1, dataset.input_dim))
    if int(np.prod(shape)) != raw.shape[1]:
        raise ConsistencyError(f"image shape {shape} does not hold {raw.shape[1]} pixels")
    dims = (len(dataset),) + shape
    with open(image_path, "wb") as f:
        f.write(struct.pack(">I", 0x00000800 | len(dims)))
        f.write(struct.pack(">" + "I" * len(dims), *dims))
        f.write(raw.tobytes())
    with open(label_path, "wb") as f:
        f.write(struct.pack(">II", IDX_LABEL_MAGIC, len(dataset)))
        f.write(dataset.labels.astype(np.uint8).tobytes())


# --- CIFAR ---

def load_cifar(paths: Sequence, variant: str = "cifar10", name: Optional[str] = None) -> Dataset:
    """Read CIFAR binary batches; cifar100 records carry (coarse, fine) and use fine."""
    if variant not in CIFAR_LABEL_BYTES:
        raise ConfigError(f"unknown CIFAR variant {variant!r}")
    if isinstance(paths, (str, os.PathLike)):
        paths = [paths]
    label_bytes = CIFAR_LABEL_BYTES[variant]
    record = label_bytes + CIFAR_PIXELS
    labels, pixels = [], []
    for path in paths:
        logger.info("Loading %s batch %s", variant, path)
        with _open(path) as f:
            data = f.read()
        if len(data) == 0 or len(data) % record:
            raise LengthError(f"{path}: {len(data)} bytes is not a multiple of {record}")
        rows = np.frombuffer(data, dtype=np.uint8).reshape(-1, record)
        labels.append(rows[:, label_bytes - 1].astype(np.int64))
        pixels.append(rows[:, label_bytes:])
    raw = np.concatenate(pixels)
    return Dataset(
        raw / 255.0,
        np.concatenate(labels),
        name or variant,
        CIFAR_CLASSES[variant],
        raw,
        (3, 32, 32),
    )


# --- transforms ---

def deduplicate(d: Dataset) -> Dataset:
    """Keep the first occurrence of every exactly-equal input row, in order."""
    rows = d.raw.reshape(len(d), -1) if d.raw is not None else d.inputs
    rows = np.ascontiguousarray(rows)
    seen = set()
    keep = []
    for i, row in enumerate(rows):
        key = row.tobytes()
        if key not in seen:
            seen.add(key)
            keep.append(i)
    if len(keep) == len(d):
        return d
    logger.info("Removed %d duplicate inputs from %s", len(d) - len(keep), d.name)
    return d.subset(keep)


def synthesize(seed: int, n_samples: int, input_dim: int, class_count: int,
               name: Optional[str] = None) -> Dataset:
    """
    Deterministic uniform inputs labelled by the argmax of `class_count` fixed random
    linear projections of the centred input, which a small MLP can fit.
    """
    if min(n_samples, input_dim, class_count) < 1:
        raise ContractError("synthesize needs N, n, C >= 1")
    rng = np.random.default_rng(seed)
    projections = rng.standard_normal((input_dim, class_count))
    inputs = rng.random((n_samples, input_dim))
    labels = np.argmax((inputs - 0.5) @ projections, axis=1)
    return Dataset(inputs, labels, name or f"synthetic-{seed}", class_count)


def load_json_data(file_path):
    """Load a JSON document, raising ConfigError when it is missing or malformed."""
    if not os.path.exists(file_path):
        raise FileNotFoundError(f"File not found - {file_path}")
    try:
        with open(file_path, "r") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Error decoding JSON from {file_path}: {e}") from e
