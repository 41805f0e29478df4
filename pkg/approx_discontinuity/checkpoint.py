"""
Binary checkpoints of a ModelSpec plus its parameters.

Layout (little-endian):
    b"ADPR" | u32 version | payload | u32 CRC32(payload)
    payload = u32 spec length | spec JSON (UTF-8) | u64 parameter count | float64 parameters

Parameters are written in layer order W0, b0, W1, b1, ... with each weight matrix
row-major.
"""
import json
import logging
import os
import struct
import zlib

import numpy as np

from .errors import ChecksumError, ConfigError, FormatError, LengthError, UnsupportedVersionError
from .models import Model, ModelSpec

logger = logging.getLogger(__name__)

MAGIC = b"ADPR"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sI")
_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")


def _payload(model: Model) -> bytes:
    spec = json.dumps(model.spec.to_dict(), sort_keys=True).encode("utf-8")
    flat = np.concatenate([p.ravel() for p in model.parameters()]).astype("<f8")
    return _U32.pack(len(spec)) + spec + _U64.pack(flat.size) + flat.tobytes()


def save_checkpoint(model: Model, path) -> str:
    payload = _payload(model)
    blob = _HEADER.pack(MAGIC, FORMAT_VERSION) + payload + _U32.pack(zlib.crc32(payload))
    path = os.fspath(path)
    with open(path, "wb") as f:
        f.write(blob)
    logger.debug("Wrote checkpoint %s (%d parameters)", path, model.spec.parameter_count)
    return path


def load_checkpoint(path) -> Model:
    """Read a checkpoint; any malformed file raises a FormatError subclass."""
    with open(path, "rb") as f:
        blob = f.read()
    return decode_checkpoint(blob, source=os.fspath(path))


def decode_checkpoint(blob: bytes, source: str = "<bytes>") -> Model:
    if len(blob) < _HEADER.size + _U32.size:
        raise LengthError(f"{source}: too short for a checkpoint")
    magic, version = _HEADER.unpack_from(blob, 0)
    if magic != MAGIC:
        raise FormatError(f"{source}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(f"{source}: checkpoint version {version} (supported: {FORMAT_VERSION})")
    payload = blob[_HEADER.size:-_U32.size]
    (stored,) = _U32.unpack_from(blob, len(blob) - _U32.size)
    if zlib.crc32(payload) != stored:
        raise ChecksumError(f"{source}: checksum mismatch")

    if len(payload) < _U32.size:
        raise LengthError(f"{source}: truncated spec header")
    (spec_len,) = _U32.unpack_from(payload, 0)
    offset = _U32.size + spec_len
    if len(payload) < offset + _U64.size:
        raise LengthError(f"{source}: truncated spec")
    try:
        spec = ModelSpec.from_dict(json.loads(payload[_U32.size:offset].decode("utf-8")))
    except (UnicodeDecodeError, json.JSONDecodeError, ConfigError) as e:
        raise FormatError(f"{source}: unreadable model spec: {e}") from e
    (count,) = _U64.unpack_from(payload, offset)
    offset += _U64.size
    if count != spec.parameter_count:
        raise FormatError(f"{source}: {count} parameters stored, spec needs {spec.parameter_count}")
    if len(payload) - offset != 8 * count:
        raise LengthError(f"{source}: expected {8 * count} parameter bytes, found {len(payload) - offset}")
    flat = np.frombuffer(payload, dtype="<f8", count=count, offset=offset).astype(np.float64)

    params = []
    pos = 0
    for fan_in, fan_out in spec.layer_shapes:
        params.append(flat[pos:pos + fan_in * fan_out].reshape(fan_in, fan_out))
        pos += fan_in * fan_out
        params.append(flat[pos:pos + fan_out])
        pos += fan_out
    return Model(spec, params[0::2], params[1::2])
