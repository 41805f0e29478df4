"""Checkpoint files: exact round trips and rejection of damaged files."""
import json
import struct
import zlib

import numpy as np
import pytest

from approx_discontinuity.checkpoint import (
    FORMAT_VERSION,
    MAGIC,
    decode_checkpoint,
    load_checkpoint,
    save_checkpoint,
)
from approx_discontinuity.errors import (
    ChecksumError,
    FormatError,
    LengthError,
    UnsupportedVersionError,
)
from approx_discontinuity.models import ModelSpec, build_mlp, named_spec


def _wrap(payload: bytes, version: int = FORMAT_VERSION) -> bytes:
    return struct.pack("<4sI", MAGIC, version) + payload + struct.pack("<I", zlib.crc32(payload))


@pytest.fixture
def saved(tmp_path):
    spec = ModelSpec(5, (7, 3), 2, "tanh", "softmax", dropout_rate=(0.1, 0.2), init_seed=9)
    model = build_mlp(spec)
    path = save_checkpoint(model, tmp_path / "model.adpr")
    return model, path


class TestRoundTrip:
    def test_parameters_and_outputs_are_identical(self, saved, rng):
        model, path = saved
        loaded = load_checkpoint(path)
        assert loaded.spec == model.spec
        for p, q in zip(model.parameters(), loaded.parameters()):
            np.testing.assert_array_equal(p, q)
        x = rng.random((10, 5))
        np.testing.assert_array_equal(model.predict(x), loaded.predict(x))

    def test_generator_flags_survive(self, tmp_path):
        model = build_mlp(named_spec("generator", 4, 6, width_multiplier=0.02))
        loaded = load_checkpoint(save_checkpoint(model, tmp_path / "g.adpr"))
        assert loaded.spec.rescale_output

    def test_header(self, saved):
        _, path = saved
        with open(path, "rb") as f:
            head = f.read(8)
        assert head[:4] == b"ADPR"
        assert struct.unpack("<I", head[4:])[0] == 1


class TestDamagedFiles:
    def test_flipped_payload_byte(self, saved):
        _, path = saved
        blob = bytearray(open(path, "rb").read())
        blob[40] ^= 0xFF
        with pytest.raises(ChecksumError):
            decode_checkpoint(bytes(blob))

    def test_flipped_parameter_byte(self, saved):
        _, path = saved
        blob = bytearray(open(path, "rb").read())
        blob[-10] ^= 0x01
        with pytest.raises(ChecksumError):
            decode_checkpoint(bytes(blob))

    def test_future_version(self, saved):
        _, path = saved
        blob = bytearray(open(path, "rb").read())
        blob[4:8] = struct.pack("<I", 99)
        with pytest.raises(UnsupportedVersionError):
            decode_checkpoint(bytes(blob))

    def test_bad_magic(self, saved):
        _, path = saved
        blob = b"XXXX" + open(path, "rb").read()[4:]
        with pytest.raises(FormatError):
            decode_checkpoint(blob)

    @pytest.mark.parametrize("keep", [0, 3, 11, 100])
    def test_truncated(self, saved, keep):
        _, path = saved
        blob = open(path, "rb").read()[:keep]
        with pytest.raises(FormatError):
            decode_checkpoint(blob)

    def test_short_file_is_a_length_error(self):
        with pytest.raises(LengthError):
            decode_checkpoint(b"ADPR")

    def test_parameter_count_disagrees_with_spec(self):
        spec = json.dumps(ModelSpec(2, (), 1).to_dict(), sort_keys=True).encode()
        params = np.zeros(5, dtype="<f8")
        payload = struct.pack("<I", len(spec)) + spec + struct.pack("<Q", 5) + params.tobytes()
        with pytest.raises(FormatError):
            decode_checkpoint(_wrap(payload))

    def test_missing_parameter_bytes(self):
        spec = json.dumps(ModelSpec(2, (), 1).to_dict(), sort_keys=True).encode()
        payload = struct.pack("<I", len(spec)) + spec + struct.pack("<Q", 3) + np.zeros(2).tobytes()
        with pytest.raises(LengthError):
            decode_checkpoint(_wrap(payload))

    def test_unreadable_spec(self):
        payload = struct.pack("<I", 5) + b"{oops" + struct.pack("<Q", 0)
        with pytest.raises(FormatError):
            decode_checkpoint(_wrap(payload))

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_checkpoint(tmp_path / "absent.adpr")
