"""Bit-interleave bijection and its expansion at dyadic boundaries."""
import random
from fractions import Fraction

import pytest

from approx_discontinuity.bijection import (
    BitFraction,
    boundary_expansion,
    boundary_pair,
    boundary_sweep,
    deinterleave,
    deinterleave_code,
    interleave,
    interleave_codes,
    is_bijective,
    shared_prefix_bits,
)
from approx_discontinuity.errors import ContractError


class TestBitFraction:
    def test_from_string(self):
        f = BitFraction.from_string("0.011")
        assert f.precision == 3
        assert f.bits == (0, 1, 1)
        assert f.exact == Fraction(3, 8)
        assert str(f) == "0.011"

    def test_value(self):
        assert BitFraction.from_bits([1, 0, 1, 1]).value == 0.6875

    def test_code_must_fit(self):
        with pytest.raises(ContractError):
            BitFraction(8, 3)
        with pytest.raises(ContractError):
            BitFraction.from_bits([1, 2])


class TestInterleave:
    def test_single_bit_example(self):
        z = interleave(BitFraction.from_string("0.1"), BitFraction.from_string("0.0"))
        assert str(z) == "0.10"
        assert z.value == 0.5

    def test_bit_positions(self):
        z = interleave(BitFraction.from_string("0.101"), BitFraction.from_string("0.011"))
        assert str(z) == "0.100111"

    def test_zero_maps_to_zero(self):
        z = interleave(BitFraction(0, 16), BitFraction(0, 16))
        assert z.code == 0 and z.precision == 32

    def test_deinterleave_example(self):
        x, y = deinterleave(BitFraction.from_string("0.10"))
        assert str(x) == "0.1" and str(y) == "0.0"

    @pytest.mark.parametrize("precision", [32, 40])
    def test_deinterleave_inverts_interleave(self, precision):
        rng = random.Random(precision)
        for _ in range(10000):
            x = BitFraction(rng.getrandbits(precision), precision)
            y = BitFraction(rng.getrandbits(precision), precision)
            assert deinterleave(interleave(x, y)) == (x, y)

    def test_interleave_inverts_deinterleave(self):
        rng = random.Random(1)
        for _ in range(10000):
            z = BitFraction(rng.getrandbits(64), 64)
            assert interleave(*deinterleave(z)) == z

    def test_code_helpers_agree_with_bit_loop(self):
        rng = random.Random(2)
        for _ in range(200):
            x, y = rng.getrandbits(20), rng.getrandbits(20)
            z = interleave_codes(x, y, 20)
            expected = 0
            for p in range(20):
                expected |= ((x >> p) & 1) << (2 * p + 1)
                expected |= ((y >> p) & 1) << (2 * p)
            assert z == expected
            assert deinterleave_code(z, 20) == (x, y)

    def test_precision_mismatch(self):
        with pytest.raises(ContractError):
            interleave(BitFraction(0, 4), BitFraction(0, 5))

    def test_odd_precision(self):
        with pytest.raises(ContractError):
            deinterleave(BitFraction(0, 7))

    def test_exhaustive_bijection(self):
        assert is_bijective(8)
        assert is_bijective(1)
        with pytest.raises(ContractError):
            is_bijective(9)


class TestBoundaryExpansion:
    def test_boundary_pair(self):
        x, x_prime = boundary_pair(3, 8)
        assert str(x) == "0.01110000"
        assert str(x_prime) == "0.10000000"
        assert x_prime.exact - x.exact == Fraction(1, 16)

    def test_k2_ratio(self):
        assert boundary_expansion(2, 8) == pytest.approx(2.75)
        assert boundary_expansion(2, 8) >= 2.0

    def test_strictly_increasing_at_precision_8(self):
        ratios = [boundary_expansion(k, 8) for k in range(2, 8)]
        assert all(b > a for a, b in zip(ratios, ratios[1:]))

    def test_geometric_growth_at_precision_32(self):
        for k in range(2, 29):
            assert boundary_expansion(k + 2, 32) >= 2 * boundary_expansion(k, 32)

    def test_closed_form(self):
        for k in range(2, 20):
            expected = 2 ** (k + 1) * (Fraction(1, 2) - (1 - Fraction(1, 4 ** k)) / 6)
            assert boundary_expansion(k, 32) == pytest.approx(float(expected), rel=1e-12)

    def test_independent_of_y(self):
        y = BitFraction.from_string("0." + "10" * 16)
        assert boundary_expansion(5, 32, y) == boundary_expansion(5, 32)

    @pytest.mark.parametrize("k,precision", [(1, 8), (8, 8), (9, 8)])
    def test_k_out_of_range(self, k, precision):
        with pytest.raises(ContractError):
            boundary_expansion(k, precision)

    def test_sweep_frame(self):
        frame = boundary_sweep(10)
        assert list(frame.columns) == ["k", "distance", "ratio"]
        assert frame["k"].tolist() == list(range(2, 10))
        assert frame["ratio"].is_monotonic_increasing


class TestContinuityAwayFromBoundaries:
    def test_shared_prefix_is_preserved(self):
        rng = random.Random(3)
        precision = 24
        for _ in range(2000):
            k = rng.randrange(1, precision)
            prefix = rng.getrandbits(k)
            tail_bits = precision - k
            a = BitFraction((prefix << tail_bits) | rng.getrandbits(tail_bits), precision)
            b = BitFraction((prefix << tail_bits) | rng.getrandbits(tail_bits), precision)
            y = BitFraction(rng.getrandbits(precision), precision)
            assert shared_prefix_bits(a, b) >= k
            assert shared_prefix_bits(interleave(a, y), interleave(b, y)) >= 2 * k - 1

    def test_shared_prefix_bits(self):
        a = BitFraction.from_string("0.1100")
        b = BitFraction.from_string("0.1110")
        assert shared_prefix_bits(a, b) == 2
        assert shared_prefix_bits(a, a) == 4
