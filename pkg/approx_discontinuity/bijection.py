"""
Fixed-precision bijection between the unit square and the unit interval by bit
interleaving, and the expansion it shows across dyadic boundaries.

A B-bit fraction is held as an integer code with value code / 2**B, so bit k of the
fraction (weight 2**-(k+1)) is bit B-1-k of the code. Interleaving x and y puts x's bits
at the even fraction positions, which on codes is the 2-D Morton code
(spread(x) << 1) | spread(y).
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np
import pandas as pd

from .errors import ContractError

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 32
MAX_FLOAT_PRECISION = 52
EXHAUSTIVE_LIMIT = 8


@dataclass(frozen=True)
class BitFraction:
    """A fraction in [0, 1) with exactly `precision` binary digits."""

    code: int
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise ContractError(f"precision must be >= 1, got {self.precision}")
        if not 0 <= self.code < (1 << self.precision):
            raise ContractError(f"code {self.code} does not fit {self.precision} bits")

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "BitFraction":
        code = 0
        for b in bits:
            if b not in (0, 1):
                raise ContractError(f"bits must be 0 or 1, got {b}")
            code = (code << 1) | int(b)
        return cls(code, len(bits))

    @classmethod
    def from_string(cls, digits: str) -> "BitFraction":
        """'0.011' or '011' style binary digits after the point."""
        digits = digits[2:] if digits.startswith("0.") else digits
        return cls.from_bits([int(c) for c in digits])

    @property
    def bits(self) -> Tuple[int, ...]:
        return tuple((self.code >> (self.precision - 1 - k)) & 1 for k in range(self.precision))

    @property
    def exact(self) -> Fraction:
        return Fraction(self.code, 1 << self.precision)

    @property
    def value(self) -> float:
        """Float value; exact for precision <= 52."""
        return float(self.exact)

    def __str__(self):
        return "0." + "".join(str(b) for b in self.bits)


# --- integer helpers ---

def _part1by1_64(n):
    # spread the low 32 bits into the even bit positions of 64
    n &= 0x00000000FFFFFFFF
    n = (n | (n << 16)) & 0x0000FFFF0000FFFF
    n = (n | (n << 8)) & 0x00FF00FF00FF00FF
    n = (n | (n << 4)) & 0x0F0F0F0F0F0F0F0F
    n = (n | (n << 2)) & 0x3333333333333333
    n = (n | (n << 1)) & 0x5555555555555555
    return n


def _compact1by1_64(n):
    n &= 0x5555555555555555
    n = (n ^ (n >> 1)) & 0x3333333333333333
    n = (n ^ (n >> 2)) & 0x0F0F0F0F0F0F0F0F
    n = (n ^ (n >> 4)) & 0x00FF00FF00FF00FF
    n = (n ^ (n >> 8)) & 0x0000FFFF0000FFFF
    n = (n ^ (n >> 16)) & 0x00000000FFFFFFFF
    return n


def _spread(n: int, precision: int) -> int:
    if precision <= 32:
        return _part1by1_64(n)
    out = 0
    for p in range(precision):
        out |= ((n >> p) & 1) << (2 * p)
    return out


def _compact(n: int, precision: int) -> int:
    if precision <= 32:
        return _compact1by1_64(n)
    out = 0
    for p in range(precision):
        out |= ((n >> (2 * p)) & 1) << p
    return out


def interleave_codes(x: int, y: int, precision: int) -> int:
    return (_spread(x, precision) << 1) | _spread(y, precision)


def deinterleave_code(z: int, precision: int) -> Tuple[int, int]:
    """Inverse of interleave_codes; `precision` is the width of each half."""
    return _compact(z >> 1, precision), _compact(z, precision)


# --- the map and its inverse ---

def interleave(x: BitFraction, y: BitFraction) -> BitFraction:
    """z with bit 2k = x bit k and bit 2k+1 = y bit k."""
    if x.precision != y.precision:
        raise ContractError(f"precision mismatch: {x.precision} vs {y.precision}")
    return BitFraction(interleave_codes(x.code, y.code, x.precision), 2 * x.precision)


def deinterleave(z: BitFraction) -> Tuple[BitFraction, BitFraction]:
    if z.precision % 2:
        raise ContractError(f"cannot split odd precision {z.precision}")
    half = z.precision // 2
    x, y = deinterleave_code(z.code, half)
    return BitFraction(x, half), BitFraction(y, half)


def is_bijective(precision: int) -> bool:
    """Exhaustive check over every (x, y) pair on the grid (small precisions only)."""
    if not 1 <= precision <= EXHAUSTIVE_LIMIT:
        raise ContractError(f"exhaustive check supports precision 1..{EXHAUSTIVE_LIMIT}")
    side = 1 << precision
    xs, ys = np.meshgrid(np.arange(side, dtype=np.uint64), np.arange(side, dtype=np.uint64),
                         indexing="ij")
    codes = (_part1by1_64(xs.ravel()) << np.uint64(1)) | _part1by1_64(ys.ravel())
    unique = np.unique(codes)
    # injective and onto all 2B-bit codes
    return unique.size == side * side and int(unique[0]) == 0 and int(unique[-1]) == side * side - 1


# --- expansion across dyadic boundaries ---

def boundary_pair(k: int, precision: int) -> Tuple[BitFraction, BitFraction]:
    """x = 0.0 followed by k ones and x' = 0.1, which lie 2**-(k+1) apart."""
    if not 2 <= k < precision:
        raise ContractError(f"need 2 <= k < B, got k={k}, B={precision}")
    below = ((1 << k) - 1) << (precision - 1 - k)
    above = 1 << (precision - 1)
    return BitFraction(below, precision), BitFraction(above, precision)


def boundary_expansion(k: int, precision: int = DEFAULT_PRECISION, y: BitFraction = None) -> float:
    """|interleave(x', y) - interleave(x, y)| / |x' - x| for the boundary pair at depth k."""
    x, x_prime = boundary_pair(k, precision)
    y = y if y is not None else BitFraction(0, precision)
    if y.precision != precision:
        raise ContractError(f"y has precision {y.precision}, expected {precision}")
    out_change = abs(interleave(x_prime, y).exact - interleave(x, y).exact)
    return float(out_change / (x_prime.exact - x.exact))


def boundary_sweep(precision: int = DEFAULT_PRECISION) -> pd.DataFrame:
    """(k, input distance, ratio) for every admissible depth k."""
    rows = []
    for k in range(2, precision):
        rows.append({"k": k, "distance": 2.0 ** -(k + 1), "ratio": boundary_expansion(k, precision)})
    logger.info("Boundary sweep over k = 2..%d at precision %d", precision - 1, precision)
    return pd.DataFrame(rows, columns=["k", "distance", "ratio"])


def shared_prefix_bits(a: BitFraction, b: BitFraction) -> int:
    """Number of leading fraction bits on which `a` and `b` agree."""
    if a.precision != b.precision:
        raise ContractError(f"precision mismatch: {a.precision} vs {b.precision}")
    diff = a.code ^ b.code
    return a.precision - diff.bit_length()
