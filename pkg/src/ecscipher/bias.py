"""Small-bias XOR-pad families over GF(2^s).

The pad for key (x, y) has bit i = parity(x**i AND y), i = 0..l-1 (x**0 = 1),
MSB first.  Over uniform keys the family fools every parity test to within
(l-1)/2**s: XOR-ing the mask bits collects x-powers into a nonzero GF(2)
polynomial of degree < l, and the pad parity is uniform unless x is one of
its at most l-1 roots.

Field moduli are fixed: for each degree s the lexicographically smallest
irreducible polynomial with nonzero constant term, shipped as a table
(MODULUS_TABLE_ID versions it for the wire format) and re-derived by an
exhaustive search in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .errors import BudgetExceededError

MAX_FIELD_DEG = 64
MAX_BLOCK_LEN = 1 << 20

#: Version of the modulus table below; carried in ciphertext envelopes.
MODULUS_TABLE_ID = 1

#: Degree -> bit mask of the irreducible polynomial, leading term included.
IRREDUCIBLE_POLY: dict[int, int] = {
    1: 0x3, 2: 0x7, 3: 0xB, 4: 0x13, 5: 0x25, 6: 0x43, 7: 0x83, 8: 0x11B,
    9: 0x203, 10: 0x409, 11: 0x805, 12: 0x1009, 13: 0x201B, 14: 0x4021,
    15: 0x8003, 16: 0x1002B, 17: 0x20009, 18: 0x40009, 19: 0x80027,
    20: 0x100009, 21: 0x200005, 22: 0x400003, 23: 0x800021, 24: 0x100001B,
    25: 0x2000009, 26: 0x400001B, 27: 0x8000027, 28: 0x10000003,
    29: 0x20000005, 30: 0x40000003, 31: 0x80000009, 32: 0x10000008D,
    33: 0x20000004B, 34: 0x40000001B, 35: 0x800000005, 36: 0x1000000035,
    37: 0x200000003F, 38: 0x4000000063, 39: 0x8000000011, 40: 0x10000000039,
    41: 0x20000000009, 42: 0x40000000027, 43: 0x80000000059,
    44: 0x100000000021, 45: 0x20000000001B, 46: 0x400000000003,
    47: 0x800000000021, 48: 0x100000000002D, 49: 0x2000000000071,
    50: 0x400000000001D, 51: 0x800000000004B, 52: 0x10000000000009,
    53: 0x20000000000047, 54: 0x4000000000007D, 55: 0x80000000000047,
    56: 0x100000000000095, 57: 0x200000000000011, 58: 0x400000000000063,
    59: 0x80000000000007B, 60: 0x1000000000000003, 61: 0x2000000000000027,
    62: 0x4000000000000069, 63: 0x8000000000000003, 64: 0x1000000000000001B,
}

#: Cap on 2**(2s) * (2**l - 1) enumeration terms of the exact bias oracle;
#: admits the (s <= 6, l <= 10) grid.
DEFAULT_BIAS_BUDGET = 1 << 23


@dataclass(frozen=True)
class FieldParams:
    """GF(2^deg) with a fixed irreducible modulus (bit mask, leading term set)."""

    deg: int
    modulus: int


@dataclass(frozen=True)
class BiasKey:
    """A pad-family key: two field elements, 2*deg bits total."""

    x: int
    y: int


def irreducible_poly(s: int) -> int:
    if not 1 <= s <= MAX_FIELD_DEG:
        raise ValueError(f"field degree {s} out of range 1..{MAX_FIELD_DEG}")
    return IRREDUCIBLE_POLY[s]


def field_params(s: int) -> FieldParams:
    return FieldParams(s, irreducible_poly(s))


def gf_mul(a: int, b: int, fp: FieldParams) -> int:
    if not (0 <= a < (1 << fp.deg) and 0 <= b < (1 << fp.deg)):
        raise ValueError("operands out of field range")
    return kernels.gf_mul(a, b, fp.modulus, fp.deg)


def aghp_pad(key: BiasKey, l: int, fp: FieldParams) -> int:
    """Pad value for one key, as an l-bit integer (bit 0 of the pad is the
    most significant bit of the result)."""
    if l < 1:
        raise ValueError("l must be >= 1")
    value = 0
    xi = 1
    for _ in range(l):
        value = (value << 1) | ((xi & key.y).bit_count() & 1)
        xi = kernels.gf_mul(xi, key.x, fp.modulus, fp.deg)
    return value


def pad_table(fp: FieldParams, l: int):
    """Pads of the whole family as a uint64 array indexed by (x << deg) | y."""
    return kernels.pad_table(fp.deg, fp.modulus, l)


def family_bias_exact(s: int, l: int, budget: int = DEFAULT_BIAS_BUDGET) -> Fraction:
    """Exhaustive bias oracle: max over nonzero masks of the absolute mean of
    (-1)**<mask, pad> over all 2**(2s) keys, as an exact rational.

    Deliberately enumerates the definition rather than reusing the root-
    counting argument, so it can falsify the construction.
    """
    keys = 1 << (2 * s)
    cost = keys * ((1 << l) - 1)
    if cost > budget:
        raise BudgetExceededError(f"bias enumeration needs {cost} terms, budget {budget}")
    fp = field_params(s)
    imbalance = kernels.max_mask_imbalance(pad_table(fp, l), l)
    return Fraction(imbalance, keys)


def required_s(l: int, delta_target: Fraction) -> int:
    """Smallest field degree whose family bias bound (l-1)/2**s stays within
    delta_target; exact integer comparison, capped at 64."""
    delta_target = Fraction(delta_target)
    if not 0 < delta_target <= 1:
        raise ValueError("delta_target must be in (0, 1]")
    if l < 2:
        raise ValueError("l must be >= 2")
    if l > MAX_BLOCK_LEN:
        raise ValueError(f"block length {l} beyond supported range {MAX_BLOCK_LEN}")
    need = -(-((l - 1) * delta_target.denominator) // delta_target.numerator)
    s = max(1, (need - 1).bit_length())
    if s > MAX_FIELD_DEG:
        raise ValueError(f"required field degree {s} exceeds {MAX_FIELD_DEG}")
    return s


# ---------------------------------------------------------------------------
# Independent modulus search (verification oracle for IRREDUCIBLE_POLY).
# ---------------------------------------------------------------------------

def _poly_mod(a: int, m: int) -> int:
    deg_m = m.bit_length() - 1
    while a.bit_length() - 1 >= deg_m and a:
        a ^= m << (a.bit_length() - 1 - deg_m)
    return a


def _poly_mulmod(a: int, b: int, m: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a = _poly_mod(a << 1, m)
    return r


def _poly_gcd(a: int, b: int) -> int:
    while b:
        while a.bit_length() >= b.bit_length() and a:
            a ^= b << (a.bit_length() - b.bit_length())
        a, b = b, a
    return a


def _x_pow_pow2_mod(m: int, k: int) -> int:
    r = _poly_mod(2, m)
    for _ in range(k):
        r = _poly_mulmod(r, r, m)
    return r


def _prime_factors(n: int) -> set[int]:
    factors = set()
    div = 2
    while div * div <= n:
        while n % div == 0:
            factors.add(div)
            n //= div
        div += 1
    if n > 1:
        factors.add(n)
    return factors


def is_irreducible(mask: int, s: int) -> bool:
    """Rabin's test: x**(2**s) == x (mod mask) and gcd(x**(2**(s/q)) - x,
    mask) == 1 for every prime divisor q of s."""
    if mask.bit_length() - 1 != s:
        raise ValueError("mask degree mismatch")
    if _x_pow_pow2_mod(mask, s) != _poly_mod(2, mask):
        return False
    for q in _prime_factors(s):
        probe = _x_pow_pow2_mod(mask, s // q) ^ _poly_mod(2, mask)
        if _poly_gcd(probe, mask) != 1:
            return False
    return True


def find_smallest_irreducible(s: int) -> int:
    """Deterministic exhaustive search in ascending mask order, constant
    term forced to 1 (a zero constant term is divisible by x for s >= 2;
    for s = 1 the convention picks x + 1)."""
    if not 1 <= s <= MAX_FIELD_DEG:
        raise ValueError(f"field degree {s} out of range 1..{MAX_FIELD_DEG}")
    for low in range(1, 1 << s, 2):
        candidate = (1 << s) | low
        if is_irreducible(candidate, s):
            return candidate
    raise AssertionError("unreachable: irreducible polynomials exist for every degree")
