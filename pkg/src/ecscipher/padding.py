"""Randomized fixed-length blocks: pad every codeword to the maximum length
with fresh uniform bits, and the exact distribution that induces.

A randomness source is anything with ``getrandbits(k)``; production callers
pass ``random.SystemRandom()`` (OS entropy), tests pass a seeded
``random.Random`` or a canned transcript.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import log2

from .coding import Codebook, decode_prefix
from .dist import Distribution
from .errors import BudgetExceededError

#: Cap on exact support enumeration (number of carried block values).
DEFAULT_ENUM_BUDGET = 1 << 26


@dataclass(frozen=True)
class Block:
    """A fixed-length bit block, MSB first."""

    value: int
    length: int

    def __post_init__(self):
        if self.length < 0 or not 0 <= self.value < (1 << self.length):
            raise ValueError(f"value {self.value} does not fit in {self.length} bits")

    @property
    def bits(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    @classmethod
    def from_bits(cls, bits: str) -> "Block":
        return cls(int(bits, 2) if bits else 0, len(bits))


@dataclass(frozen=True)
class InducedDistribution:
    """Exact block distribution: mass maps carried block values to rationals."""

    block_len: int
    mass: dict[int, Fraction]


def randomize(cb: Codebook, symbol: str, rng) -> Block:
    """Codeword followed by fresh uniform bits up to the codebook's max length.

    Given a uniform source, the conditional distribution of the block given
    the symbol is uniform over the completions of its codeword.
    """
    cw = cb.codeword(symbol)
    gap = cb.max_len - len(cw)
    suffix = rng.getrandbits(gap) if gap else 0
    return Block((int(cw, 2) << gap) | suffix, cb.max_len)


def strip(cb: Codebook, block: Block) -> str:
    """Inverse of randomize: the unique symbol whose codeword prefixes the
    block.  Raises UndecodableBlockError when no codeword matches."""
    symbol, _ = decode_prefix(cb, block.bits)
    return symbol


def induced_distribution(
    cb: Codebook, d: Distribution, budget: int = DEFAULT_ENUM_BUDGET
) -> InducedDistribution:
    """Exact distribution of the randomized block.

    Every block value carrying mass starts with some codeword and weighs
    p(symbol) * 2**-(max_len - |codeword|); all other values weigh zero and
    are simply not carried.  Only the support is enumerated.
    """
    l = cb.max_len
    support = sum(1 << (l - len(cb.table[s])) for s in cb.table)
    if support > budget:
        raise BudgetExceededError(f"support size {support} exceeds budget {budget}")
    mass: dict[int, Fraction] = {}
    for sym, cw in cb.table.items():
        gap = l - len(cw)
        weight = d.prob_of(sym) * Fraction(1, 1 << gap)
        base = int(cw, 2) << gap
        for suffix in range(1 << gap):
            mass[base | suffix] = weight
    assert sum(mass.values()) == 1
    return InducedDistribution(l, mass)


def induced_min_entropy(cb: Codebook, d: Distribution) -> tuple[Fraction, float]:
    """Exact max of p(symbol) * 2**|codeword| and its log2 as a float.

    The block distribution's min-entropy is max_len - log2(max_term); no
    enumeration is needed.
    """
    max_term = max(
        d.prob_of(sym) * (1 << len(cw)) for sym, cw in cb.table.items()
    )
    slack_bits = log2(max_term.numerator) - log2(max_term.denominator)
    return max_term, slack_bits
