"""Exact probability models over finite alphabets.

Probabilities are `fractions.Fraction` end to end; floating point shows up
only in values meant for human-readable reports.  All operations are pure
and every type is immutable after construction, so instances can be shared
freely across workers.

Distribution file format (text, UTF-8, LF):

    ECSD 1 <n|*> <L>
    SYMBOL NUM/DEN          (exactly L such lines)

``n`` is the common bit length of the symbols; ``*`` marks an abstract
alphabet whose symbols are decimal indices.  Lines starting with ``#`` are
ignored.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetExceededError, DistributionFormatError

DIST_MAGIC = "ECSD"
DIST_VERSION = 1

#: Cap on the alphabet size produced by product_extend.
DEFAULT_PRODUCT_BUDGET = 1 << 20


@dataclass(frozen=True)
class Distribution:
    """A finite alphabet with exact rational probabilities.

    ``symbols`` holds the literal tokens: '0'/'1' strings of common length
    ``n``, or decimal indices when ``n`` is None (abstract alphabet).
    ``sorted_order`` is the permutation of indices by non-increasing
    probability, ties broken by ascending numeric symbol value; it defines
    the 1-based rank used by the code builders.
    """

    symbols: tuple[str, ...]
    probs: tuple[Fraction, ...]
    n: int | None
    sorted_order: tuple[int, ...]
    _index: dict[str, int] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        if not self._index:
            self._index.update((s, i) for i, s in enumerate(self.symbols))

    @property
    def size(self) -> int:
        return len(self.symbols)

    def sorted_symbols(self) -> tuple[str, ...]:
        return tuple(self.symbols[i] for i in self.sorted_order)

    def sorted_probs(self) -> tuple[Fraction, ...]:
        return tuple(self.probs[i] for i in self.sorted_order)

    def prob_of(self, symbol: str) -> Fraction:
        return self.probs[self._index[symbol]]

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._index


def _symbol_value(symbol: str, n: int | None) -> int:
    return int(symbol, 2) if n is not None else int(symbol)


def make_distribution(
    symbols, probs, n: int | None = None
) -> Distribution:
    """Validate and build a Distribution, computing its sorted order.

    Raises DistributionFormatError on duplicate symbols, non-positive
    probabilities, or a probability sum different from 1.
    """
    symbols = tuple(symbols)
    probs = tuple(Fraction(p) for p in probs)
    if len(symbols) != len(probs):
        raise DistributionFormatError("symbols and probabilities differ in length")
    if not symbols:
        raise DistributionFormatError("empty alphabet")
    if len(set(symbols)) != len(symbols):
        raise DistributionFormatError("duplicate symbol")
    for sym in symbols:
        if n is not None:
            if len(sym) != n or set(sym) - {"0", "1"}:
                raise DistributionFormatError(
                    f"symbol {sym!r} is not a {{0,1}}-string of length {n}"
                )
        else:
            if not sym.isdigit():
                raise DistributionFormatError(
                    f"symbol {sym!r} is not a decimal index"
                )
    for sym, p in zip(symbols, probs):
        if p <= 0:
            raise DistributionFormatError(
                f"zero or negative probability for symbol {sym!r}"
            )
    total = sum(probs)
    if total != 1:
        raise DistributionFormatError(f"probabilities sum to {total}, expected 1")
    order = sorted(
        range(len(symbols)),
        key=lambda i: (-probs[i], _symbol_value(symbols[i], n)),
    )
    return Distribution(symbols, probs, n, tuple(order))


def _parse_prob(token: str) -> Fraction:
    num_s, sep, den_s = token.partition("/")
    if not sep:
        raise DistributionFormatError(f"probability {token!r} is not NUM/DEN")
    try:
        num, den = int(num_s), int(den_s)
    except ValueError:
        raise DistributionFormatError(f"probability {token!r} is not NUM/DEN") from None
    if den <= 0:
        raise DistributionFormatError(f"probability {token!r} has non-positive denominator")
    return Fraction(num, den)


def parse_distribution(text: str) -> Distribution:
    """Parse the canonical distribution file format.

    Every violation is reported with its 1-based line number.
    """
    lines = [
        (no, line.strip())
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise DistributionFormatError("line 1: missing header")

    head_no, head = lines[0]
    fields = head.split()
    if len(fields) != 4 or fields[0] != DIST_MAGIC:
        raise DistributionFormatError(f"line {head_no}: expected header 'ECSD 1 <n|*> <L>'")
    if fields[1] != str(DIST_VERSION):
        raise DistributionFormatError(f"line {head_no}: unsupported version {fields[1]!r}")
    if fields[2] == "*":
        n = None
    else:
        try:
            n = int(fields[2])
        except ValueError:
            raise DistributionFormatError(f"line {head_no}: bad bit length {fields[2]!r}") from None
        if n < 1:
            raise DistributionFormatError(f"line {head_no}: bit length must be >= 1")
    try:
        count = int(fields[3])
    except ValueError:
        raise DistributionFormatError(f"line {head_no}: bad alphabet size {fields[3]!r}") from None
    if count < 1:
        raise DistributionFormatError(f"line {head_no}: alphabet size must be >= 1")

    body = lines[1:]
    if len(body) != count:
        raise DistributionFormatError(
            f"line {head_no}: header declares {count} symbols, file has {len(body)}"
        )

    symbols: list[str] = []
    probs: list[Fraction] = []
    seen: set[str] = set()
    for no, line in body:
        parts = line.split()
        if len(parts) != 2:
            raise DistributionFormatError(f"line {no}: expected 'SYMBOL NUM/DEN'")
        sym, prob_s = parts
        if n is not None:
            if len(sym) != n or set(sym) - {"0", "1"}:
                raise DistributionFormatError(
                    f"line {no}: symbol {sym!r} is not a {{0,1}}-string of length {n}"
                )
        elif not sym.isdigit():
            raise DistributionFormatError(f"line {no}: symbol {sym!r} is not a decimal index")
        if sym in seen:
            raise DistributionFormatError(f"line {no}: duplicate symbol {sym!r}")
        seen.add(sym)
        try:
            p = _parse_prob(prob_s)
        except DistributionFormatError as exc:
            raise DistributionFormatError(f"line {no}: {exc}") from None
        if p <= 0:
            raise DistributionFormatError(f"line {no}: zero or negative probability")
        symbols.append(sym)
        probs.append(p)

    total = sum(probs)
    if total != 1:
        raise DistributionFormatError(f"probabilities sum to {total}, expected 1")
    return make_distribution(symbols, probs, n)


def min_entropy_floor(d: Distribution) -> tuple[Fraction, float]:
    """Largest probability and the min-entropy -log2(max_prob) in bits.

    The float is for reporting only; the Fraction is exact.
    """
    max_prob = d.probs[d.sorted_order[0]]
    h_min = math.log2(max_prob.denominator) - math.log2(max_prob.numerator)
    return max_prob, h_min


def min_entropy_exceeds(d: Distribution, threshold_bits: int, slack: Fraction = Fraction(1)) -> bool:
    """Decide h_min(d) > threshold_bits - log2(slack) with integer arithmetic.

    Equivalent to max_prob * 2**threshold_bits < 1/slack, evaluated exactly;
    no floating point is involved.
    """
    if threshold_bits < 0:
        raise ValueError("threshold_bits must be >= 0")
    slack = Fraction(slack)
    max_prob = d.probs[d.sorted_order[0]]
    lhs = max_prob.numerator * slack.numerator << threshold_bits
    rhs = max_prob.denominator * slack.denominator
    return lhs < rhs


def product_extend(d: Distribution, m: int, budget: int = DEFAULT_PRODUCT_BUDGET) -> Distribution:
    """m-fold i.i.d. product of a bit-string distribution.

    Symbols are concatenations, probabilities multiply exactly, and the
    result is re-sorted under the standard order.
    """
    if d.n is None:
        raise ValueError("product_extend requires a bit-string alphabet")
    if m < 1:
        raise ValueError("m must be >= 1")
    if d.size**m > budget:
        raise BudgetExceededError(
            f"product alphabet size {d.size}**{m} exceeds budget {budget}"
        )
    symbols = []
    probs = []
    for combo in itertools.product(range(d.size), repeat=m):
        symbols.append("".join(d.symbols[i] for i in combo))
        probs.append(math.prod((d.probs[i] for i in combo), start=Fraction(1)))
    return make_distribution(symbols, probs, d.n * m)
