import math
import random
from collections import deque
from fractions import Fraction

import pytest

from ecscipher.dist import Distribution, make_distribution


class TranscriptBits:
    """Randomness source replaying a fixed transcript of getrandbits draws."""

    def __init__(self, *values):
        self._queue = deque(values)

    def getrandbits(self, k):
        if not self._queue:
            raise AssertionError("transcript exhausted")
        value = self._queue.popleft()
        assert 0 <= value < (1 << k), "transcript value wider than requested"
        return value

    @property
    def drained(self):
        return not self._queue


def random_distribution(
    rng: random.Random,
    max_symbols: int = 256,
    max_weight_bits: int = 8,
    force_abstract: bool | None = None,
) -> Distribution:
    """Random rational distribution: integer weights over a random alphabet.

    Alphabet sizes are log-uniform in [2, max_symbols]; a quarter of the
    draws get one weight boosted hard to exercise skewed shapes.
    """
    size = max(2, int(2 ** rng.uniform(1.0, math.log2(max_symbols))))
    weights = [rng.randint(1, 1 << max_weight_bits) for _ in range(size)]
    if rng.random() < 0.25:
        weights[rng.randrange(size)] <<= rng.randint(4, 8)
    total = sum(weights)
    probs = [Fraction(w, total) for w in weights]
    abstract = rng.random() < 0.3 if force_abstract is None else force_abstract
    if abstract:
        return make_distribution([str(i) for i in range(1, size + 1)], probs, None)
    n = max((size - 1).bit_length(), 1) + rng.randint(0, 2)
    values = rng.sample(range(1 << n), size)
    return make_distribution([format(v, f"0{n}b") for v in values], probs, n)


@pytest.fixture
def three_symbol():
    """The skewed 3-symbol reference distribution used throughout."""
    return make_distribution(
        ["1", "2", "3"], [Fraction(13, 16), Fraction(1, 8), Fraction(1, 16)]
    )


@pytest.fixture
def bernoulli34():
    return make_distribution(["0", "1"], [Fraction(3, 4), Fraction(1, 4)], 1)
