"""Parity between the compiled kernels and the pure-Python fallback."""

import random

import numpy as np
import pytest

from ecscipher import _kernels_py
from ecscipher.bias import irreducible_poly

compiled = pytest.importorskip(
    "ecscipher._kernels", reason="compiled kernels not built"
)

GRID = [(1, 2), (2, 3), (3, 5), (4, 8), (5, 6), (6, 10)]


@pytest.mark.parametrize("s,l", GRID)
def test_pad_table_parity(s, l):
    mod = irreducible_poly(s)
    a = compiled.pad_table(s, mod, l)
    b = _kernels_py.pad_table(s, mod, l)
    assert a.dtype == b.dtype == np.uint64
    assert np.array_equal(a, b)


@pytest.mark.parametrize("s,l", GRID)
def test_imbalance_parity(s, l):
    mod = irreducible_poly(s)
    pads = _kernels_py.pad_table(s, mod, l)
    assert compiled.max_mask_imbalance(pads, l) == _kernels_py.max_mask_imbalance(
        pads, l
    )


@pytest.mark.parametrize("s", [1, 2, 7, 8, 16, 31, 32, 33, 63, 64])
def test_gf_mul_parity(s):
    mod = irreducible_poly(s)
    rng = random.Random(s)
    for _ in range(200):
        a = rng.getrandbits(s)
        b = rng.getrandbits(s)
        assert compiled.gf_mul(a, b, mod, s) == _kernels_py.gf_mul(a, b, mod, s)
