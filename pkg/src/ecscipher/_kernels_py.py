"""Pure-Python/numpy fallback for the hot bit kernels.

Mirrors the compiled `_kernels` extension exactly; `ecscipher.kernels`
selects between the two at import time.  Keys of the pad family are indexed
as (x << s) | y, pad bits are MSB first (bit i of the pad is the parity of
x**i AND y).
"""

from __future__ import annotations

import numpy as np


def gf_mul(a: int, b: int, modulus: int, s: int) -> int:
    """Carry-less product in GF(2^s) reduced by the degree-s modulus."""
    top = 1 << s
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= modulus
    return r


def _parity_u64(arr: np.ndarray) -> np.ndarray:
    # XOR-fold each 64-bit lane down to its parity bit.
    arr = arr.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        arr ^= arr >> np.uint64(shift)
    return arr & np.uint64(1)


def pad_table(s: int, modulus: int, l: int) -> np.ndarray:
    """Pad values for all 2**(2s) keys, as uint64, index (x << s) | y."""
    if not 1 <= s <= 31:
        raise ValueError("s out of range for table enumeration")
    if not 1 <= l <= 64:
        raise ValueError("l out of range")
    half = 1 << s
    out = np.empty(half * half, dtype=np.uint64)
    ys = np.arange(half, dtype=np.uint64)
    for x in range(half):
        pads = np.zeros(half, dtype=np.uint64)
        xi = 1
        for _ in range(l):
            pads = (pads << np.uint64(1)) | _parity_u64(ys & np.uint64(xi))
            xi = gf_mul(xi, x, modulus, s)
        out[x * half : (x + 1) * half] = pads
    return out


def max_mask_imbalance(pads: np.ndarray, l: int) -> int:
    """Max over nonzero l-bit masks of |#even-parity keys - #odd-parity keys|
    for the AND of mask and pad; exact integers throughout."""
    pads = np.ascontiguousarray(pads, dtype=np.uint64)
    total = len(pads)
    best = 0
    for mask in range(1, 1 << l):
        odd = int(_parity_u64(pads & np.uint64(mask)).sum())
        best = max(best, abs(total - 2 * odd))
    return best
