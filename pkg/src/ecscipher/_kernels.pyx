# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bit kernels; mirrors `_kernels_py` exactly (same signatures,
same results).  Field elements and pads live in single 64-bit words."""

import numpy as np

ctypedef unsigned long long u64


cdef inline u64 _parity(u64 x) noexcept nogil:
    x ^= x >> 32
    x ^= x >> 16
    x ^= x >> 8
    x ^= x >> 4
    x ^= x >> 2
    x ^= x >> 1
    return x & 1


cdef inline u64 _gf_mul(u64 a, u64 b, u64 mod_low, u64 mask, u64 top_bit) noexcept nogil:
    # Reduced-modulus form: mod_low is the modulus without its leading term,
    # so the update stays inside 64 bits even for degree 64.
    cdef u64 r = 0
    cdef u64 carry
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        carry = a & top_bit
        a = (a << 1) & mask
        if carry:
            a ^= mod_low
    return r


def gf_mul(a, b, modulus, s):
    """Carry-less product in GF(2^s) reduced by the degree-s modulus."""
    if not 1 <= s <= 64:
        raise ValueError("s out of range for the compiled kernel")
    cdef u64 mask = ((1 << s) - 1) & 0xFFFFFFFFFFFFFFFF
    cdef u64 mod_low = modulus ^ (1 << s)
    cdef u64 top_bit = 1
    top_bit <<= (s - 1)
    return _gf_mul(<u64> a, <u64> b, mod_low, mask, top_bit)


def pad_table(s, modulus, l):
    """Pad values for all 2**(2s) keys, as uint64, index (x << s) | y."""
    if not 1 <= s <= 31:
        raise ValueError("s out of range for table enumeration")
    if not 1 <= l <= 64:
        raise ValueError("l out of range")
    cdef u64 mask = ((1 << s) - 1) & 0xFFFFFFFFFFFFFFFF
    cdef u64 mod_low = modulus ^ (1 << s)
    cdef u64 top_bit = 1
    top_bit <<= (s - 1)
    cdef Py_ssize_t half = 1 << s
    cdef Py_ssize_t nl = l
    out_arr = np.empty(half * half, dtype=np.uint64)
    cdef u64[::1] out = out_arr
    powers_arr = np.empty(nl, dtype=np.uint64)
    cdef u64[::1] powers = powers_arr
    cdef Py_ssize_t x, y, i
    cdef u64 xi, v
    with nogil:
        for x in range(half):
            xi = 1
            for i in range(nl):
                powers[i] = xi
                xi = _gf_mul(xi, <u64> x, mod_low, mask, top_bit)
            for y in range(half):
                v = 0
                for i in range(nl):
                    v = (v << 1) | _parity(powers[i] & <u64> y)
                out[x * half + y] = v
    return out_arr


def max_mask_imbalance(pads, l):
    """Max over nonzero l-bit masks of |#even-parity keys - #odd-parity keys|
    for the AND of mask and pad; exact integers throughout."""
    pads_arr = np.ascontiguousarray(pads, dtype=np.uint64)
    cdef u64[::1] view = pads_arr
    cdef Py_ssize_t total = view.shape[0]
    cdef u64 mask_count = (<u64> 1 << l) - 1
    cdef u64 mask
    cdef Py_ssize_t i
    cdef Py_ssize_t odd, imbalance, best = 0
    with nogil:
        for mask in range(1, mask_count + 1):
            odd = 0
            for i in range(total):
                odd += <Py_ssize_t> _parity(view[i] & mask)
            imbalance = total - 2 * odd
            if imbalance < 0:
                imbalance = -imbalance
            if imbalance > best:
                best = imbalance
    return best
