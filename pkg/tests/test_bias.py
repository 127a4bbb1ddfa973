import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecscipher.bias import (
    IRREDUCIBLE_POLY,
    MAX_FIELD_DEG,
    BiasKey,
    aghp_pad,
    family_bias_exact,
    field_params,
    find_smallest_irreducible,
    gf_mul,
    irreducible_poly,
    is_irreducible,
    pad_table,
    required_s,
)
from ecscipher.errors import BudgetExceededError


class TestModulusTable:
    def test_table_matches_exhaustive_search(self):
        # Build-time verification: re-derive every shipped modulus.
        for s in range(1, MAX_FIELD_DEG + 1):
            assert IRREDUCIBLE_POLY[s] == find_smallest_irreducible(s), s

    @pytest.mark.parametrize("s,mask", [(1, 0b11), (2, 0b111), (3, 0b1011)])
    def test_small_degrees(self, s, mask):
        assert irreducible_poly(s) == mask

    def test_degree_three_is_minimal(self):
        # the only smaller candidate with constant term, x^3 + 1, factors
        assert not is_irreducible(0b1001, 3)
        assert is_irreducible(0b1011, 3)

    @pytest.mark.parametrize("s", [0, 65, -1])
    def test_range(self, s):
        with pytest.raises(ValueError):
            irreducible_poly(s)


class TestGfMul:
    def test_hand_product(self):
        fp = field_params(2)
        assert gf_mul(0b10, 0b10, fp) == 0b11  # x * x = x + 1 mod x^2+x+1

    @given(st.integers(1, 16), st.data())
    @settings(max_examples=40, deadline=None)
    def test_identities(self, s, data):
        fp = field_params(s)
        a = data.draw(st.integers(0, (1 << s) - 1))
        assert gf_mul(a, 1, fp) == a
        assert gf_mul(a, 0, fp) == 0

    @pytest.mark.parametrize("s", [2, 3])
    def test_field_axioms_exhaustive(self, s):
        fp = field_params(s)
        elems = range(1 << s)
        for a, b, c in itertools.product(elems, repeat=3):
            assert gf_mul(a, b, fp) == gf_mul(b, a, fp)
            assert gf_mul(gf_mul(a, b, fp), c, fp) == gf_mul(a, gf_mul(b, c, fp), fp)
            assert gf_mul(a, b ^ c, fp) == gf_mul(a, b, fp) ^ gf_mul(a, c, fp)

    @pytest.mark.parametrize("s", range(1, 9))
    def test_every_nonzero_element_invertible(self, s):
        fp = field_params(s)
        for a in range(1, 1 << s):
            assert any(gf_mul(a, b, fp) == 1 for b in range(1, 1 << s)), (s, a)

    @given(st.integers(17, 64), st.data())
    @settings(max_examples=30, deadline=None)
    def test_axioms_sampled_large_degrees(self, s, data):
        fp = field_params(s)
        top = (1 << s) - 1
        a = data.draw(st.integers(0, top))
        b = data.draw(st.integers(0, top))
        c = data.draw(st.integers(0, top))
        assert gf_mul(a, b, fp) == gf_mul(b, a, fp)
        assert gf_mul(gf_mul(a, b, fp), c, fp) == gf_mul(a, gf_mul(b, c, fp), fp)
        assert gf_mul(a, b ^ c, fp) == gf_mul(a, b, fp) ^ gf_mul(a, c, fp)


class TestPad:
    def test_x_zero_keeps_only_first_bit(self):
        fp = field_params(3)
        for y in range(8):
            pad = aghp_pad(BiasKey(0, y), 5, fp)
            assert pad == (y & 1) << 4

    def test_y_zero_is_all_zero(self):
        fp = field_params(4)
        for x in range(16):
            assert aghp_pad(BiasKey(x, 0), 6, fp) == 0

    def test_hand_vector(self):
        # x = 10, y = 11 in GF(4): powers 01, 10, 11 give parities 1, 1, 0
        assert aghp_pad(BiasKey(0b10, 0b11), 3, field_params(2)) == 0b110

    def test_linearity_in_y(self):
        fp = field_params(3)
        for x in range(8):
            for y1 in range(8):
                for y2 in range(8):
                    assert aghp_pad(BiasKey(x, y1 ^ y2), 4, fp) == aghp_pad(
                        BiasKey(x, y1), 4, fp
                    ) ^ aghp_pad(BiasKey(x, y2), 4, fp)

    def test_table_matches_single_pads(self):
        fp = field_params(3)
        table = pad_table(fp, 5)
        for x in range(8):
            for y in range(8):
                assert int(table[(x << 3) | y]) == aghp_pad(BiasKey(x, y), 5, fp)


class TestFamilyBias:
    def test_single_bit_family_is_exactly_unbiased(self):
        assert family_bias_exact(2, 1) == 0

    def test_recorded_small_values(self):
        # hand enumeration: mask 110 collects x^2 + x, which has roots 0
        # and 1, so 2 of 4 x-values degenerate
        assert family_bias_exact(2, 3) == Fraction(1, 2)
        assert family_bias_exact(3, 4) == Fraction(3, 8)
        assert family_bias_exact(4, 5) == Fraction(1, 4)

    def test_bound_on_small_grid(self):
        for s in range(1, 5):
            for l in range(2, 7):
                assert family_bias_exact(s, l) <= Fraction(l - 1, 1 << s)

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            family_bias_exact(6, 10, budget=1000)


class TestRequiredS:
    def test_examples(self):
        assert required_s(5, Fraction(1, 4)) == 4
        assert required_s(2, Fraction(1)) == 1

    def test_overflow_guard(self):
        with pytest.raises(ValueError):
            required_s(1 << 40, Fraction(1))
        with pytest.raises(ValueError):
            required_s(1 << 20, Fraction(1, 1 << 60))

    @given(st.integers(2, 4096), st.integers(1, 40))
    @settings(max_examples=60, deadline=None)
    def test_minimality(self, l, c):
        delta = Fraction(1, 1 << c)
        try:
            s = required_s(l, delta)
        except ValueError:
            return
        assert Fraction(l - 1, 1 << s) <= delta
        assert s == 1 or Fraction(l - 1, 1 << (s - 1)) > delta
