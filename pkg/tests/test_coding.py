import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_distribution
from ecscipher.coding import (
    KIND_ESCAPE,
    KIND_RAW,
    KIND_TREE,
    Codebook,
    build_shannon,
    build_trimmed,
    binary_expansion,
    ceil_log2,
    decode_prefix,
    encode,
    is_prefix_free,
    kraft_sum,
    shannon_length,
    trim_tree,
)
from ecscipher.dist import make_distribution
from ecscipher.errors import UndecodableBlockError, UnknownSymbolError


def codebook_of(words, kind=KIND_TREE):
    """Ad-hoc codebook over synthetic symbols s1, s2, ... in rank order."""
    table = {f"s{i}": w for i, w in enumerate(words, start=1)}
    return Codebook(kind, table, tuple(table), max(map(len, words)))


class TestShannonLength:
    @pytest.mark.parametrize(
        "p,expected",
        [
            (Fraction(13, 16), 1),
            (Fraction(1, 8), 3),
            (Fraction(1, 5), 3),
            (Fraction(1, 2), 1),
            (Fraction(1), 0),
        ],
    )
    def test_values(self, p, expected):
        assert shannon_length(p) == expected

    @given(st.integers(1, 10**6), st.integers(1, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_is_exact_ceiling(self, a, b):
        if a > b:
            a, b = b, a
        p = Fraction(a, b)
        m = shannon_length(p)
        # independent oracle: count doublings until num * 2**m >= den
        doublings, num = 0, p.numerator
        while num < p.denominator:
            num <<= 1
            doublings += 1
        assert m == doublings


class TestBinaryExpansion:
    def test_known_digits(self):
        assert binary_expansion(Fraction(13, 16), 3) == "110"
        assert binary_expansion(Fraction(15, 16), 4) == "1111"
        assert binary_expansion(Fraction(0), 5) == "00000"

    def test_third(self):
        assert binary_expansion(Fraction(1, 3), 6) == "010101"

    def test_range_checks(self):
        with pytest.raises(ValueError):
            binary_expansion(Fraction(1), 3)
        with pytest.raises(ValueError):
            binary_expansion(Fraction(1, 2), 0)


class TestBuildShannon:
    def test_reference_example(self, three_symbol):
        cb = build_shannon(three_symbol)
        assert [cb.table[s] for s in cb.sorted_symbols] == ["0", "110", "1111"]
        assert cb.kind == KIND_RAW
        assert cb.max_len == 4

    def test_dyadic_uniform(self):
        d = make_distribution(
            ["00", "01", "10", "11"], [Fraction(1, 4)] * 4, 2
        )
        cb = build_shannon(d)
        assert sorted(cb.table.values()) == ["00", "01", "10", "11"]

    def test_half_quarter_quarter(self):
        d = make_distribution(
            ["1", "2", "3"], [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]
        )
        cb = build_shannon(d)
        assert [cb.table[s] for s in cb.sorted_symbols] == ["0", "10", "11"]

    def test_degenerate_alphabet(self):
        d = make_distribution(["1"], [Fraction(1)])
        with pytest.raises(ValueError, match="degenerate"):
            build_shannon(d)


class TestTrimTree:
    def test_reference_example(self):
        cb = codebook_of(["0", "110", "1111"], kind=KIND_RAW)
        trimmed = trim_tree(cb)
        assert [trimmed.table[s] for s in trimmed.sorted_symbols] == ["0", "10", "11"]

    def test_complete_tree_unchanged(self):
        cb = codebook_of(["00", "01", "10", "11"], kind=KIND_RAW)
        assert trim_tree(cb).table == cb.table

    def test_single_unary_node(self):
        cb = codebook_of(["0", "10", "110"], kind=KIND_RAW)
        assert [trim_tree(cb).table[s] for s in cb.sorted_symbols] == ["0", "10", "11"]

    def test_idempotent_on_corpus(self):
        rng = random.Random(2024)
        for _ in range(50):
            d = random_distribution(rng, max_symbols=64)
            tree = trim_tree(build_shannon(d))
            again = trim_tree(tree)
            assert again.table == tree.table

    def test_never_lengthens(self):
        rng = random.Random(99)
        for _ in range(50):
            d = random_distribution(rng, max_symbols=64)
            raw = build_shannon(d)
            tree = trim_tree(raw)
            for sym in raw.table:
                assert len(tree.table[sym]) <= len(raw.table[sym])


class TestBuildTrimmed:
    def test_all_short_codewords_keep_marker(self):
        tree = codebook_of(["0", "10", "11"])
        cb = build_trimmed(tree, 3)
        assert [cb.table[s] for s in cb.sorted_symbols] == ["00", "010", "011"]
        assert cb.kind == KIND_ESCAPE
        assert cb.max_len == 3

    def test_escape_rank_is_zero_based(self):
        # rank 3 of 5 exceeds the width bound and escapes as '1' + 010
        tree = codebook_of(["0", "10", "1100", "1101", "111"])
        cb = build_trimmed(tree, 5)
        assert cb.table["s3"] == "1" + "010"
        assert is_prefix_free(cb)

    def test_width_convention(self):
        # fixed-width binary of one-based rank 3 would be 011; the escape
        # branch instead encodes the zero-based rank so that rank L still
        # fits when L is a power of two
        assert format(3, "03b") == "011"
        tree = codebook_of(["0", "10", "110", "1110", "1111"][:4] + ["11111111"])
        cb = build_trimmed(tree, 5)
        assert cb.table["s5"] == "1" + format(4, "03b")

    def test_power_of_two_alphabet_last_rank_fits(self):
        tree = codebook_of(["0", "10", "110", "1110", "11110", "111110",
                            "1111110", "1111111"])
        cb = build_trimmed(tree, 8)
        assert cb.max_len <= ceil_log2(8) + 1
        assert is_prefix_free(cb)


class TestEncodeDecode:
    def test_encode(self, three_symbol):
        trimmed = build_trimmed(trim_tree(build_shannon(three_symbol)))
        assert encode(trimmed, "1") == "00"
        raw = build_shannon(three_symbol)
        assert encode(raw, "3") == "1111"
        with pytest.raises(UnknownSymbolError):
            encode(raw, "9")

    def test_decode_prefix(self, three_symbol):
        raw = build_shannon(three_symbol)
        assert decode_prefix(raw, "111100101") == ("3", 4)
        trimmed = build_trimmed(trim_tree(raw))
        assert decode_prefix(trimmed, "00" + "1") == ("1", 2)
        with pytest.raises(UndecodableBlockError):
            decode_prefix(trimmed, "10")


class TestPrefixFreeAndKraft:
    def test_known_sets(self):
        assert is_prefix_free(codebook_of(["0", "10", "11"]))
        assert kraft_sum(codebook_of(["0", "10", "11"])) == 1
        assert not is_prefix_free(codebook_of(["0", "01"]))
        cb = codebook_of(["0", "110", "1111"])
        assert is_prefix_free(cb)
        assert kraft_sum(cb) == Fraction(11, 16)

    def test_duplicates_are_violations(self):
        assert not is_prefix_free(codebook_of(["01", "01"]))


@given(st.integers(0, 2**32))
@settings(max_examples=40, deadline=None)
def test_chain_properties(seed):
    """prefix-freeness, Kraft, length bounds, and round trips hold for the
    whole chain on random distributions."""
    d = random_distribution(random.Random(seed), max_symbols=64)
    raw = build_shannon(d)
    tree = trim_tree(raw)
    escape = build_trimmed(tree)

    for cb in (raw, tree, escape):
        assert is_prefix_free(cb)
        assert kraft_sum(cb) <= 1
        assert cb.max_len >= ceil_log2(d.size)
        for sym in d.symbols:
            cw = cb.table[sym]
            assert decode_prefix(cb, cw + "10101") == (sym, len(cw))

    width = ceil_log2(d.size)
    for sym in d.symbols:
        assert len(tree.table[sym]) <= shannon_length(d.prob_of(sym))
        assert len(escape.table[sym]) <= width + 1


def test_chain_is_deterministic(three_symbol):
    one = build_trimmed(trim_tree(build_shannon(three_symbol)))
    two = build_trimmed(trim_tree(build_shannon(three_symbol)))
    assert one.table == two.table
    assert one.sorted_symbols == two.sorted_symbols
