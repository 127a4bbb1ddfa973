"""Prefix-free code construction: the cumulative-probability code, its
tree-trimmed form, and the fixed-width escape ("trimmed") code.

Codewords are '0'/'1' strings.  Construction is exact: codeword lengths come
from integer comparisons on the rational probabilities, and codeword bits
from repeated doubling of the cumulative probability.  The three builders
form a chain::

    build_shannon(d)  ->  trim_tree(cb)  ->  build_trimmed(cb)

The raw code is kept inspectable because it is a valid prefix-free code in
its own right; trimming only shortens codewords.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .dist import Distribution
from .errors import UndecodableBlockError, UnknownSymbolError

KIND_RAW = "raw_shannon"
KIND_TREE = "tree_trimmed"
KIND_ESCAPE = "trimmed_escape"


def ceil_log2(n: int) -> int:
    """Smallest w with 2**w >= n, computed from bit lengths."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (n - 1).bit_length()


@dataclass(frozen=True)
class Codebook:
    """An immutable symbol -> codeword map plus its rank order.

    ``sorted_symbols`` fixes the 1-based rank of every symbol (the order the
    code was built in); ``max_len`` is the longest codeword length.
    """

    kind: str
    table: dict[str, str]
    sorted_symbols: tuple[str, ...]
    max_len: int
    _decoder: dict[int, dict[str, str]] = field(
        repr=False, compare=False, default_factory=dict
    )

    @property
    def size(self) -> int:
        return len(self.table)

    def codeword(self, symbol: str) -> str:
        try:
            return self.table[symbol]
        except KeyError:
            raise UnknownSymbolError(f"unknown symbol {symbol!r}") from None

    def decoder(self) -> dict[int, dict[str, str]]:
        """Codewords bucketed by length, memoized for repeated decoding."""
        if not self._decoder:
            for sym, cw in self.table.items():
                self._decoder.setdefault(len(cw), {})[cw] = sym
        return self._decoder


def shannon_length(p: Fraction) -> int:
    """Exact ceiling of log2(1/p): smallest m with num(p)*2**m >= den(p)."""
    p = Fraction(p)
    if not 0 < p <= 1:
        raise ValueError("probability must be in (0, 1]")
    t = -(-p.denominator // p.numerator)
    return (t - 1).bit_length()


def binary_expansion(q: Fraction, length: int) -> str:
    """First `length` fractional binary digits of q in [0, 1).

    Digits come from exact repeated doubling: digit = 1 iff 2*num >= den,
    in which case den is subtracted back out.
    """
    q = Fraction(q)
    if not 0 <= q < 1:
        raise ValueError("q must be in [0, 1)")
    if length < 1:
        raise ValueError("length must be >= 1")
    num, den = q.numerator, q.denominator
    digits = []
    for _ in range(length):
        num <<= 1
        if num >= den:
            digits.append("1")
            num -= den
        else:
            digits.append("0")
    return "".join(digits)


def build_shannon(d: Distribution) -> Codebook:
    """Assign rank i the first ceil(log2(1/p_i)) bits of the cumulative
    probability Q_i = p_1 + ... + p_{i-1}, in sorted order."""
    if d.size < 2:
        raise ValueError("degenerate alphabet: need at least 2 symbols")
    table: dict[str, str] = {}
    cumulative = Fraction(0)
    max_len = 0
    for idx in d.sorted_order:
        p = d.probs[idx]
        cw = binary_expansion(cumulative, shannon_length(p))
        table[d.symbols[idx]] = cw
        max_len = max(max_len, len(cw))
        cumulative += p
    return Codebook(KIND_RAW, table, d.sorted_symbols(), max_len)


class _TrieNode:
    __slots__ = ("children", "symbol")

    def __init__(self):
        self.children: dict[str, _TrieNode] = {}
        self.symbol: str | None = None


def _build_trie(table: dict[str, str]) -> _TrieNode:
    root = _TrieNode()
    for sym, cw in table.items():
        node = root
        for bit in cw:
            node = node.children.setdefault(bit, _TrieNode())
        node.symbol = sym
    return root


def _contract(node: _TrieNode) -> _TrieNode:
    # Bottom-up: splice out every internal node left with a single child.
    # A single pass reaches the fixpoint because contracted subtrees never
    # regain unary nodes.
    if node.symbol is not None:
        return node
    node.children = {bit: _contract(child) for bit, child in node.children.items()}
    if len(node.children) == 1:
        (child,) = node.children.values()
        return child
    return node


def _read_codewords(root: _TrieNode) -> dict[str, str]:
    table: dict[str, str] = {}
    stack = [(root, "")]
    while stack:
        node, acc = stack.pop()
        if node.symbol is not None:
            table[node.symbol] = acc
            continue
        for bit, child in node.children.items():
            stack.append((child, acc + bit))
    return table


def trim_tree(cb: Codebook) -> Codebook:
    """Contract every unary node of the codeword trie, shortening codewords.

    No output codeword is longer than its input; prefix-freeness is
    preserved; trimming an already trimmed codebook is the identity.
    """
    if cb.size < 2:
        raise ValueError("degenerate alphabet: need at least 2 symbols")
    table = _read_codewords(_contract(_build_trie(cb.table)))
    max_len = max(len(cw) for cw in table.values())
    return Codebook(KIND_TREE, table, cb.sorted_symbols, max_len)


def build_trimmed(cb: Codebook, alphabet_size: int | None = None) -> Codebook:
    """Escape-code a tree-trimmed codebook so no codeword exceeds
    ceil(log2 L) + 1 bits.

    Codewords of length <= w = ceil(log2 L) are kept behind a '0' marker;
    longer ones are replaced by '1' followed by the ZERO-BASED rank in
    exactly w bits.  Zero-based ranks keep the width bound valid when L is
    a power of two and the last rank takes the escape branch.
    """
    size = cb.size if alphabet_size is None else alphabet_size
    if size != cb.size:
        raise ValueError(f"alphabet size {size} does not match codebook ({cb.size})")
    width = ceil_log2(size)
    table: dict[str, str] = {}
    for rank0, sym in enumerate(cb.sorted_symbols):
        cw = cb.table[sym]
        if len(cw) <= width:
            table[sym] = "0" + cw
        else:
            table[sym] = "1" + format(rank0, f"0{width}b")
    max_len = max(len(cw) for cw in table.values())
    assert max_len <= width + 1
    return Codebook(KIND_ESCAPE, table, cb.sorted_symbols, max_len)


def encode(cb: Codebook, symbol: str) -> str:
    return cb.codeword(symbol)


def decode_prefix(cb: Codebook, stream: str) -> tuple[str, int]:
    """Match the unique codeword prefixing `stream`.

    Returns (symbol, bits consumed).  For the escape code this realizes the
    two-case decoder implicitly: marker bit plus either a kept codeword or
    a fixed-width rank, both of which live in the same prefix-free table.
    """
    decoder = cb.decoder()
    for length in sorted(decoder):
        if length > len(stream):
            break
        sym = decoder[length].get(stream[:length])
        if sym is not None:
            return sym, length
    raise UndecodableBlockError("no codeword is a prefix of the stream")


def is_prefix_free(cb: Codebook) -> bool:
    """Pairwise prefix test (duplicates count as violations)."""
    words = sorted(cb.table.values(), key=len)
    seen: set[str] = set()
    for w in words:
        if w in seen:
            return False
        if any(w[:k] in seen for k in range(1, len(w))):
            return False
        seen.add(w)
    return True


def kraft_sum(cb: Codebook) -> Fraction:
    return sum(
        (Fraction(1, 1 << len(cw)) for cw in cb.table.values()), start=Fraction(0)
    )
