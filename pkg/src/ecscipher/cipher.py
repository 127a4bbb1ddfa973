"""Parameter derivation and the one-time compress-randomize-XOR cipher.

Pipeline: build the escape-trimmed code for the message distribution, pad
the codeword of the message to the fixed block length with fresh random
bits, and XOR the block with a small-bias pad selected by a 2s-bit key.
Decryption XORs the same pad back and strips the padding.

Keys are strictly one-time: `encrypt` consumes a KeyHandle, and reuse of
the underlying key voids every guarantee (the scheme is an XOR pad and is
malleable by design).

Wire formats
------------
Ciphertext envelope (binary, big-endian): magic ``ECS1``, u8 version=1,
u16 block length l, u16 field degree s, u8 modulus-table id, u16 payload
bit length (= l), payload bits MSB-first zero-padded to a byte boundary.

Key file (text): ``ECSK 1 <s> <hex>`` with the 2s key bits (x first) packed
MSB-first into ceil(2s/4) hex digits.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from fractions import Fraction

from .bias import (
    MODULUS_TABLE_ID,
    BiasKey,
    aghp_pad,
    field_params,
    irreducible_poly,
    required_s,
)
from .coding import Codebook, build_shannon, build_trimmed, trim_tree
from .dist import Distribution
from .errors import (
    EnvelopeFormatError,
    KeyFileError,
    KeyReuseError,
    ParameterMismatchError,
)
from .padding import Block, induced_min_entropy, randomize, strip

ENVELOPE_MAGIC = b"ECS1"
ENVELOPE_VERSION = 1
_ENVELOPE_HEADER = struct.Struct(">4sBHHBH")

KEYFILE_MAGIC = "ECSK"
KEYFILE_VERSION = 1


def ceil_2log2_inv(epsilon: Fraction) -> int:
    """Exact ceiling of 2*log2(1/epsilon): smallest c with (1/eps)^2 <= 2^c."""
    num, den = epsilon.numerator, epsilon.denominator
    t = -(-(den * den) // (num * num))
    return (t - 1).bit_length()


def _flatten_margin(max_term: Fraction) -> int:
    """Least c >= 0 with max_term <= 4**c (max_term >= 1 for Kraft codes)."""
    t = -(-max_term.numerator // max_term.denominator)
    return -(-(t - 1).bit_length() // 2)


@dataclass(frozen=True)
class CipherParams:
    """Everything derived from (distribution, epsilon).

    ``max_term`` is the exact maximum of p(symbol) * 2**|codeword| over the
    escape-trimmed code, so the randomized block's min-entropy equals
    block_len - log2(max_term).  ``codebook`` caches the code the values
    were derived from.
    """

    n: int | None
    alphabet_size: int
    block_len: int
    max_term: Fraction
    epsilon: Fraction
    delta_target: Fraction
    field_deg: int
    modulus: int
    codebook: Codebook = field(repr=False, compare=False, default=None)

    @property
    def key_bits(self) -> int:
        """Actual key length of the constructive family: 2s."""
        return 2 * self.field_deg

    def theory_key_bits(self, margin: int = 4) -> int:
        """Key length the abstract scheme quotes: ceil(2*log2(1/eps)) + margin.

        margin=4 is the entropic-security constant, margin=5 the
        indistinguishability one; the gap to key_bits is the price of the
        explicit family (about 2*log2(l-1) bits plus the flattening margin).
        """
        return ceil_2log2_inv(self.epsilon) + margin

    @property
    def t_bits(self) -> float:
        return self.block_len - (
            math.log2(self.max_term.numerator) - math.log2(self.max_term.denominator)
        )


def derive_params(d: Distribution, epsilon: Fraction) -> CipherParams:
    """Derive block length, exact min-entropy term, bias target, and field
    degree for a distribution at a given security level.

    The bias target is epsilon / 2**c with c the least integer such that
    max_term <= 4**c; the escape-trimmed code guarantees max_term < 4, so
    c <= 1 and the target never drops below epsilon/2.
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must be in (0, 1)")
    if d.size < 2:
        raise ValueError("degenerate alphabet: need at least 2 symbols")
    cb = build_trimmed(trim_tree(build_shannon(d)))
    block_len = cb.max_len
    if d.n is not None and block_len > d.n + 1:
        raise AssertionError("escape code exceeded its n+1 length bound")
    max_term, _ = induced_min_entropy(cb, d)
    delta_target = epsilon / (1 << _flatten_margin(max_term))
    s = required_s(block_len, delta_target)
    return CipherParams(
        n=d.n,
        alphabet_size=d.size,
        block_len=block_len,
        max_term=max_term,
        epsilon=epsilon,
        delta_target=delta_target,
        field_deg=s,
        modulus=irreducible_poly(s),
        codebook=cb,
    )


def keygen(params: CipherParams, rng) -> BiasKey:
    """Draw 2s uniform bits and split them into (x, y), x first."""
    s = params.field_deg
    raw = rng.getrandbits(2 * s)
    return BiasKey(x=raw >> s, y=raw & ((1 << s) - 1))


class KeyHandle:
    """Single-use wrapper enforcing the one-time property at the API level."""

    def __init__(self, key: BiasKey):
        self._key = key
        self._used = False

    def take(self) -> BiasKey:
        if self._used:
            raise KeyReuseError("one-time key handle already consumed")
        self._used = True
        return self._key

    @property
    def used(self) -> bool:
        return self._used


def _check_key(key: BiasKey, params: CipherParams) -> None:
    limit = 1 << params.field_deg
    if not (0 <= key.x < limit and 0 <= key.y < limit):
        raise ParameterMismatchError("key does not fit the derived field degree")


def encrypt_ds(block: Block, key: BiasKey, params: CipherParams) -> Block:
    """XOR the block with the key's pad.  Involution: applying it twice with
    the same key is the identity, so decrypt_ds is the same map."""
    if block.length != params.block_len:
        raise ParameterMismatchError(
            f"block length {block.length} != derived length {params.block_len}"
        )
    _check_key(key, params)
    pad = aghp_pad(key, params.block_len, field_params(params.field_deg))
    return Block(block.value ^ pad, block.length)


decrypt_ds = encrypt_ds


@dataclass(frozen=True)
class CiphertextEnvelope:
    """Self-describing ciphertext block; parameters round-trip bit-exactly."""

    version: int
    block_len: int
    field_deg: int
    modulus_id: int
    payload: int

    def __post_init__(self):
        if not 0 <= self.payload < (1 << self.block_len):
            raise EnvelopeFormatError("payload does not fit the block length")

    def to_bytes(self) -> bytes:
        header = _ENVELOPE_HEADER.pack(
            ENVELOPE_MAGIC,
            self.version,
            self.block_len,
            self.field_deg,
            self.modulus_id,
            self.block_len,
        )
        nbytes = (self.block_len + 7) // 8
        packed = self.payload << (8 * nbytes - self.block_len)
        return header + packed.to_bytes(nbytes, "big")

    @classmethod
    def from_bytes(cls, data: bytes) -> "CiphertextEnvelope":
        if len(data) < _ENVELOPE_HEADER.size:
            raise EnvelopeFormatError("truncated envelope header")
        magic, version, block_len, field_deg, modulus_id, payload_bits = (
            _ENVELOPE_HEADER.unpack_from(data)
        )
        if magic != ENVELOPE_MAGIC:
            raise EnvelopeFormatError(f"bad magic {magic!r}")
        if version != ENVELOPE_VERSION:
            raise EnvelopeFormatError(f"unsupported version {version}")
        if payload_bits != block_len:
            raise EnvelopeFormatError("payload bit length disagrees with block length")
        nbytes = (block_len + 7) // 8
        body = data[_ENVELOPE_HEADER.size :]
        if len(body) != nbytes:
            raise EnvelopeFormatError(
                f"payload is {len(body)} bytes, expected {nbytes}"
            )
        padding_bits = 8 * nbytes - block_len
        raw = int.from_bytes(body, "big")
        if raw & ((1 << padding_bits) - 1):
            raise EnvelopeFormatError("nonzero padding bits")
        return cls(version, block_len, field_deg, modulus_id, raw >> padding_bits)


def encrypt(
    d: Distribution,
    params: CipherParams,
    handle: KeyHandle,
    message: str,
    rng,
) -> CiphertextEnvelope:
    """Randomize the message's codeword and XOR it with the key's pad.

    Consumes the key handle; a fresh handle (and key) is required per
    message.
    """
    cb = params.codebook
    cb.codeword(message)  # validate before burning the handle
    key = handle.take()
    _check_key(key, params)
    block = randomize(cb, message, rng)
    cipher_block = encrypt_ds(block, key, params)
    return CiphertextEnvelope(
        version=ENVELOPE_VERSION,
        block_len=params.block_len,
        field_deg=params.field_deg,
        modulus_id=MODULUS_TABLE_ID,
        payload=cipher_block.value,
    )


def decrypt(
    d: Distribution,
    params: CipherParams,
    key: BiasKey,
    envelope: CiphertextEnvelope,
) -> str:
    """Reject any parameter mismatch before touching key material, then XOR
    the pad back and strip the padding.

    A wrong key on a complete (Kraft sum 1) code decodes to *some* symbol
    rather than failing; an invalid block and a corrupted payload are
    indistinguishable by design and share one error kind.
    """
    if envelope.block_len != params.block_len:
        raise ParameterMismatchError(
            f"envelope block length {envelope.block_len} != derived {params.block_len}"
        )
    if envelope.field_deg != params.field_deg:
        raise ParameterMismatchError(
            f"envelope field degree {envelope.field_deg} != derived {params.field_deg}"
        )
    if envelope.modulus_id != MODULUS_TABLE_ID:
        raise ParameterMismatchError(
            f"envelope modulus table {envelope.modulus_id} != {MODULUS_TABLE_ID}"
        )
    _check_key(key, params)
    block = decrypt_ds(Block(envelope.payload, params.block_len), key, params)
    return strip(params.codebook, block)


def format_key(key: BiasKey, field_deg: int) -> str:
    limit = 1 << field_deg
    if not (0 <= key.x < limit and 0 <= key.y < limit):
        raise KeyFileError("key does not fit the field degree")
    digits = -(-(2 * field_deg) // 4)
    packed = (key.x << field_deg) | key.y
    return f"{KEYFILE_MAGIC} {KEYFILE_VERSION} {field_deg} {packed:0{digits}x}\n"


def parse_key(text: str) -> tuple[BiasKey, int]:
    fields = text.split()
    if len(fields) != 4 or fields[0] != KEYFILE_MAGIC:
        raise KeyFileError("expected 'ECSK 1 <s> <hex>'")
    if fields[1] != str(KEYFILE_VERSION):
        raise KeyFileError(f"unsupported key file version {fields[1]!r}")
    try:
        s = int(fields[2])
        packed = int(fields[3], 16)
    except ValueError:
        raise KeyFileError("malformed key file fields") from None
    if s < 1 or len(fields[3]) != -(-(2 * s) // 4):
        raise KeyFileError("key hex width disagrees with field degree")
    if packed >= (1 << (2 * s)):
        raise KeyFileError("key value out of range for field degree")
    return BiasKey(x=packed >> s, y=packed & ((1 << s) - 1)), s


def save_key(path, key: BiasKey, field_deg: int) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_key(key, field_deg))


def load_key(path) -> tuple[BiasKey, int]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_key(fh.read())
