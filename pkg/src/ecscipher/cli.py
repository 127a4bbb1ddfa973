"""Command-line surface: analyze, codebook, keygen, encrypt, decrypt, verify.

Exit status: 0 success/PASS, 1 verification FAIL, 2 input error, 3 policy
refusal (key reuse without --force-reuse).  Every subcommand is
deterministic given its inputs and --seed.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction

from .bias import MODULUS_TABLE_ID
from .cipher import (
    CiphertextEnvelope,
    KeyHandle,
    decrypt,
    derive_params,
    encrypt,
    keygen,
    load_key,
    save_key,
)
from .coding import build_shannon, build_trimmed, ceil_log2, trim_tree
from .dist import parse_distribution
from .errors import (
    BudgetExceededError,
    EcsError,
    KeyReuseError,
    ParameterMismatchError,
)
from .verify import (
    DEFAULT_BUDGET,
    chain_distances,
    check_indistinguishability,
    monte_carlo_sd,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_REFUSED = 3


def parse_epsilon(text: str) -> Fraction:
    """Accept exact rationals 'A/B' or power-of-two literals '2^-c' only."""
    text = text.strip()
    if text.startswith("2^-"):
        exponent = int(text[3:])
        if exponent < 1:
            raise ValueError("epsilon exponent must be >= 1")
        return Fraction(1, 1 << exponent)
    num_s, sep, den_s = text.partition("/")
    if not sep:
        raise ValueError(f"epsilon {text!r} must be 'A/B' or '2^-c'")
    value = Fraction(int(num_s), int(den_s))
    if not 0 < value < 1:
        raise ValueError("epsilon must be in (0, 1)")
    return value


def _load_distribution(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_distribution(fh.read())


def _rng(seed: int | None):
    return random.Random(seed) if seed is not None else random.SystemRandom()


def _parse_message(literal: str, d) -> str:
    literal = literal.strip()
    if d.n is None:
        return literal
    if literal.startswith("0x") or literal.startswith("0X"):
        value = int(literal, 16)
        if value >= 1 << d.n:
            raise ValueError(f"message {literal} does not fit {d.n} bits")
        return format(value, f"0{d.n}b")
    return literal


def cmd_analyze(args) -> int:
    d = _load_distribution(args.distribution)
    epsilon = parse_epsilon(args.epsilon)
    raw = build_shannon(d)
    tree = trim_tree(raw)
    trimmed = build_trimmed(tree)
    params = derive_params(d, epsilon)
    pairs = [
        ("L", str(d.size)),
        ("n", "*" if d.n is None else str(d.n)),
        ("raw_max_len", str(raw.max_len)),
        ("tree_max_len", str(tree.max_len)),
        ("trimmed_max_len", str(trimmed.max_len)),
        ("trimmed_bound", str(ceil_log2(d.size) + 1)),
        ("l", str(params.block_len)),
        ("max_term", str(params.max_term)),
        ("t", f"{params.t_bits:.6f}"),
        ("epsilon", str(params.epsilon)),
        ("delta_target", str(params.delta_target)),
        ("s", str(params.field_deg)),
        ("modulus", f"0x{params.modulus:X}"),
        ("modulus_table", str(MODULUS_TABLE_ID)),
        ("k_impl", str(params.key_bits)),
        ("k_theory4", str(params.theory_key_bits(4))),
        ("k_theory5", str(params.theory_key_bits(5))),
        ("k_theory", str(params.theory_key_bits(args.margin))),
    ]
    if args.format == "machine":
        print("\n".join(f"{k}={v}" for k, v in pairs))
    else:
        width = max(len(k) for k, _ in pairs)
        print("\n".join(f"{k:<{width}} = {v}" for k, v in pairs))
    return EXIT_OK


def cmd_codebook(args) -> int:
    d = _load_distribution(args.distribution)
    cb = build_shannon(d)
    if args.kind in ("tree", "trimmed"):
        cb = trim_tree(cb)
    if args.kind == "trimmed":
        cb = build_trimmed(cb)
    for rank, sym in enumerate(cb.sorted_symbols, start=1):
        cw = cb.table[sym]
        print(f"{rank} {sym} {d.prob_of(sym)} {cw} {len(cw)}")
    return EXIT_OK


def cmd_keygen(args) -> int:
    d = _load_distribution(args.distribution)
    params = derive_params(d, parse_epsilon(args.epsilon))
    key = keygen(params, _rng(args.seed))
    save_key(args.output, key, params.field_deg)
    return EXIT_OK


def _used_marker(key_path: str) -> str:
    return key_path + ".used"


def cmd_encrypt(args) -> int:
    d = _load_distribution(args.distribution)
    params = derive_params(d, parse_epsilon(args.epsilon))
    key, key_deg = load_key(args.key)
    if key_deg != params.field_deg:
        raise ParameterMismatchError(
            f"key file degree {key_deg} != derived degree {params.field_deg}"
        )
    marker = _used_marker(args.key)
    if os.path.exists(marker):
        if not args.force_reuse:
            print(
                f"refusing to reuse one-time key {args.key} "
                "(marker file present; --force-reuse overrides)",
                file=sys.stderr,
            )
            return EXIT_REFUSED
        print(
            "WARNING: reusing a one-time key; all security guarantees are void",
            file=sys.stderr,
        )
    if args.message_file is not None:
        with open(args.message_file, "r", encoding="utf-8") as fh:
            literal = fh.read()
    else:
        literal = args.message
    message = _parse_message(literal, d)
    envelope = encrypt(d, params, KeyHandle(key), message, _rng(args.seed))
    with open(args.output, "wb") as fh:
        fh.write(envelope.to_bytes())
    with open(marker, "a", encoding="utf-8"):
        pass
    return EXIT_OK


def cmd_decrypt(args) -> int:
    d = _load_distribution(args.distribution)
    params = derive_params(d, parse_epsilon(args.epsilon))
    key, key_deg = load_key(args.key)
    if key_deg != params.field_deg:
        raise ParameterMismatchError(
            f"key file degree {key_deg} != derived degree {params.field_deg}"
        )
    with open(args.input, "rb") as fh:
        envelope = CiphertextEnvelope.from_bytes(fh.read())
    print(decrypt(d, params, key, envelope))
    return EXIT_OK


def cmd_verify(args) -> int:
    d = _load_distribution(args.distribution)
    params = derive_params(d, parse_epsilon(args.epsilon))
    pads = None
    if args.control == "constant":
        pads = [0]
    elif args.control == "otp":
        pads = list(range(1 << params.block_len))
    if args.monte_carlo is not None:
        if pads is not None:
            print("--control requires exact mode", file=sys.stderr)
            return EXIT_INPUT
        report = monte_carlo_sd(d, params, args.monte_carlo, args.seed or 0)
        status = EXIT_OK
    else:
        try:
            report = check_indistinguishability(d, params, pads=pads, budget=args.budget)
            if args.chain:
                sd_block, sd_symbols = chain_distances(d, params, pads=pads, budget=args.budget)
                report.chain_sd_block = sd_block
                report.chain_sd_symbols = sd_symbols
                report.chain_ok = sd_symbols <= sd_block
        except BudgetExceededError as exc:
            print(f"{exc}; try --monte-carlo N", file=sys.stderr)
            return EXIT_INPUT
        status = EXIT_OK if report.passed else EXIT_FAIL
    print(report.format_machine() if args.format == "machine" else report.format_text())
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecs",
        description="entropically secure short-key cipher: analysis, "
        "encryption, and exact indistinguishability verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, epsilon=True):
        p.add_argument("-d", "--distribution", required=True, help="distribution file (ECSD)")
        if epsilon:
            p.add_argument(
                "--epsilon", required=True, help="security level, 'A/B' or '2^-c'"
            )

    p = sub.add_parser("analyze", help="derive and print cipher parameters")
    common(p)
    p.add_argument("--margin", type=int, choices=(4, 5), default=4)
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("codebook", help="dump a codebook table")
    common(p, epsilon=False)
    p.add_argument("--kind", choices=("raw", "tree", "trimmed"), default="trimmed")
    p.set_defaults(func=cmd_codebook)

    p = sub.add_parser("keygen", help="generate a one-time key file")
    common(p)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--seed", type=int, default=None, help="deterministic test seed")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt a single message")
    common(p)
    p.add_argument("--key", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--message", help="bit-string, 0x-hex, or abstract index")
    group.add_argument("--message-file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--force-reuse", action="store_true")
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt an envelope and print the symbol")
    common(p)
    p.add_argument("--key", required=True)
    p.add_argument("-i", "--input", required=True)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("verify", help="certify or estimate indistinguishability")
    common(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--monte-carlo", type=int, metavar="N", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--chain", action="store_true", help="also print both chain distances")
    p.add_argument(
        "--control",
        choices=("constant", "otp"),
        default=None,
        help="replace the derived pad family with a diagnostic one: a "
        "constant pad (must FAIL on skewed inputs) or a full one-time pad "
        "(always distance zero)",
    )
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except KeyReuseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (EcsError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
