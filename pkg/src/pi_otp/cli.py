"""Command-line interface: ``pi-otp <subcommand> ...``."""

from __future__ import annotations

import argparse
import getpass
import os
import sys
import time
from pathlib import Path

from . import digit_source, pad, stats, stego
from .bbp import pi_hex_at
from .digit_source import DigitSourceSpec, SourceKind, open_source
from .errors import PiOtpError, ValidationError

EXIT_IO = 8

_SOURCE_KINDS = {"computed": SourceKind.COMPUTED, "pi-file": SourceKind.PI_FILE, "pool-file": SourceKind.POOL_FILE}


def _source_spec(values: list[str]) -> DigitSourceSpec:
    kind = values[0]
    if kind not in _SOURCE_KINDS:
        raise ValidationError(f"--source must be computed, pi-file PATH or pool-file PATH, got {kind!r}")
    if kind == "computed":
        if len(values) != 1:
            raise ValidationError("--source computed takes no path")
        return DigitSourceSpec(SourceKind.COMPUTED)
    if len(values) != 2:
        raise ValidationError(f"--source {kind} needs exactly one PATH")
    return DigitSourceSpec(_SOURCE_KINDS[kind], Path(values[1]))


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _write_output(path: str, data: bytes) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(path).write_bytes(data)


def _collect_passphrases(args) -> list[str]:
    phrases = list(args.passphrases)
    if args.passphrase_env:
        value = os.environ.get(args.passphrase_env)
        if value is None:
            raise ValidationError(f"environment variable {args.passphrase_env} is not set")
        phrases += [line for line in value.split("\n") if line]
    if args.prompt:
        for i in range(1, args.prompt + 1):
            phrases.append(getpass.getpass(f"Enter passphrase {i}: "))
    if not phrases:
        raise ValidationError("genpad needs at least one passphrase")
    return phrases


def cmd_genpad(args) -> int:
    phrases = _collect_passphrases(args)
    begin = time.perf_counter()
    source = open_source(_source_spec(args.source))
    config = pad.PadConfig(pad_nibbles=args.nibbles, rounds=len(phrases))
    if args.verbose:
        print(f"Rounds = {config.rounds}", file=sys.stderr)
    otp = pad.generate_pad(phrases, config, source)
    out = Path(args.out) if args.out else Path(pad.default_pad_filename())
    pad.write_pad(otp, out)
    if args.verbose:
        print(f"Computation time = {time.perf_counter() - begin:.3f} seconds", file=sys.stderr)
    print(out)
    return 0


def cmd_digits(args) -> int:
    print(pi_hex_at(args.at, args.count).hex())
    return 0


def cmd_mkdigits(args) -> int:
    begin = time.perf_counter()
    digits = digit_source.pi_hex_prefix(args.count, args.engine)
    digit_source.write_digit_file(args.out, digits)
    if args.verbose:
        print(f"wrote {args.count} digits in {time.perf_counter() - begin:.3f} seconds", file=sys.stderr)
    print(args.out)
    return 0


def cmd_xor(args) -> int:
    otp = pad.read_pad(args.pad)
    _write_output(args.out, pad.apply_pad(_read_input(args.input), otp))
    return 0


def cmd_phrase(args) -> int:
    raw = _read_input(args.doc)
    if args.byte_offset is not None:
        phrase_bytes = stego.extract_bytes(raw, args.byte_offset, args.length)
        print(phrase_bytes.hex())
    else:
        if args.start is None:
            raise ValidationError("phrase needs --start (or --byte-offset)")
        doc = stego.DocumentText.from_form_feeds(raw.decode(args.encoding))
        sel = stego.PhraseSelector(start_word=args.start, word_count=args.words, page=args.page)
        phrase = stego.extract_phrase(doc, sel)
        phrase_bytes = phrase.encode("utf-8")
        print(phrase)
    if args.hash:
        print(pad.hash_passphrase(phrase_bytes).hex)
    return 0


def cmd_stats(args) -> int:
    nibbles = b"".join(digit_source.parse_digits(_read_input(p)) for p in args.inputs)
    data = pad.OneTimePad(nibbles).to_bytes()
    hist = stats.byte_histogram(data)
    summary = stats.summarize(hist)
    try:
        chi2 = stats.chi_square_uniform(hist)
    except PiOtpError:
        chi2 = None
    chi_text = f"{chi2:.3f}" if chi2 is not None else "n/a (needs >= 1280 bytes)"
    print(f"bytes            {summary.total}")
    print(f"mean per value   {summary.mean:.3f}")
    print(f"std deviation    {summary.stddev:.3f}")
    print(f"coeff. variation {summary.cv:.4f} ({100 * summary.cv:.2f}%)")
    print(f"chi-square(255)  {chi_text}")
    print()
    print(f"total={summary.total}")
    print(f"mean={summary.mean!r}")
    print(f"stddev={summary.stddev!r}")
    print(f"cv={summary.cv!r}")
    print(f"chi_square={chi2!r}" if chi2 is not None else "chi_square=nan")
    if args.histogram:
        print()
        for value, count in enumerate(hist.counts):
            print(value, count)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pi-otp",
        description="One-time pads from passphrase-addressed blocks of pi's hex digits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("genpad", help="generate a pad from one passphrase per round")
    p.add_argument("passphrases", nargs="*", help="one passphrase per round")
    p.add_argument("--passphrase-env", metavar="VAR",
                   help="read newline-separated passphrases from an environment variable")
    p.add_argument("--prompt", type=int, metavar="ROUNDS", default=0,
                   help="prompt (without echo) for this many passphrases")
    p.add_argument("--source", nargs="+", default=["computed"], metavar="KIND",
                   help="computed | pi-file PATH | pool-file PATH (default: computed)")
    p.add_argument("--nibbles", type=int, default=pad.DEFAULT_PAD_NIBBLES, help="pad length in hex digits")
    p.add_argument("--out", help="pad file (default: OTP_YYYYmmdd-HHMMSS.txt)")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_genpad)

    p = sub.add_parser("digits", help="print hex digits of pi at a position")
    p.add_argument("--at", type=int, required=True, help="0-based position (0 is the first digit after the point)")
    p.add_argument("--count", type=int, required=True)
    p.set_defaults(func=cmd_digits)

    p = sub.add_parser("mkdigits", help="write a file of pi's leading hex digits")
    p.add_argument("--count", type=int, default=digit_source.DEFAULT_POOL_DIGITS)
    p.add_argument("--out", required=True)
    p.add_argument("--engine", choices=("auto", "bbp", "mpfr"), default="auto")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_mkdigits)

    for name in ("encrypt", "decrypt"):
        p = sub.add_parser(name, help=f"{name} a file with a pad (XOR)")
        p.add_argument("--pad", required=True)
        p.add_argument("--in", dest="input", required=True, help="input file or -")
        p.add_argument("--out", required=True, help="output file or -")
        p.set_defaults(func=cmd_xor)

    p = sub.add_parser("phrase", help="pick a passphrase out of a shared document")
    p.add_argument("--doc", required=True, help="plain-text document (pages split by form feeds) or -")
    p.add_argument("--page", type=int)
    p.add_argument("--start", type=int, help="1-based word number")
    p.add_argument("--words", type=int, default=1)
    p.add_argument("--byte-offset", type=int, help="take raw bytes instead of words")
    p.add_argument("--length", type=int, default=16, help="byte count for --byte-offset")
    p.add_argument("--encoding", default="utf-8")
    p.add_argument("--hash", action="store_true", help="also print the SHA-256 digest")
    p.set_defaults(func=cmd_phrase)

    p = sub.add_parser("stats", help="byte histogram statistics of pad files or hex streams")
    p.add_argument("--in", dest="inputs", action="append", required=True, help="hex file or - (repeatable)")
    p.add_argument("--histogram", action="store_true", help="dump 256 'value count' lines")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PiOtpError as exc:
        print(f"pi-otp: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"pi-otp: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except UnicodeDecodeError as exc:
        print(f"pi-otp: error: cannot decode input: {exc}", file=sys.stderr)
        return ValidationError.exit_code


if __name__ == "__main__":
    sys.exit(main())
