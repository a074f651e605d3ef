"""Block reads from a pool of hex digits.

Three pools share one interface:

* ``computed``  - digits of pi produced on demand by the BBP engine
* ``pi_file``   - a precomputed file of pi's fractional hex digits
* ``pool_file`` - any shared file of hex digits (e.g. from a hardware RNG)

Digit files hold ASCII hex (either case) with arbitrary whitespace and
nothing else.  A pi file starts at the first fractional digit ('2'); the
leading "3." is not part of the format.
"""

from __future__ import annotations

import enum
import os
import re
from dataclasses import dataclass
from pathlib import Path

from . import bbp
from .bbp import DigitBlock
from .errors import BoundsError, DigitFileError, ValidationError

# Largest 5-hex-digit address plus one default pad length.
DEFAULT_POOL_DIGITS = 16**5 + 256

_WHITESPACE = b" \t\n\r\v\f"
_NON_HEX = re.compile(rb"[^0-9a-fA-F \t\n\r\v\f]")
_HEX_TO_NIBBLE = bytes.maketrans(b"0123456789abcdefABCDEF", bytes(range(16)) + bytes(range(10, 16)))


class SourceKind(str, enum.Enum):
    COMPUTED = "computed"
    PI_FILE = "pi_file"
    POOL_FILE = "pool_file"


@dataclass(frozen=True)
class DigitSourceSpec:
    kind: SourceKind
    path: Path | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", SourceKind(self.kind))
        if self.kind is SourceKind.COMPUTED:
            if self.path is not None:
                raise ValidationError("computed sources take no path")
        elif self.path is None:
            raise ValidationError(f"{self.kind.value} sources require a path")
        else:
            object.__setattr__(self, "path", Path(self.path))


class DigitSource:
    """Immutable handle over a digit pool."""

    kind: SourceKind
    validity_limit: int

    def read_block(self, position: int, length: int) -> DigitBlock:
        if position < 0 or length < 1:
            raise BoundsError(f"invalid read of {length} digits at {position}", self.validity_limit)
        if position + length > self.validity_limit:
            raise BoundsError(
                f"read of {length} digits at {position} passes the source limit "
                f"of {self.validity_limit} digits",
                self.validity_limit,
            )
        return self._read(position, length)

    def _read(self, position: int, length: int) -> DigitBlock:
        raise NotImplementedError


class ComputedSource(DigitSource):
    kind = SourceKind.COMPUTED
    validity_limit = bbp.MAX_POSITION

    def __init__(self, config: bbp.BbpEngineConfig = bbp.DEFAULT_CONFIG):
        self.config = config

    def _read(self, position, length):
        return bbp.pi_hex_at(position, length, self.config)

    def __repr__(self):
        return f"ComputedSource(limit={self.validity_limit})"


class FileSource(DigitSource):
    def __init__(self, kind: SourceKind, path: Path, nibbles: bytes):
        self.kind = kind
        self.path = path
        self._nibbles = nibbles
        self.validity_limit = len(nibbles)

    def _read(self, position, length):
        return DigitBlock(position, self._nibbles[position:position + length])

    def __repr__(self):
        return f"FileSource({self.kind.value}, {str(self.path)!r}, limit={self.validity_limit})"


def parse_digits(raw: bytes) -> bytes:
    """Hex text -> nibble values, one per byte.  Whitespace is dropped."""
    bad = _NON_HEX.search(raw)
    if bad:
        ch = raw[bad.start():bad.start() + 1]
        raise DigitFileError(f"non-hex character {ch!r} at byte offset {bad.start()}", bad.start())
    return raw.translate(_HEX_TO_NIBBLE, _WHITESPACE)


def load_digit_file(path: str | os.PathLike) -> bytes:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except FileNotFoundError:
        raise DigitFileError(f"digit file not found: {path}") from None
    except OSError as exc:
        raise DigitFileError(f"cannot read digit file {path}: {exc.strerror}") from None
    try:
        return parse_digits(raw)
    except DigitFileError as exc:
        raise DigitFileError(f"{path}: {exc}", exc.offset) from None


def open_source(spec: DigitSourceSpec, config: bbp.BbpEngineConfig = bbp.DEFAULT_CONFIG) -> DigitSource:
    if spec.kind is SourceKind.COMPUTED:
        return ComputedSource(config)
    return FileSource(spec.kind, spec.path, load_digit_file(spec.path))


def read_block(source: DigitSource, position: int, length: int) -> DigitBlock:
    return source.read_block(position, length)


# ---------------------------------------------------------------------------
# Digit file generation
# ---------------------------------------------------------------------------

# Above this count the BBP engine's quadratic prefix cost stops being
# reasonable and the MPFR constant is used instead.
BBP_PREFIX_LIMIT = 16384


def pi_hex_prefix(count: int, engine: str = "auto") -> str:
    """The first ``count`` fractional hex digits of pi.

    ``engine`` is "bbp" (digit extraction, quadratic in count), "mpfr"
    (full-precision constant via gmpy2) or "auto".
    """
    if count < 1:
        raise ValidationError(f"count must be positive, got {count}")
    if engine == "auto":
        engine = "bbp" if count <= BBP_PREFIX_LIMIT else "mpfr"
    if engine == "bbp":
        return bbp.pi_hex_at(0, count).hex()
    if engine == "mpfr":
        return _pi_hex_mpfr(count)
    raise ValidationError(f"unknown engine {engine!r}")


def _pi_hex_mpfr(count: int) -> str:
    import gmpy2

    guard = 16
    bits = 4 * (count + guard)
    with gmpy2.context(gmpy2.get_context(), precision=bits + 64):
        frac = gmpy2.const_pi() - 3
        scaled = gmpy2.mpz(gmpy2.floor(frac * gmpy2.mpz(2) ** bits))
    return scaled.digits(16).zfill(count + guard)[:count]


def write_digit_file(path: str | os.PathLike, digits: str, line_width: int = 64) -> None:
    lines = [digits[i:i + line_width] for i in range(0, len(digits), line_width)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")
