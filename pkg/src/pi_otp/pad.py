"""One-time pads from passphrase-addressed blocks of a digit pool.

For each round the passphrase's SHA-256 digest is cut into ten 5-hex-digit
addresses.  From the second round on, each address is XORed with five
nibbles of the pad built so far.  The pool blocks at the ten addresses are
XORed into the pad.
"""

from __future__ import annotations

import hashlib
import os
import re
import time
from dataclasses import dataclass
from functools import reduce
from pathlib import Path
from typing import Sequence

import numpy as np

from .bbp import DigitBlock
from .digit_source import DigitSource
from .errors import CapacityError, ValidationError

ADDRESS_COUNT = 10
ADDRESS_DIGITS = 5
ADDRESS_SPACE = 16**ADDRESS_DIGITS
DEFAULT_PAD_NIBBLES = 256

_DIGEST_RE = re.compile(r"[0-9a-f]{64}")


def _as_bytes(passphrase: str | bytes) -> bytes:
    if isinstance(passphrase, str):
        return passphrase.encode("utf-8")
    return bytes(passphrase)


@dataclass(frozen=True)
class PassphraseDigest:
    hex: str

    def __post_init__(self):
        if not _DIGEST_RE.fullmatch(self.hex):
            raise ValidationError("digest must be 64 lowercase hex characters")

    def __str__(self):
        return self.hex


@dataclass(frozen=True)
class AddressSet:
    addresses: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "addresses", tuple(int(a) for a in self.addresses))
        if len(self.addresses) != ADDRESS_COUNT:
            raise ValidationError(f"expected {ADDRESS_COUNT} addresses, got {len(self.addresses)}")
        if any(not 0 <= a < ADDRESS_SPACE for a in self.addresses):
            raise ValidationError("addresses must lie in [0, 16**5)")

    def __iter__(self):
        return iter(self.addresses)

    def __getitem__(self, i):
        return self.addresses[i]


@dataclass(frozen=True)
class PadConfig:
    pad_nibbles: int = DEFAULT_PAD_NIBBLES
    rounds: int = 1

    def __post_init__(self):
        if self.pad_nibbles < 1:
            raise ValidationError(f"pad_nibbles must be positive, got {self.pad_nibbles}")
        if self.rounds < 1:
            raise ValidationError(f"rounds must be at least 1, got {self.rounds}")


@dataclass(frozen=True)
class OneTimePad:
    """Pad nibbles plus where they came from.  Passphrases are never kept."""

    nibbles: bytes
    source_kind: str = "unknown"
    rounds: int = 1

    def __post_init__(self):
        if self.nibbles and max(self.nibbles) > 15:
            raise ValidationError("pad nibbles must lie in [0, 15]")

    @classmethod
    def zeros(cls, n: int) -> OneTimePad:
        return cls(bytes(n))

    @classmethod
    def from_hex(cls, text: str, source_kind: str = "unknown", rounds: int = 1) -> OneTimePad:
        return cls(DigitBlock.from_hex(text).nibbles, source_kind, rounds)

    def __len__(self):
        return len(self.nibbles)

    def hex(self) -> str:
        return DigitBlock(None, self.nibbles).hex()

    def as_block(self) -> DigitBlock:
        return DigitBlock(None, self.nibbles)

    def to_bytes(self) -> bytes:
        """Pair nibbles big-endian into bytes; an odd trailing nibble is dropped."""
        arr = np.frombuffer(self.nibbles, dtype=np.uint8)
        n = len(arr) // 2 * 2
        return ((arr[0:n:2] << 4) | arr[1:n:2]).tobytes()

    def __xor__(self, other: OneTimePad) -> OneTimePad:
        block = xor_combine([self.as_block(), other.as_block()])
        return OneTimePad(block.nibbles, self.source_kind, self.rounds)


def hash_passphrase(passphrase: str | bytes) -> PassphraseDigest:
    """SHA-256 of the passphrase bytes exactly as given (no newline added)."""
    data = _as_bytes(passphrase)
    if not data:
        raise ValidationError("passphrase must not be empty")
    return PassphraseDigest(hashlib.sha256(data).hexdigest())


def derive_addresses(digest: PassphraseDigest) -> AddressSet:
    h = digest.hex
    return AddressSet(tuple(
        int(h[ADDRESS_DIGITS * i:ADDRESS_DIGITS * (i + 1)], 16) for i in range(ADDRESS_COUNT)
    ))


def chain_addresses(addresses: AddressSet, previous_pad: OneTimePad) -> AddressSet:
    """XOR address i with pad nibbles 5i..5i+4 read as a big-endian 20-bit value."""
    need = ADDRESS_COUNT * ADDRESS_DIGITS
    if len(previous_pad) < need:
        raise ValidationError(f"chaining needs a pad of at least {need} nibbles, got {len(previous_pad)}")
    nib = previous_pad.nibbles
    out = []
    for i, a in enumerate(addresses):
        packed = 0
        for nibble in nib[ADDRESS_DIGITS * i:ADDRESS_DIGITS * (i + 1)]:
            packed = (packed << 4) | nibble
        out.append(a ^ packed)
    return AddressSet(tuple(out))


def xor_combine(blocks: Sequence[DigitBlock]) -> DigitBlock:
    if not blocks:
        raise ValidationError("nothing to combine")
    n = len(blocks[0])
    if any(len(b) != n for b in blocks):
        raise ValidationError("blocks must all have the same length")
    acc = reduce(np.bitwise_xor, (b.array() for b in blocks))
    return DigitBlock(None, acc.tobytes())


def generate_pad(passphrases: Sequence[str | bytes], config: PadConfig, source: DigitSource) -> OneTimePad:
    if len(passphrases) != config.rounds:
        raise ValidationError(f"{config.rounds} round(s) need {config.rounds} passphrase(s), got {len(passphrases)}")
    need = ADDRESS_SPACE + config.pad_nibbles
    if source.validity_limit < need:
        raise ValidationError(
            f"source holds {source.validity_limit} digits; {need} are needed for "
            f"{config.pad_nibbles}-nibble pads"
        )
    if config.rounds > 1 and config.pad_nibbles < ADDRESS_COUNT * ADDRESS_DIGITS:
        raise ValidationError("multi-round pads need at least 50 nibbles for address chaining")

    pad = OneTimePad.zeros(config.pad_nibbles)
    for k, passphrase in enumerate(passphrases):
        addresses = derive_addresses(hash_passphrase(passphrase))
        if k > 0:
            # Round 0 would XOR with the all-zero pad, a no-op.
            addresses = chain_addresses(addresses, pad)
        blocks = [source.read_block(a, config.pad_nibbles) for a in addresses]
        pad = OneTimePad(xor_combine([pad.as_block(), *blocks]).nibbles)
    return OneTimePad(pad.nibbles, source.kind.value, config.rounds)


def apply_pad(message: bytes, pad: OneTimePad) -> bytes:
    """XOR ``message`` with the pad's bytes.  Encryption and decryption alike."""
    key = pad.to_bytes()
    if len(message) > len(key):
        raise CapacityError(f"message of {len(message)} bytes exceeds pad capacity of {len(key)} bytes")
    msg = np.frombuffer(message, dtype=np.uint8)
    return (msg ^ np.frombuffer(key, dtype=np.uint8)[:len(msg)]).tobytes()


# ---------------------------------------------------------------------------
# Pad files: lowercase hex, no separators, optional trailing newline.
# ---------------------------------------------------------------------------

def default_pad_filename(when: float | None = None) -> str:
    return time.strftime("OTP_%Y%m%d-%H%M%S.txt", time.localtime(when))


def write_pad(pad: OneTimePad, path: str | os.PathLike) -> Path:
    path = Path(path)
    path.write_text(pad.hex() + "\n", encoding="ascii")
    return path


def read_pad(path: str | os.PathLike) -> OneTimePad:
    text = Path(path).read_text(encoding="ascii")
    if text.endswith("\n"):
        text = text[:-1]
    if not re.fullmatch(r"[0-9a-f]*", text):
        raise ValidationError(f"{path}: pad files hold lowercase hex digits only")
    if not text:
        raise ValidationError(f"{path}: empty pad file")
    return OneTimePad.from_hex(text, source_kind="file")

