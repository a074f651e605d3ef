"""Byte-histogram diagnostics for pad output, and keyspace counting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .digit_source import DigitSource
from .errors import DomainError, ValidationError
from .pad import PadConfig, generate_pad

BINS = 256
MIN_EXPECTED_PER_BIN = 5


@dataclass(frozen=True)
class ByteHistogram:
    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if len(counts) != BINS or min(counts) < 0:
            raise ValidationError("a byte histogram has 256 non-negative bins")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __add__(self, other: ByteHistogram) -> ByteHistogram:
        return ByteHistogram(tuple(a + b for a, b in zip(self.counts, other.counts)))


@dataclass(frozen=True)
class HistogramSummary:
    total: int
    mean: float
    stddev: float
    cv: float


def byte_histogram(data: bytes) -> ByteHistogram:
    arr = np.frombuffer(bytes(data), dtype=np.uint8)
    return ByteHistogram(tuple(np.bincount(arr, minlength=BINS).tolist()))


def summarize(h: ByteHistogram) -> HistogramSummary:
    """Mean count per bin, population stddev across bins, and their ratio."""
    total = h.total
    if total == 0:
        raise DomainError("cannot summarize an empty histogram")
    mean = total / BINS
    # Exact sum of squared deviations, scaled by 256 to stay integral.
    ss = sum((BINS * c - total) ** 2 for c in h.counts)
    stddev = math.sqrt(ss / BINS**3)
    return HistogramSummary(total, mean, stddev, stddev / mean)


def chi_square_uniform(h: ByteHistogram) -> float:
    """Pearson statistic against a flat distribution (255 degrees of freedom)."""
    total = h.total
    if total < BINS * MIN_EXPECTED_PER_BIN:
        raise DomainError(
            f"chi-square needs at least {BINS * MIN_EXPECTED_PER_BIN} bytes "
            f"({MIN_EXPECTED_PER_BIN} expected per bin), got {total}"
        )
    # sum (c - N/256)^2 / (N/256) == sum (256c - N)^2 / (256 N)
    return sum((BINS * c - total) ** 2 for c in h.counts) / (BINS * total)


def keyspace_size(n: int, k: int) -> int:
    """Number of ways to choose k of n blocks, C(n, k), exactly."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if not 0 <= k <= n:
        raise DomainError(f"k must satisfy 0 <= k <= n, got k={k}, n={n}")
    return math.comb(n, k)


def scientific(value: int, digits: int = 3) -> str:
    """Render a (possibly huge) positive integer as 'd.dd x 10^e' without floats."""
    if value < 1:
        raise DomainError("scientific rendering is for positive integers")
    s = str(value)
    exponent = len(s) - 1
    if len(s) > digits:
        # Round half up on the first dropped digit.
        head = int(s[:digits]) + (s[digits] >= "5")
        if len(str(head)) > digits:
            head //= 10
            exponent += 1
        s = str(head)
    mantissa = s[0] + ("." + s[1:digits] if digits > 1 and len(s) > 1 else "")
    return f"{mantissa} x 10^{exponent}"


def log10_int(value: int) -> float:
    """log10 of an arbitrarily large positive integer."""
    if value < 1:
        raise DomainError("log10 is defined here for positive integers only")
    shift = max(0, value.bit_length() - 64)
    return math.log10(value >> shift) + shift * math.log10(2)


# ---------------------------------------------------------------------------
# Reproduction harness: concatenate pads from timestamp+counter passphrases.
# ---------------------------------------------------------------------------

def harness_passphrases(timestamp: str = "202103142347", first: int = 0) -> Iterator[str]:
    counter = first
    while True:
        yield f"{timestamp}{counter}"
        counter += 1


def pad_stream(total_bytes: int, source: DigitSource, timestamp: str = "202103142347",
               config: PadConfig = PadConfig()) -> bytes:
    """``total_bytes`` bytes from back-to-back pads (last pad truncated)."""
    if config.rounds != 1:
        raise ValidationError("the harness draws single-round pads")
    out = bytearray()
    phrases = harness_passphrases(timestamp)
    while len(out) < total_bytes:
        out += generate_pad([next(phrases)], config, source).to_bytes()
    return bytes(out[:total_bytes])
