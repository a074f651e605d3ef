"""Hexadecimal digits of pi at arbitrary positions via the BBP series.

    pi = sum_k 16^-k * (4/(8k+1) - 2/(8k+4) - 1/(8k+5) - 1/(8k+6))

The fractional part of 16^n * pi is assembled from four series
S_m(n) = sum_k 16^(n-k)/(8k+m).  Terms with k < n are reduced with
16^(n-k) mod (8k+m) so only residues are ever handled; terms with k >= n
form a rapidly shrinking tail.

Positions are 0-based: position 0 is the '2' of 0x3.243f6a88...

Accuracy note: the residues are exact integers, and each term r/ak is
accumulated as a 64-bit fixed-point fraction rounded to nearest.  The
accumulated error over 2^24 terms stays near 2^-52, so the 8 digits taken
per evaluation are reliable far past the point where plain double
accumulation starts flipping the last digit.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError

__all__ = [
    "HEX_ALPHABET",
    "MAX_POSITION",
    "MAX_MODULUS",
    "BbpEngineConfig",
    "DigitBlock",
    "DEFAULT_CONFIG",
    "mod_pow16",
    "series_sum",
    "fraction_to_hex",
    "pi_hex_at",
    "pi_fractions_at",
]

HEX_ALPHABET = "0123456789abcdef"

# Positions (and position + count) must stay at or below this bound.
MAX_POSITION = 1 << 24
# Modulus bound of the double-precision exponentiation routine.
MAX_MODULUS = 1 << 24

_POWERS_OF_TWO = tuple(float(1 << i) for i in range(25))
_SERIES_M = (1, 4, 5, 6)
_TAIL_TERMS = 100
_MASK64 = (1 << 64) - 1
# Below this many modular exponentiations the interpreter beats JIT warm-up.
_PURE_PYTHON_WORK = 40_000
# Evaluations per kernel call; bounds the quadratic cost of the
# short-exponent terms inside one chunk.
_EVALS_PER_CHUNK = 64


@dataclass(frozen=True)
class BbpEngineConfig:
    digits_per_evaluation: int = 8
    hex_window: int = 16
    series_epsilon: float = 1e-17

    def __post_init__(self):
        if not 1 <= self.digits_per_evaluation <= self.hex_window:
            raise DomainError(
                f"digits_per_evaluation must be in [1, hex_window={self.hex_window}], "
                f"got {self.digits_per_evaluation}"
            )
        if self.digits_per_evaluation > 10:
            raise DomainError("digits_per_evaluation above 10 exceeds double-precision reliability")
        if not 1 <= self.hex_window <= 16:
            raise DomainError(f"hex_window must be in [1, 16], got {self.hex_window}")
        if not self.series_epsilon > 0:
            raise DomainError("series_epsilon must be positive")


DEFAULT_CONFIG = BbpEngineConfig()


@dataclass(frozen=True)
class DigitBlock:
    """A run of hex digits (nibble values 0-15 stored one per byte).

    ``start`` is the pool position of the first digit, or None for blocks
    that were derived rather than read (e.g. an XOR of several blocks).
    """

    start: int | None
    nibbles: bytes

    def __post_init__(self):
        if self.nibbles and max(self.nibbles) > 15:
            raise DomainError("nibble values must lie in [0, 15]")

    @classmethod
    def from_hex(cls, text: str, start: int | None = None) -> DigitBlock:
        return cls(start, bytes.fromhex("".join("0" + c for c in text)))

    def hex(self) -> str:
        return self.nibbles.translate(_NIBBLE_TO_ASCII).decode("ascii")

    def array(self) -> np.ndarray:
        return np.frombuffer(self.nibbles, dtype=np.uint8)

    def __len__(self) -> int:
        return len(self.nibbles)

    def __str__(self) -> str:
        return self.hex()


_NIBBLE_TO_ASCII = bytes(HEX_ALPHABET.encode("ascii")) + bytes(240)


def mod_pow16(p: int, ak: int) -> float:
    """16**p mod ak by left-to-right binary exponentiation in doubles.

    Exact while ak <= 2**24, since every intermediate product then fits
    in the 53-bit mantissa.
    """
    if ak < 1 or ak > MAX_MODULUS:
        raise DomainError(f"modulus {ak} outside [1, 2**24]; doubles are exact only up to 2**24")
    if p < 0:
        raise DomainError(f"exponent must be non-negative, got {p}")
    if p >= 2 * _POWERS_OF_TWO[-1]:
        raise DomainError(f"exponent {p} exceeds the 2**25 power table")
    ak = float(ak)
    if ak == 1.0:
        return 0.0
    if p == 0:
        return 1.0

    i = 0
    while _POWERS_OF_TWO[i] <= p:
        i += 1
        if i == len(_POWERS_OF_TWO):
            break
    pt = _POWERS_OF_TWO[i - 1]
    p1 = float(p)
    r = 1.0
    for _ in range(i):
        if p1 >= pt:
            r = 16.0 * r
            r = r - math.floor(r / ak) * ak
            p1 -= pt
        pt *= 0.5
        if pt >= 1.0:
            r = r * r
            r = r - math.floor(r / ak) * ak
    return r


def fraction_to_hex(x: float, count: int) -> str:
    """First ``count`` hex digits of the fractional part of |x|."""
    if count < 1 or count > 16:
        raise DomainError(f"count must be in [1, 16], got {count}")
    y = abs(x)
    out = []
    for _ in range(count):
        y = 16.0 * (y - math.floor(y))
        out.append(HEX_ALPHABET[int(y)])
    return "".join(out)


# ---------------------------------------------------------------------------
# Kernel.  Written in the subset of Python that numba compiles; the same
# functions run uncompiled for small workloads.  Every step is exact integer
# arithmetic (the float products only estimate quotients, then get
# corrected), so the compiled and interpreted paths agree bit for bit.
# ---------------------------------------------------------------------------


def _mulmod(a, b, m, inv):
    prod = a * b
    r = prod - int(prod * inv) * m
    if r < 0:
        r += m
    elif r >= m:
        r -= m
    return r


def _divmod_est(num, m, inv):
    q = int(num * inv)
    r = num - q * m
    if r < 0:
        q -= 1
        r += m
    elif r >= m:
        q += 1
        r -= m
    return q, r


def _powmod16(e, ak, inv):
    if ak == 1:
        return 0
    if e == 0:
        return 1
    pt = 1
    while pt * 2 <= e:
        pt *= 2
    p1 = e
    r = 1
    while True:
        if p1 >= pt:
            r = _mulmod(r, 16, ak, inv)
            p1 -= pt
        pt //= 2
        if pt == 0:
            break
        r = _mulmod(r, r, ak, inv)
    return r


def _powmod16_x4(e, a1, a4, a5, a6, i1, i4, i5, i6):
    # Four moduli, one exponent: same bit walk, four independent chains.
    # All moduli here exceed 1.
    r1 = r4 = r5 = r6 = 1
    if e == 0:
        return r1, r4, r5, r6
    pt = 1
    while pt * 2 <= e:
        pt *= 2
    p1 = e
    while True:
        if p1 >= pt:
            r1 = _mulmod(r1, 16, a1, i1)
            r4 = _mulmod(r4, 16, a4, i4)
            r5 = _mulmod(r5, 16, a5, i5)
            r6 = _mulmod(r6, 16, a6, i6)
            p1 -= pt
        pt //= 2
        if pt == 0:
            break
        r1 = _mulmod(r1, r1, a1, i1)
        r4 = _mulmod(r4, r4, a4, i4)
        r5 = _mulmod(r5, r5, a5, i5)
        r6 = _mulmod(r6, r6, a6, i6)
    return r1, r4, r5, r6


def _frac_limbs(r, ak, inv):
    # round(r * 2**64 / ak) for 0 <= r < ak, split into 32-bit limbs
    # (the low limb may equal 2**32 after rounding; callers just add it).
    hi, rem = _divmod_est(r << 32, ak, inv)
    lo, rem2 = _divmod_est(rem << 32, ak, inv)
    if 2 * rem2 >= ak:
        lo += 1
    return hi, lo


def _add_term(hi, lo, mi, j, r, ak, inv):
    h, l = _frac_limbs(r, ak, inv)
    hi[mi, j] += h
    lo[mi, j] += l


def _block_limbs(start, n_evals, step, eps, hi, lo):
    """Accumulate S_m at positions start + j*step, j < n_evals, into limbs.

    ``hi``/``lo`` are int64 arrays of shape (4, n_evals) filled with zeros;
    row order is m = 1, 4, 5, 6.
    """
    shift = 4 * step
    # k < start: one exponentiation per k, then step residues forward by
    # multiplying with 16^step mod ak.
    k0 = 0
    if start > 0:
        # k = 0 has modulus 1 for m = 1, which contributes nothing.
        for mi in range(1, 4):
            ak = 3 + mi if mi > 1 else 4
            inv = 1.0 / ak
            r = _powmod16(start, ak, inv)
            c = (1 << shift) % ak
            for j in range(n_evals):
                _add_term(hi, lo, mi, j, r, ak, inv)
                r = _mulmod(r, c, ak, inv)
        k0 = 1
    for k in range(k0, start):
        a1 = 8 * k + 1
        a4 = a1 + 3
        a5 = a1 + 4
        a6 = a1 + 5
        i1 = 1.0 / a1
        i4 = 1.0 / a4
        i5 = 1.0 / a5
        i6 = 1.0 / a6
        r1, r4, r5, r6 = _powmod16_x4(start - k, a1, a4, a5, a6, i1, i4, i5, i6)
        c1 = (1 << shift) % a1
        c4 = (1 << shift) % a4
        c5 = (1 << shift) % a5
        c6 = (1 << shift) % a6
        for j in range(n_evals):
            _add_term(hi, lo, 0, j, r1, a1, i1)
            _add_term(hi, lo, 1, j, r4, a4, i4)
            _add_term(hi, lo, 2, j, r5, a5, i5)
            _add_term(hi, lo, 3, j, r6, a6, i6)
            if j + 1 < n_evals:
                r1 = _mulmod(r1, c1, a1, i1)
                r4 = _mulmod(r4, c4, a4, i4)
                r5 = _mulmod(r5, c5, a5, i5)
                r6 = _mulmod(r6, c6, a6, i6)

    for mi in range(4):
        m = 1
        if mi == 1:
            m = 4
        elif mi == 2:
            m = 5
        elif mi == 3:
            m = 6
        for j in range(n_evals):
            ic = start + j * step
            # start <= k < ic: short exponents.
            for k in range(start, ic):
                ak = 8 * k + m
                inv = 1.0 / ak
                _add_term(hi, lo, mi, j, _powmod16(ic - k, ak, inv), ak, inv)
            # k >= ic: 16^(ic-k)/ak until the term drops under eps.
            for k in range(ic, ic + _TAIL_TERMS + 1):
                ak = 8 * k + m
                d = k - ic
                t = 16.0 ** (-d) / ak
                if t < eps:
                    break
                if d == 0:
                    _add_term(hi, lo, mi, j, 1 % ak, ak, 1.0 / ak)
                elif d <= 16:
                    v = ((1 << (64 - 4 * d)) + ak // 2) // ak
                    hi[mi, j] += v >> 32
                    lo[mi, j] += v & 0xFFFFFFFF


_KERNEL_HELPERS = ("_mulmod", "_divmod_est", "_powmod16", "_powmod16_x4", "_frac_limbs", "_add_term")
_compile_lock = threading.Lock()


@lru_cache(maxsize=1)
def _compiled_kernel():
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        return _block_limbs
    jit = numba.njit(cache=True, nogil=True)
    glb = _block_limbs.__globals__
    with _compile_lock:
        # Swap jitted helpers into the module namespace while the kernel
        # compiles so it binds to them, then put the plain ones back.
        compiled = {name: jit(glb[name]) for name in _KERNEL_HELPERS}
        saved = {name: glb[name] for name in compiled}
        glb.update(compiled)
        try:
            kernel = jit(_block_limbs)
            kernel(1, 1, 1, 1e-17, np.zeros((4, 1), np.int64), np.zeros((4, 1), np.int64))
        finally:
            glb.update(saved)
    return kernel


def _series_fixed(start: int, n_evals: int, step: int, eps: float) -> list[list[int]]:
    """S_m as 64-bit fixed-point fractions, indexed [m row][evaluation]."""
    hi = np.zeros((4, n_evals), np.int64)
    lo = np.zeros((4, n_evals), np.int64)
    work = 4 * start * (1 + n_evals) + 2 * n_evals * n_evals * step
    kernel = _block_limbs if work <= _PURE_PYTHON_WORK else _compiled_kernel()
    kernel(start, n_evals, step, eps, hi, lo)
    return [[((h << 32) + l) & _MASK64 for h, l in zip(hrow, lrow)]
            for hrow, lrow in zip(hi.tolist(), lo.tolist())]


def _check_range(position: int, count: int) -> None:
    if position < 0:
        raise DomainError(f"position must be non-negative, got {position}")
    if count < 1:
        raise DomainError(f"count must be positive, got {count}")
    if position + count > MAX_POSITION:
        raise DomainError(
            f"position {position} + count {count} exceeds the 2**24 validity bound"
        )


def series_sum(m: int, position: int, config: BbpEngineConfig = DEFAULT_CONFIG) -> float:
    """Fractional part of sum_k 16^(position-k)/(8k+m), in [0, 1)."""
    if m not in _SERIES_M:
        raise DomainError(f"m must be one of {_SERIES_M}, got {m}")
    _check_range(position, 1)
    fixed = _series_fixed(position, 1, 1, config.series_epsilon)
    return _fixed_to_float(fixed[_SERIES_M.index(m)][0])


def _fixed_to_float(v: int) -> float:
    # Truncate to 53 bits so the conversion is exact and never rounds to 1.0.
    return (v >> 11) / float(1 << 53)


def _combine(fixed: list[list[int]], j: int) -> int:
    s1, s4, s5, s6 = (row[j] for row in fixed)
    return (4 * s1 - 2 * s4 - s5 - s6) & _MASK64


def pi_fractions_at(position: int, n_evals: int, step: int,
                    config: BbpEngineConfig = DEFAULT_CONFIG) -> list[float]:
    """frac(16**n * pi) for n = position + j*step, j < n_evals."""
    _check_range(position, 1 + (n_evals - 1) * step)
    fixed = _series_fixed(position, n_evals, step, config.series_epsilon)
    return [_fixed_to_float(_combine(fixed, j)) for j in range(n_evals)]


def pi_hex_at(position: int, count: int, config: BbpEngineConfig = DEFAULT_CONFIG) -> DigitBlock:
    """``count`` consecutive hex digits of pi starting at 0-based ``position``."""
    _check_range(position, count)
    step = config.digits_per_evaluation
    n_evals = -(-count // step)
    parts = []
    for first in range(0, n_evals, _EVALS_PER_CHUNK):
        chunk = min(_EVALS_PER_CHUNK, n_evals - first)
        fixed = _series_fixed(position + first * step, chunk, step, config.series_epsilon)
        for j in range(chunk):
            x = _fixed_to_float(_combine(fixed, j))
            parts.append(fraction_to_hex(x, config.hex_window)[:step])
    return DigitBlock.from_hex("".join(parts)[:count], start=position)
