"""One-time pads built from passphrase-addressed blocks of pi's hex digits."""

from .bbp import BbpEngineConfig, DigitBlock, pi_hex_at
from .digit_source import DigitSourceSpec, SourceKind, open_source, read_block
from .errors import (BoundsError, CapacityError, DigitFileError, DomainError,
                     PiOtpError, ValidationError)
from .pad import (AddressSet, OneTimePad, PadConfig, PassphraseDigest, apply_pad,
                  chain_addresses, derive_addresses, generate_pad, hash_passphrase,
                  xor_combine)

__version__ = "0.1.0"

__all__ = [
    "AddressSet", "BbpEngineConfig", "BoundsError", "CapacityError", "DigitBlock",
    "DigitFileError", "DigitSourceSpec", "DomainError", "OneTimePad", "PadConfig",
    "PassphraseDigest", "PiOtpError", "SourceKind", "ValidationError", "apply_pad",
    "chain_addresses", "derive_addresses", "generate_pad", "hash_passphrase",
    "open_source", "pi_hex_at", "read_block", "xor_combine",
]
