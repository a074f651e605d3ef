"""Passphrases picked out of a shared document by word coordinates.

Tokenization is deliberately dumb: split on runs of whitespace, keep
punctuation and case as they are.  Both parties must get byte-identical
phrases, and every "smarter" rule is one more thing to disagree about.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BoundsError, ValidationError


@dataclass(frozen=True)
class DocumentText:
    """Plain text plus optional page-break character offsets.

    With breaks (b1, b2, ...), page 1 is text[:b1], page 2 is text[b1:b2],
    and the last page runs to the end.
    """

    text: str
    page_breaks: tuple[int, ...] = field(default=())

    def __post_init__(self):
        breaks = tuple(self.page_breaks)
        if any(b < 0 or b > len(self.text) for b in breaks) or list(breaks) != sorted(breaks):
            raise ValidationError("page breaks must be ascending offsets within the text")
        object.__setattr__(self, "page_breaks", breaks)

    @classmethod
    def from_form_feeds(cls, text: str) -> DocumentText:
        """Pages separated by form feeds, as pdftotext writes them."""
        breaks = tuple(i for i, ch in enumerate(text) if ch == "\f")
        return cls(text, breaks)

    @property
    def page_count(self) -> int:
        return len(self.page_breaks) + 1

    def page(self, number: int) -> str:
        if not 1 <= number <= self.page_count:
            raise BoundsError(f"page {number} out of range 1..{self.page_count}", self.page_count)
        bounds = (0, *self.page_breaks, len(self.text))
        return self.text[bounds[number - 1]:bounds[number]]


@dataclass(frozen=True)
class PhraseSelector:
    start_word: int
    word_count: int = 1
    page: int | None = None

    def __post_init__(self):
        if self.start_word < 1:
            raise ValidationError("start_word is 1-based and must be at least 1")
        if self.word_count < 1:
            raise ValidationError("word_count must be at least 1")
        if self.page is not None and self.page < 1:
            raise ValidationError("page numbers start at 1")


def tokenize(doc: DocumentText | str) -> list[str]:
    text = doc.text if isinstance(doc, DocumentText) else doc
    return text.split()


def extract_phrase(doc: DocumentText, sel: PhraseSelector) -> str:
    """Words start_word .. start_word+word_count-1 (1-based), joined by single spaces."""
    if sel.page is not None:
        words = tokenize(doc.page(sel.page))
        where = f"page {sel.page}"
    else:
        words = tokenize(doc)
        where = "document"
    end = sel.start_word - 1 + sel.word_count
    if end > len(words):
        raise BoundsError(
            f"words {sel.start_word}..{end} requested but the {where} has {len(words)}",
            len(words),
        )
    return " ".join(words[sel.start_word - 1:end])


def extract_bytes(data: bytes, offset: int, length: int) -> bytes:
    """A prearranged byte range of a binary file, for use as a passphrase."""
    if offset < 0 or length < 1:
        raise ValidationError("offset must be >= 0 and length >= 1")
    if offset + length > len(data):
        raise BoundsError(f"bytes {offset}..{offset + length} requested but the file has {len(data)}", len(data))
    return data[offset:offset + length]
