"""Corpus ingestion: token interning, sentence padding and bags."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CorpusLoadError, ReservedTokenError, VocabFrozenError

MARKER = "*"
MARKER_ID = 0

_ASCII_WS = re.compile(r"[ \t\n\r\f\v]+")


class Vocab:
    """Bijection between surface strings and integer ids.

    Id 0 is always the boundary marker ``*``.
    """

    def __init__(self, surfaces: Iterable[str] = ()):
        self._ids: dict[str, int] = {MARKER: MARKER_ID}
        self._surfaces: list[str] = [MARKER]
        self.frozen = False
        for s in surfaces:
            if s != MARKER:
                self.intern(s)

    def intern(self, surface: str) -> int:
        idx = self._ids.get(surface)
        if idx is not None:
            return idx
        if self.frozen:
            raise VocabFrozenError(f"unknown token {surface!r} in frozen vocabulary")
        idx = len(self._surfaces)
        self._ids[surface] = idx
        self._surfaces.append(surface)
        return idx

    def lookup(self, idx: int) -> str:
        return self._surfaces[idx]

    def get(self, surface: str):
        return self._ids.get(surface)

    def freeze(self) -> "Vocab":
        self.frozen = True
        return self

    def copy(self) -> "Vocab":
        """Unfrozen copy, used to intern out-of-vocabulary words at query time."""
        other = Vocab()
        other._ids = dict(self._ids)
        other._surfaces = list(self._surfaces)
        return other

    def encode(self, words: Iterable[str]) -> "Sentence":
        return Sentence(tuple(self.intern(w) for w in words))

    def decode(self, ids: Iterable[int]) -> list[str]:
        return [self._surfaces[i] for i in ids]

    @property
    def size(self) -> int:
        return len(self._surfaces)

    def __len__(self):
        return len(self._surfaces)

    def __eq__(self, other):
        return isinstance(other, Vocab) and self._surfaces == other._surfaces

    def __iter__(self):
        return iter(enumerate(self._surfaces))

    def __repr__(self):
        return f"Vocab(V={self.size})"


@dataclass(frozen=True)
class Sentence:
    """A sentence as token ids, without boundary markers."""

    tokens: tuple[int, ...]

    def __post_init__(self):
        if MARKER_ID in self.tokens:
            raise ValueError("sentence tokens must not contain the marker id")

    @property
    def m(self) -> int:
        return len(self.tokens)

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


@dataclass(frozen=True)
class Bag:
    """A multiset of token ids, stored as sorted ``(id, count)`` items."""

    items: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, tokens: Iterable[int]) -> "Bag":
        counts = Counter(tokens)
        if MARKER_ID in counts:
            raise ValueError("a bag cannot contain the marker id")
        return cls(tuple(sorted(counts.items())))

    @property
    def multiset(self) -> dict[int, int]:
        return dict(self.items)

    @property
    def total(self) -> int:
        return sum(c for _, c in self.items)

    def __len__(self):
        return self.total


def parse_line(line: str, vocab: Vocab, lineno: int = 1) -> Sentence:
    words = [w for w in _ASCII_WS.split(line) if w]
    if MARKER in words:
        raise ReservedTokenError(lineno)
    return Sentence(tuple(vocab.intern(w) for w in words))


def read_sentences(lines: Iterable[str], vocab: Vocab) -> list[Sentence]:
    return [parse_line(line.rstrip("\r"), vocab, i) for i, line in enumerate(lines, 1)]


def split_lines(text: str) -> list[str]:
    """Split on LF; a trailing newline does not produce an extra empty line."""
    if not text:
        return []
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    return lines


def load_corpus(path, vocab: Vocab) -> list[Sentence]:
    """Read a pre-tokenized corpus, one sentence per line.

    Empty lines are kept as zero-length sentences.  Tokens are interned into
    ``vocab`` in order of first appearance.
    """
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise CorpusLoadError(f"cannot read corpus {path}: {exc}") from exc
    return read_sentences(split_lines(text), vocab)


def pad(s: Sentence | Sequence[int]) -> tuple[int, ...]:
    tokens = s.tokens if isinstance(s, Sentence) else tuple(s)
    return (MARKER_ID, *tokens, MARKER_ID)


def to_bag(s: Sentence | Sequence[int]) -> Bag:
    tokens = s.tokens if isinstance(s, Sentence) else s
    return Bag.of(tokens)
