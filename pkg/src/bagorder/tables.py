"""Directed word-pair tables, exact n-gram count tables, and their persistence.

Probabilities are returned as :class:`fractions.Fraction` so that minima and
products over the same integer counts compare exactly.
"""

from __future__ import annotations

import hashlib
import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .corpus import MARKER_ID, Sentence, Vocab, pad
from .errors import TableFormatError, TableVersionError

PAIRS_HEADER = "bagorder-pairs v1"
NGRAMS_HEADER = "bagorder-ngrams v1"
VOCAB_HEADER = "bagorder-vocab v1"

PAIRS_FILE = "pairs.tsv"
NGRAMS_FILE = "ngrams.tsv"
VOCAB_FILE = "vocab.tsv"

ZERO = Fraction(0)


class PairKey(NamedTuple):
    left: int
    right: int
    distance: int


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        # 1e-9 should mean the decimal 1e-9, not its binary approximation
        return Fraction(repr(x))
    return Fraction(x)


@dataclass
class PairTable:
    counts: dict[PairKey, int] = field(default_factory=dict)
    floor: Fraction = ZERO
    distance_cap: int | None = None

    def __post_init__(self):
        self.floor = as_fraction(self.floor)
        self.total_pairs = sum(self.counts.values())
        self.max_distance = max((k[2] for k in self.counts), default=0)

    def prob(self, left: int, right: int, distance: int) -> Fraction:
        c = self.counts.get((left, right, distance))
        if c is None:
            return self.floor
        return Fraction(c, self.total_pairs)

    def __len__(self):
        return len(self.counts)

    def __eq__(self, other):
        return (
            isinstance(other, PairTable)
            and self.counts == other.counts
            and self.distance_cap == other.distance_cap
        )


@dataclass
class NGramTables:
    """Raw k-gram counts for k = 1..order over padded sentences.

    ``counts[k]`` maps a k-tuple of ids to its count.  Conditional
    probabilities divide by the *history* count of the context: how often the
    context is followed by some token.  That differs from the raw count only
    for contexts that can end a sentence (notably the lone marker).
    """

    order: int
    counts: dict[int, dict[tuple[int, ...], int]] = field(default_factory=dict)
    floor: Fraction = ZERO

    def __post_init__(self):
        self.floor = as_fraction(self.floor)
        for k in range(1, self.order + 1):
            self.counts.setdefault(k, {})
        self.token_total = sum(self.counts[1].values())
        self._history = None

    def count(self, gram: Sequence[int]) -> int:
        gram = tuple(gram)
        return self.counts.get(len(gram), {}).get(gram, 0)

    def history(self, context: Sequence[int]) -> int:
        if self._history is None:
            hist: Counter = Counter()
            for k in range(2, self.order + 1):
                for gram, c in self.counts[k].items():
                    hist[gram[:-1]] += c
            self._history = dict(hist)
        return self._history.get(tuple(context), 0)

    def unigram_prob(self, w: int) -> Fraction:
        c = self.counts[1].get((w,))
        if c is None:
            return self.floor
        return Fraction(c, self.token_total)

    def cond_prob(self, context: Sequence[int], w: int) -> Fraction:
        context = tuple(context)
        if not context:
            return self.unigram_prob(w)
        if len(context) >= self.order:
            raise ValueError(f"context of length {len(context)} needs order > {self.order}")
        hist = self.history(context)
        if hist == 0:
            return ZERO
        c = self.counts[len(context) + 1].get(context + (w,))
        if c is None:
            return self.floor
        return Fraction(c, hist)

    def __eq__(self, other):
        return (
            isinstance(other, NGramTables)
            and self.order == other.order
            and self.counts == other.counts
        )

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_history"] = None
        return state


def extract_pairs(padded: Sequence[int]) -> list[PairKey]:
    """All directed pairs ``(w_i, w_j, j - i)`` with ``i < j``, row-major."""
    n = len(padded)
    return [
        PairKey(padded[i], padded[j], j - i) for i in range(n) for j in range(i + 1, n)
    ]


def train(
    corpus: Iterable[Sentence], order: int, distance_cap: int | None = None
) -> tuple[PairTable, NGramTables]:
    if order < 2:
        raise ValueError("order must be at least 2")
    if distance_cap is not None and distance_cap < 1:
        raise ValueError("distance_cap must be at least 1")
    pairs: Counter = Counter()
    grams = {k: Counter() for k in range(1, order + 1)}
    for s in corpus:
        p = pad(s)
        for key in extract_pairs(p):
            if distance_cap is None or key.distance <= distance_cap:
                pairs[key] += 1
        for k in range(1, order + 1):
            table = grams[k]
            for i in range(len(p) - k + 1):
                table[p[i : i + k]] += 1
    return (
        PairTable(dict(pairs), distance_cap=distance_cap),
        NGramTables(order, {k: dict(c) for k, c in grams.items()}),
    )


def pair_prob(t: PairTable, key: Sequence[int]) -> Fraction:
    return t.prob(*key)


def ngram_cond_prob(t: NGramTables, context: Sequence[int], w: int) -> Fraction:
    return t.cond_prob(context, w)


@dataclass
class Tables:
    """A trained model bundle: vocabulary plus both count tables."""

    vocab: Vocab
    pairs: PairTable
    ngrams: NGramTables

    @classmethod
    def from_corpus(cls, corpus, vocab, order, distance_cap=None):
        pairs, ngrams = train(corpus, order, distance_cap)
        return cls(vocab.freeze(), pairs, ngrams)

    def with_floor(self, floor) -> "Tables":
        pairs = PairTable(self.pairs.counts, floor, self.pairs.distance_cap)
        ngrams = NGramTables(self.ngrams.order, self.ngrams.counts, floor)
        return Tables(self.vocab, pairs, ngrams)

    def save(self, directory) -> None:
        os.makedirs(directory, exist_ok=True)
        save_vocab(self.vocab, os.path.join(directory, VOCAB_FILE))
        save_pairs(self.pairs, os.path.join(directory, PAIRS_FILE))
        save_ngrams(self.ngrams, os.path.join(directory, NGRAMS_FILE))

    @classmethod
    def load(cls, directory) -> "Tables":
        return cls(
            load_vocab(os.path.join(directory, VOCAB_FILE)),
            load_pairs(os.path.join(directory, PAIRS_FILE)),
            load_ngrams(os.path.join(directory, NGRAMS_FILE)),
        )


def checksums(directory) -> dict[str, str]:
    """sha256 (first 16 hex digits) of each table file in ``directory``."""
    out = {}
    for name in (VOCAB_FILE, PAIRS_FILE, NGRAMS_FILE):
        with open(os.path.join(directory, name), "rb") as fh:
            out[name] = hashlib.sha256(fh.read()).hexdigest()[:16]
    return out


# -- persistence ------------------------------------------------------------


def _write(path, lines):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def _read(path, header):
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    lines = [ln.rstrip("\r") for ln in lines]
    if not lines:
        raise TableFormatError(path, 1, "empty file")
    if lines[0] != header:
        raise TableVersionError(f"{path}: expected header {header!r}, found {lines[0]!r}")
    return lines


def _int(path, lineno, text, what):
    try:
        return int(text)
    except ValueError:
        raise TableFormatError(path, lineno, f"{what} is not an integer: {text!r}") from None


def _meta(path, lines, lineno, name):
    if len(lines) < lineno:
        raise TableFormatError(path, lineno, f"missing {name!r} line")
    parts = lines[lineno - 1].split("\t")
    if len(parts) != 2 or parts[0] != name:
        raise TableFormatError(path, lineno, f"expected '{name}<TAB>value'")
    return parts[1]


def save_pairs(t: PairTable, path) -> None:
    cap = "-" if t.distance_cap is None else str(t.distance_cap)
    lines = [PAIRS_HEADER, f"distance_cap\t{cap}"]
    for key in sorted(t.counts):
        lines.append(f"{key[0]}\t{key[1]}\t{key[2]}\t{t.counts[key]}")
    _write(path, lines)


def load_pairs(path) -> PairTable:
    lines = _read(path, PAIRS_HEADER)
    cap_text = _meta(path, lines, 2, "distance_cap")
    cap = None if cap_text == "-" else _int(path, 2, cap_text, "distance_cap")
    counts = {}
    for lineno, line in enumerate(lines[2:], 3):
        parts = line.split("\t")
        if len(parts) != 4:
            raise TableFormatError(path, lineno, f"expected 4 fields, got {len(parts)}")
        left, right, dist, count = (
            _int(path, lineno, x, what)
            for x, what in zip(parts, ("left_id", "right_id", "distance", "count"))
        )
        if dist < 1 or count < 1:
            raise TableFormatError(path, lineno, "distance and count must be positive")
        counts[PairKey(left, right, dist)] = count
    return PairTable(counts, distance_cap=cap)


def save_ngrams(t: NGramTables, path) -> None:
    lines = [NGRAMS_HEADER, f"order\t{t.order}"]
    for k in range(1, t.order + 1):
        for gram in sorted(t.counts[k]):
            lines.append(f"{k}\t{' '.join(map(str, gram))}\t{t.counts[k][gram]}")
    _write(path, lines)


def load_ngrams(path) -> NGramTables:
    lines = _read(path, NGRAMS_HEADER)
    order = _int(path, 2, _meta(path, lines, 2, "order"), "order")
    counts: dict[int, dict] = defaultdict(dict)
    for lineno, line in enumerate(lines[2:], 3):
        parts = line.split("\t")
        if len(parts) != 3:
            raise TableFormatError(path, lineno, f"expected 3 fields, got {len(parts)}")
        k = _int(path, lineno, parts[0], "k")
        gram = tuple(_int(path, lineno, x, "token id") for x in parts[1].split(" "))
        count = _int(path, lineno, parts[2], "count")
        if not 1 <= k <= order or len(gram) != k or count < 1:
            raise TableFormatError(path, lineno, "inconsistent k-gram row")
        counts[k][gram] = count
    return NGramTables(order, dict(counts))


def save_vocab(vocab: Vocab, path) -> None:
    _write(path, [VOCAB_HEADER] + [f"{i}\t{s}" for i, s in vocab])


def load_vocab(path) -> Vocab:
    lines = _read(path, VOCAB_HEADER)
    vocab = Vocab()
    for lineno, line in enumerate(lines[1:], 2):
        parts = line.split("\t")
        if len(parts) != 2:
            raise TableFormatError(path, lineno, "expected 'id<TAB>surface'")
        idx = _int(path, lineno, parts[0], "id")
        if idx == MARKER_ID:
            if parts[1] != "*":
                raise TableFormatError(path, lineno, "id 0 must be the marker '*'")
            continue
        if vocab.intern(parts[1]) != idx:
            raise TableFormatError(path, lineno, "vocabulary ids must be dense and in order")
    return vocab.freeze()
