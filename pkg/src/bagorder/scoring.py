"""Sentence scores under the exact and the approximate n-gram Markov models.

The approximate model replaces every n-gram (and (n-1)-gram) joint
probability of the exact model by the minimum directed-pair probability over
all ordered position pairs inside that window.  Window minima are maintained
incrementally with :class:`Ring`, which needs n-1 pair lookups per shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Sequence

from .corpus import pad
from .errors import ConfigurationError
from .tables import NGramTables, PairTable

FULL = "full"


@total_ordering
class LogScore:
    """Natural-log sentence score with an explicit zero element.

    The exact probability is carried as a Fraction so orderings and ties are
    exact; ``value`` gives the log for reporting.
    """

    __slots__ = ("prob", "clamped")

    def __init__(self, prob=Fraction(1), clamped=False):
        self.prob = prob
        self.clamped = clamped

    @classmethod
    def zero(cls):
        return cls(Fraction(0))

    @property
    def is_zero(self) -> bool:
        return self.prob == 0

    @property
    def value(self) -> float:
        if self.prob == 0:
            return -math.inf
        return math.log(self.prob.numerator) - math.log(self.prob.denominator)

    def times(self, p) -> "LogScore":
        return LogScore(self.prob * p, self.clamped)

    def divided(self, p) -> "LogScore":
        # a zero denominator window can only occur inside a zero numerator
        # window, unless floors differ; treat the undefined ratio as zero
        if p == 0 or self.prob == 0:
            return LogScore(Fraction(0), self.clamped)
        return LogScore(self.prob / p, self.clamped)

    def __eq__(self, other):
        if not isinstance(other, LogScore):
            return NotImplemented
        return self.prob == other.prob

    def __lt__(self, other):
        return self.prob < other.prob

    def __hash__(self):
        return hash(self.prob)

    def __sub__(self, other) -> float:
        return self.value - other.value

    def __repr__(self):
        return f"LogScore({self.value!r})"


def resolve_order(n, m: int) -> tuple[int, bool]:
    """Effective window width for a sentence of ``m`` words, and whether it was clamped."""
    if n == FULL:
        return m + 2, False
    n = int(n)
    if n < 2:
        raise ConfigurationError(f"order must be at least 2, got {n}")
    if n > m + 2:
        return m + 2, True
    return n, False


def tuple_min(words: Sequence[int], pairs: PairTable, ngrams: NGramTables | None = None) -> Fraction:
    """Minimum pair probability over all ordered index pairs of ``words``.

    A single word has no pairs; its value is the unigram probability.
    """
    L = len(words)
    if L == 1:
        if ngrams is None:
            raise ValueError("a one-word window needs unigram counts")
        return ngrams.unigram_prob(words[0])
    return min(
        pairs.prob(words[i], words[j], j - i) for i in range(L) for j in range(i + 1, L)
    )


@dataclass
class Ring:
    """Running pair minima for a window of n-1 tokens.

    ``slots`` is circular storage; the slot at ``(head + i) % len`` belongs to
    window position ``i`` and holds the minimum over pairs that start there and
    end inside the window.  The newest position has no pairs yet (``None``).
    """

    slots: list
    head: int
    window: tuple[int, ...]

    def slot(self, i: int):
        return self.slots[(self.head + i) % len(self.slots)]

    def minimum(self):
        present = [s for s in self.slots if s is not None]
        return min(present) if present else None


def ring_init(window: Sequence[int], pairs: PairTable) -> Ring:
    window = tuple(window)
    if not window:
        raise ValueError("ring window must hold at least one token")
    w = len(window)
    slots = [
        min(pairs.prob(window[i], window[j], j - i) for j in range(i + 1, w)) if i < w - 1 else None
        for i in range(w)
    ]
    return Ring(slots, 0, window)


def ring_shift(r: Ring, new_word: int, pairs: PairTable) -> tuple[Fraction, Ring]:
    """Slide the ring by one token.

    Returns the pair minimum of the full window ``r.window + (new_word,)`` and
    the ring over the last n-1 tokens of that window.
    """
    w = len(r.window)
    lookups = [pairs.prob(r.window[i], new_word, w - i) for i in range(w)]
    slots = list(r.slots)
    best = None
    for i in range(w):
        idx = (r.head + i) % w
        cur = slots[idx]
        low = lookups[i] if cur is None or lookups[i] < cur else cur
        if best is None or low < best:
            best = low
        slots[idx] = low
    # the oldest position leaves; its storage becomes the new word's slot
    slots[r.head] = None
    return best, Ring(slots, (r.head + 1) % w, r.window[1:] + (new_word,))


def _tokens(s):
    return getattr(s, "tokens", s)


def markov_score(s, n: int, ngrams: NGramTables) -> LogScore:
    """Exact n-gram model with the marker on each side and P(*) = 1.

    Near the start the context grows one token at a time (P(w1|*),
    P(w2|*,w1), ...) before reaching n-1 tokens.
    """
    if n == FULL or int(n) < 2:
        raise ConfigurationError(f"exact model needs an integer order >= 2, got {n!r}")
    if n > ngrams.order:
        raise ConfigurationError(f"order {n} exceeds the trained order {ngrams.order}")
    p = pad(_tokens(s))
    score = LogScore()
    for t in range(1, len(p)):
        score = score.times(ngrams.cond_prob(p[max(0, t - n + 1) : t], p[t]))
        if score.is_zero:
            break
    return score


def approx_score(s, n, pairs: PairTable, ngrams: NGramTables) -> LogScore:
    """Approximate n-gram model score, window minima via rings.

    ``n`` may be :data:`FULL`; orders above m+2 are clamped to it and the
    result carries ``clamped=True``.
    """
    p = pad(_tokens(s))
    m = len(p) - 2
    n, clamped = resolve_order(n, m)
    score = LogScore(clamped=clamped)

    ring = ring_init(p[: n - 1], pairs)
    for t in range(n - 1, m + 2):
        low, ring = ring_shift(ring, p[t], pairs)
        score = score.times(low)

    if n == 2:
        for t in range(1, m + 1):
            score = score.divided(ngrams.unigram_prob(p[t]))
    elif n < m + 2:
        ring = ring_init(p[1 : n - 1], pairs)
        for t in range(n - 1, m + 1):
            low, ring = ring_shift(ring, p[t], pairs)
            score = score.divided(low)
    return score


def approx_score_direct(s, n, pairs: PairTable, ngrams: NGramTables) -> LogScore:
    """Same quantity as :func:`approx_score`, one tuple_min per window."""
    p = pad(_tokens(s))
    m = len(p) - 2
    n, clamped = resolve_order(n, m)
    score = LogScore(clamped=clamped)
    for k in range(0, m - n + 3):
        score = score.times(tuple_min(p[k : k + n], pairs, ngrams))
    for k in range(1, m - n + 3):
        score = score.divided(tuple_min(p[k : k + n - 1], pairs, ngrams))
    return score
