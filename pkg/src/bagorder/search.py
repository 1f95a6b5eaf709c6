"""Bag generation: level-synchronous search with dynamic-programming merging.

Every level holds paths of one length.  Two paths are merged (the better one
survives) when they have equal length, equal last n-1 tokens and cover the
same words.  Dropping the coverage check is unsafe for bags and is exposed
only to demonstrate the resulting search errors.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

from .corpus import MARKER_ID, Bag, Vocab, pad
from .errors import ConfigurationError, NoArrangement, SearchSizeError
from .scoring import (
    FULL,
    LogScore,
    Ring,
    approx_score_direct,
    markov_score,
    resolve_order,
    ring_init,
    ring_shift,
)
from .tables import Tables

EXACT = "exact"
APPROX = "approx"

BRUTE_FORCE_CAP = 8


@dataclass(frozen=True)
class SearchConfig:
    model: str = APPROX
    order: int | str = 3
    condition4: bool = True
    beam_width: int | None = None

    def __post_init__(self):
        if self.model not in (EXACT, APPROX):
            raise ConfigurationError(f"unknown model {self.model!r}")
        if self.order != FULL and (not isinstance(self.order, int) or self.order < 2):
            raise ConfigurationError(f"order must be an integer >= 2 or {FULL!r}")
        if self.model == EXACT and self.order == FULL:
            raise ConfigurationError("the exact model needs a finite order")
        if self.beam_width is not None and self.beam_width < 1:
            raise ConfigurationError("beam width must be positive")

    @property
    def label(self) -> str:
        prefix = "M" if self.model == EXACT else "AM"
        return prefix + ("n" if self.order == FULL else str(self.order))

    @classmethod
    def from_label(cls, label: str, **kwargs) -> "SearchConfig":
        """Parse ``M3``, ``AM4`` or ``AMn``."""
        text = label.strip()
        if text.upper().startswith("AM"):
            model, rest = APPROX, text[2:]
        elif text.upper().startswith("M"):
            model, rest = EXACT, text[1:]
        else:
            raise ConfigurationError(f"bad model label {label!r}")
        if rest.lower() in ("n", FULL):
            return cls(APPROX if model == APPROX else EXACT, FULL, **kwargs)
        if not rest.isdigit():
            raise ConfigurationError(f"bad model label {label!r}")
        return cls(model, int(rest), **kwargs)

    def width(self, m: int) -> int:
        """Effective window width for a bag of ``m`` words."""
        if self.model == EXACT:
            return self.order
        return resolve_order(self.order, m)[0]


class StateKey(NamedTuple):
    length: int
    suffix: tuple[int, ...]
    coverage: tuple | None


@dataclass
class Path:
    tokens: tuple[int, ...]
    remaining: tuple[tuple[int, int], ...]
    score: LogScore = field(default_factory=LogScore)
    num_ring: Ring | None = None
    den_ring: Ring | None = None
    complete: bool = False

    def key(self, n: int, condition4: bool = True) -> StateKey:
        k = min(n - 1, len(self.tokens))
        return StateKey(len(self.tokens), self.tokens[-k:], self.remaining if condition4 else None)


@dataclass
class GenerationResult:
    best: tuple[int, ...]
    score: LogScore
    tie_count: int
    expanded_states: int
    approximate: bool = False
    unsafe: bool = False
    clamped: bool = False
    is_error: bool | None = None

    def words(self) -> tuple[int, ...]:
        return self.best[1:-1]

    def to_tsv(self, vocab: Vocab) -> str:
        words = " ".join(vocab.decode(self.words()))
        return f"{words}\t{self.score.value!r}\t{self.tie_count}\t{self.expanded_states}"


def _better(a: Path, b: Path) -> bool:
    """Does ``a`` beat ``b``?  Higher score, then lexicographically smaller."""
    if a.score != b.score:
        return a.score > b.score
    return a.tokens < b.tokens


def start_path(bag: Bag, cfg: SearchConfig, tables: Tables, n: int) -> Path:
    """The lone level-0 path: just the start marker."""
    path = Path((MARKER_ID,), bag.items)
    _init_rings(path, cfg, tables, n)
    return path


def _init_rings(path: Path, cfg: SearchConfig, tables: Tables, n: int) -> None:
    if cfg.model == APPROX and len(path.tokens) == n - 1:
        path.num_ring = ring_init(path.tokens, tables.pairs)
        if n >= 3:
            path.den_ring = ring_init(path.tokens[1:], tables.pairs)


def _append(p: Path, w: int, remaining, cfg: SearchConfig, tables: Tables, n: int, m: int) -> Path:
    t = len(p.tokens)
    tokens = p.tokens + (w,)
    score = p.score
    num_ring = den_ring = None
    if cfg.model == EXACT:
        score = score.times(tables.ngrams.cond_prob(p.tokens[max(0, t - n + 1) :], w))
    elif t >= n - 1:
        ring = p.num_ring or ring_init(p.tokens[t - n + 1 :], tables.pairs)
        low, num_ring = ring_shift(ring, w, tables.pairs)
        score = score.times(low)
        if t <= m:
            if n == 2:
                score = score.divided(tables.ngrams.unigram_prob(w))
            else:
                ring = p.den_ring or ring_init(p.tokens[t - n + 2 :], tables.pairs)
                low, den_ring = ring_shift(ring, w, tables.pairs)
                score = score.divided(low)
    child = Path(tokens, remaining, score, num_ring, den_ring, complete=w == MARKER_ID and t > 0)
    _init_rings(child, cfg, tables, n)
    return child


def expand(p: Path, cfg: SearchConfig, tables: Tables, m: int | None = None) -> list[Path]:
    """Children of ``p``: one per distinct remaining word, or the end marker."""
    if p.complete:
        raise ValueError("cannot expand a complete path")
    if m is None:
        m = len(p.tokens) - 1 + sum(c for _, c in p.remaining)
    n = cfg.width(m)
    if not p.remaining:
        return [_append(p, MARKER_ID, (), cfg, tables, n, m)]
    children = []
    for i, (w, c) in enumerate(p.remaining):
        if c == 1:
            rest = p.remaining[:i] + p.remaining[i + 1 :]
        else:
            rest = p.remaining[:i] + ((w, c - 1),) + p.remaining[i + 1 :]
        children.append(_append(p, w, rest, cfg, tables, n, m))
    return children


def merge_into(level: dict, candidate: Path, cfg: SearchConfig, n: int) -> dict:
    """Keep the best path per state; ``n`` is the effective window width."""
    key = candidate.key(n, cfg.condition4)
    current = level.get(key)
    if current is None or _better(candidate, current):
        level[key] = candidate
    return level


def _validate(cfg: SearchConfig, tables: Tables) -> None:
    if cfg.model == EXACT and cfg.order > tables.ngrams.order:
        raise ConfigurationError(
            f"order {cfg.order} exceeds the trained order {tables.ngrams.order}"
        )


def _finish(complete: Sequence[Path], expanded: int, cfg: SearchConfig, clamped: bool):
    best = complete[0]
    for p in complete[1:]:
        if _better(p, best):
            best = p
    ties = sum(1 for p in complete if p.score == best.score)
    return GenerationResult(
        best.tokens,
        LogScore(best.score.prob, clamped),
        ties,
        expanded,
        approximate=cfg.beam_width is not None,
        unsafe=not cfg.condition4,
        clamped=clamped,
    )


def generate(bag: Bag, cfg: SearchConfig, tables: Tables) -> GenerationResult:
    """Best-scoring arrangement of ``bag``.

    With the coverage condition on and no beam, the returned score is the
    maximum over all arrangements; ties go to the lexicographically smallest
    token-id sequence.
    """
    _validate(cfg, tables)
    m = bag.total
    n = cfg.width(m)
    clamped = cfg.model == APPROX and resolve_order(cfg.order, m)[1]
    level = [start_path(bag, cfg, tables, n)]
    expanded = 0
    for depth in range(1, m + 2):
        nxt: dict = {}
        for p in level:
            expanded += 1
            for child in expand(p, cfg, tables, m):
                if not child.score.is_zero:
                    merge_into(nxt, child, cfg, n)
        if not nxt:
            raise NoArrangement(depth)
        level = sorted(nxt.values(), key=lambda p: p.tokens)
        if cfg.beam_width is not None and len(level) > cfg.beam_width:
            level.sort(key=lambda p: (-p.score.prob, p.tokens))
            level = sorted(level[: cfg.beam_width], key=lambda p: p.tokens)
    return _finish(level, expanded, cfg, clamped)


def multiset_permutations(items: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Distinct permutations of ``items`` in lexicographic order."""
    a = sorted(items)
    n = len(a)
    while True:
        yield tuple(a)
        i = n - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1 :] = reversed(a[i + 1 :])


def score_arrangement(words: Sequence[int], cfg: SearchConfig, tables: Tables) -> LogScore:
    """Score from scratch, no rings and no incremental state."""
    if cfg.model == EXACT:
        return markov_score(words, cfg.order, tables.ngrams)
    return approx_score_direct(words, cfg.order, tables.pairs, tables.ngrams)


def brute_force_generate(
    bag: Bag, cfg: SearchConfig, tables: Tables, cap: int = BRUTE_FORCE_CAP
) -> GenerationResult:
    """Score every distinct permutation of the bag; the verification oracle."""
    _validate(cfg, tables)
    m = bag.total
    if m > cap:
        raise SearchSizeError(f"bag of {m} words exceeds the brute-force cap of {cap}")
    words = [w for w, c in bag.items for _ in range(c)]
    best = best_score = None
    ties = scored = 0
    for perm in multiset_permutations(words):
        scored += 1
        s = score_arrangement(perm, cfg, tables)
        if best is None or s > best_score:
            best, best_score, ties = perm, s, 1
        elif s == best_score:
            ties += 1
    if best_score.is_zero:
        raise NoArrangement(m + 1)
    return GenerationResult(
        pad(best), best_score, ties, scored, clamped=best_score.clamped
    )


def random_instance(rng: random.Random, words=6, sentences=(3, 10), length=(1, 6)):
    """A small random corpus over ``words`` distinct words (as strings)."""
    vocab = [f"w{i}" for i in range(words)]
    corpus = [
        [rng.choice(vocab) for _ in range(rng.randint(*length))]
        for _ in range(rng.randint(*sentences))
    ]
    return vocab, corpus


def build_tables(corpus_words: Sequence[Sequence[str]], order: int = 4) -> Tables:
    vocab = Vocab()
    sentences = [vocab.encode(ws) for ws in corpus_words]
    return Tables.from_corpus(sentences, vocab, order)


def find_counterexample(seed: int = 0, attempts: int = 5000, labels=("M2", "M3", "AM2", "AM3")):
    """Seeded search for an instance where merging without the coverage
    condition returns a strictly worse arrangement than the true optimum.

    Returns a dict with the corpus, bag, model label and both scores, or
    ``None`` if nothing was found.
    """
    rng = random.Random(seed)
    for attempt in range(attempts):
        _, corpus = random_instance(rng, words=rng.randint(3, 6))
        sentence = rng.choice(corpus)
        if len(sentence) < 3:
            continue
        tables = build_tables(corpus)
        bag = Bag.of(tables.vocab.encode(sentence).tokens)
        label = rng.choice(labels)
        safe = SearchConfig.from_label(label)
        unsafe = SearchConfig.from_label(label, condition4=False)
        try:
            oracle = brute_force_generate(bag, safe, tables)
            got = generate(bag, unsafe, tables)
        except NoArrangement:
            continue
        if got.score < oracle.score:
            return {
                "seed": seed,
                "attempt": attempt,
                "corpus": [" ".join(s) for s in corpus],
                "bag": sorted(sentence),
                "model": label,
                "oracle_best": " ".join(tables.vocab.decode(oracle.words())),
                "oracle_log_score": oracle.score.value,
                "unsafe_best": " ".join(tables.vocab.decode(got.words())),
                "unsafe_log_score": got.score.value,
            }
    return None
