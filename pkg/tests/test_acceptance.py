"""Exit criteria.  Each test is one criterion; the session summary prints
a PASS/FAIL line per criterion (see conftest.py)."""

import csv
import io
import random
import time
from itertools import combinations, permutations

import pytest

from bagorder.corpus import Bag, Sentence, pad
from bagorder.evaluate import evaluate, param_count
from bagorder.scoring import FULL, approx_score, markov_score, ring_init, ring_shift
from bagorder.search import (
    APPROX,
    EXACT,
    SearchConfig,
    brute_force_generate,
    find_counterexample,
    generate,
)
from bagorder.tables import extract_pairs

from conftest import FIXTURES, make_tables

pytestmark = pytest.mark.acceptance


class CountingPairs:
    """Pair-table proxy that counts probability lookups."""

    def __init__(self, table):
        self.table = table
        self.lookups = 0

    def prob(self, left, right, distance):
        self.lookups += 1
        return self.table.prob(left, right, distance)


def test_ac1_oracle_equivalence():
    rng = random.Random(20240601)
    labels = ["M2", "M3", "AM2", "AM3", "AM4", "AMn"]
    start = time.perf_counter()
    instances = 0
    while instances < 200:
        vocab_size = rng.randint(2, 12)
        corpus = [
            [f"w{rng.randrange(vocab_size)}" for _ in range(rng.randint(1, 6))]
            for _ in range(rng.randint(2, 10))
        ]
        tables = make_tables(corpus, order=3)
        assert tables.vocab.size - 1 <= 12
        bag = Bag.of(tables.vocab.encode(rng.choice(corpus)).tokens)
        assert bag.total <= 6
        for label in labels:
            cfg = SearchConfig.from_label(label)
            want = brute_force_generate(bag, cfg, tables)
            got = generate(bag, cfg, tables)
            assert got.score == want.score, (corpus, bag, label)
            assert got.best == want.best, (corpus, bag, label)
        instances += 1
    elapsed = time.perf_counter() - start
    print(f"AC1 {instances} instances x {len(labels)} models in {elapsed:.1f}s")
    assert elapsed < 60


def test_ac2_am2_equals_m2(toy):
    sentences, tables = toy
    checked = 0
    for s in sentences:
        if s.m > 5:
            continue
        diffs = []
        for perm in set(permutations(s.tokens)):
            am = approx_score(perm, 2, tables.pairs, tables.ngrams)
            m2 = markov_score(perm, 2, tables.ngrams)
            assert am.is_zero == m2.is_zero
            if not am.is_zero:
                diffs.append(am.value - m2.value)
        assert diffs, "reference arrangement must have nonzero score"
        assert max(diffs) - min(diffs) <= 1e-9
        checked += 1
    report = evaluate(sentences, [SearchConfig(EXACT, 2), SearchConfig(APPROX, 2)], tables)
    for row in report.rows + [report.totals]:
        assert row.errors["M2"] == row.errors["AM2"]
    print(f"AC2 {checked} bags checked over all permutations; M2 == AM2 = {report.totals.errors['M2']}")


def test_ac3_ring_correctness():
    rng = random.Random(7)
    steps = 0
    while steps < 10_000:
        n = rng.randint(2, 8)
        tables = make_tables(
            [[f"w{rng.randrange(6)}" for _ in range(rng.randint(1, 10))] for _ in range(8)]
        )
        pairs = CountingPairs(tables.pairs)
        seq = [rng.randrange(7) for _ in range(n - 1 + 200)]
        ring = ring_init(seq[: n - 1], pairs)
        for k in range(n - 1, len(seq)):
            before = pairs.lookups
            low, ring = ring_shift(ring, seq[k], pairs)
            assert pairs.lookups - before == n - 1
            window = seq[k - n + 1 : k + 1]
            naive = min(tables.pairs.prob(window[i], window[j], j - i) for i, j in combinations(range(n), 2))
            assert low == naive
            steps += 1
    print(f"AC3 {steps} shifts, n in 2..8, exact agreement, n-1 lookups each")


def test_ac4_pair_extraction_count():
    rng = random.Random(4)
    for _ in range(1000):
        m = rng.randint(0, 50)
        s = Sentence(tuple(rng.randint(1, 30) for _ in range(m)))
        assert len(extract_pairs(pad(s))) == (m + 1) * (m + 2) // 2
    print("AC4 1000 lengths in [0, 50]")


def test_ac5_count_dominance(toy):
    _, tables = toy
    violations = 0
    for g, c in tables.ngrams.counts[3].items():
        for a, b in combinations(range(3), 2):
            if c > tables.pairs.counts.get((g[a], g[b], b - a), 0):
                violations += 1
    print(f"AC5 {len(tables.ngrams.counts[3])} trigrams, {violations} violations")
    assert violations == 0


def test_ac6_parameter_invariance(toy):
    _, tables = toy
    approx = [param_count(tables, APPROX, n).distinct_parameters for n in (2, 3, 4, 5, FULL)]
    exact = [param_count(tables, EXACT, n).distinct_parameters for n in (2, 3, 4)]
    print(f"AC6 approx {approx}, exact {exact}")
    assert len(set(approx)) == 1
    assert all(a <= b for a, b in zip(exact, exact[1:]))


def test_ac7_coverage_condition_counterexample(counterexample):
    start = time.perf_counter()
    found = find_counterexample(counterexample["seed"])
    assert found == counterexample

    tables = make_tables(counterexample["corpus"], order=4)
    bag = Bag.of(tables.vocab.encode(counterexample["bag"]).tokens)
    safe = SearchConfig.from_label(counterexample["model"])
    unsafe = SearchConfig.from_label(counterexample["model"], condition4=False)
    oracle = brute_force_generate(bag, safe, tables)
    got = generate(bag, unsafe, tables)
    assert got.unsafe
    assert got.score < oracle.score
    assert generate(bag, safe, tables).score == oracle.score
    elapsed = time.perf_counter() - start
    print(f"AC7 unsafe {got.score.value:.4f} < optimum {oracle.score.value:.4f} ({elapsed:.1f}s)")
    assert elapsed < 30


def _error_cells(tsv_text):
    rows = list(csv.reader(io.StringIO(tsv_text), delimiter="\t"))
    head = rows[0]
    keep = [i for i, h in enumerate(head) if not h.startswith("ties:")]
    return [[r[i] for i in keep] for r in rows]


@pytest.mark.parametrize("threads", [1, 4])
def test_ac8_pinned_toy_evaluation(toy, threads):
    sentences, tables = toy
    expected = (FIXTURES / "toy_eval_closed.tsv").read_text()
    labels = expected.splitlines()[0].split("\t")[2:]
    labels = [lab for lab in labels if ":" not in lab]
    configs = [SearchConfig.from_label(lab) for lab in labels]
    start = time.perf_counter()
    report = evaluate(sentences, configs, tables, threads=threads)
    elapsed = time.perf_counter() - start
    assert _error_cells(report.to_tsv()) == _error_cells(expected)
    print(f"AC8 threads={threads}: {len(sentences)} sentences x {labels} in {elapsed:.1f}s")
    assert elapsed < 60
