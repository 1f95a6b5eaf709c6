"""Closed/open bag-generation evaluation and parameter counts."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .corpus import Sentence, pad, to_bag
from .errors import NoArrangement
from .scoring import FULL
from .search import APPROX, EXACT, SearchConfig, generate
from .tables import Tables


@dataclass
class EvalRow:
    m: int | str
    total: int = 0
    errors: dict = field(default_factory=dict)
    ties: dict = field(default_factory=dict)
    dead: dict = field(default_factory=dict)

    def add(self, other: "EvalRow") -> None:
        self.total += other.total
        for attr in ("errors", "ties", "dead"):
            mine, theirs = getattr(self, attr), getattr(other, attr)
            for k, v in theirs.items():
                mine[k] = mine.get(k, 0) + v


@dataclass
class EvalReport:
    labels: list[str]
    rows: list[EvalRow]
    totals: EvalRow
    mode: str = "closed"

    def to_tsv(self) -> str:
        head = ["length", "total"] + self.labels
        head += [f"ties:{lab}" for lab in self.labels] + [f"dead:{lab}" for lab in self.labels]
        lines = ["\t".join(head)]
        for row in self.rows + [self.totals]:
            cells = [str(row.m), str(row.total)]
            for attr in ("errors", "ties", "dead"):
                cells += [str(getattr(row, attr).get(lab, 0)) for lab in self.labels]
            lines.append("\t".join(cells))
        return "\n".join(lines) + "\n"

    def render(self) -> str:
        """Aligned error-distribution table, one row per sentence length."""
        exact = [lab for lab in self.labels if not lab.startswith("AM")]
        approx = [lab for lab in self.labels if lab.startswith("AM")]
        cols = exact + approx
        widths = [max(4, len(c)) for c in cols]
        groups = []
        start = 0
        for name, members in (("Markov Model", exact), ("Approx. Markov Model", approx)):
            if not members:
                continue
            idx = range(start, start + len(members))
            span = sum(widths[i] for i in idx) + 2 * (len(members) - 1)
            # widen the group's columns until its title fits
            extra = max(0, len(name) - span)
            for j, i in enumerate(idx):
                widths[i] += extra // len(members) + (j < extra % len(members))
            groups.append((name, span + extra))
            start += len(members)
        head1 = f"{'sentence':>8}  {'total test':>10}  "
        head1 += "  ".join(name.center(w) for name, w in groups)
        head2 = f"{'length':>8}  {'sentences':>10}  " + "  ".join(c.rjust(w) for c, w in zip(cols, widths))
        out = [f"# mode: {self.mode} test", head1.rstrip(), head2, "-" * len(head2)]

        def line(row):
            cells = "  ".join(str(row.errors.get(c, 0)).rjust(w) for c, w in zip(cols, widths))
            return f"{str(row.m):>8}  {row.total:>10}  {cells}"

        out.extend(line(row) for row in self.rows)
        if self.rows:
            out.append("-" * len(head2))
        out.append(line(self.totals))
        if any(self.totals.dead.values()):
            out.append("dead searches: " + ", ".join(f"{c}={self.totals.dead.get(c, 0)}" for c in cols))
        return "\n".join(out) + "\n"


# worker-process state for parallel evaluation
_WORKER: dict = {}


def _init_worker(configs, tables, search):
    _WORKER.update(configs=configs, tables=tables, search=search)


def _evaluate_one(sentence: Sentence, configs=None, tables=None, search=None):
    if configs is None:
        configs, tables, search = _WORKER["configs"], _WORKER["tables"], _WORKER["search"]
    reference = pad(sentence)
    bag = to_bag(sentence)
    outcome = []
    for cfg in configs:
        try:
            res = search(bag, cfg, tables)
        except NoArrangement:
            outcome.append((True, False, True))
            continue
        outcome.append((res.best != reference, res.tie_count > 1, False))
    return outcome


def evaluate(
    test: Sequence[Sentence],
    configs: Sequence[SearchConfig],
    tables: Tables,
    search: Callable = generate,
    threads: int = 1,
    mode: str = "closed",
) -> EvalReport:
    """Run ``search`` on the bag of every test sentence under every config.

    A result is an error when the selected sequence differs from the
    reference sentence.  Dead searches count as errors and are also tallied
    separately.
    """
    labels = [c.label for c in configs]
    if threads > 1 and len(test) > 1:
        with ProcessPoolExecutor(threads, initializer=_init_worker, initargs=(configs, tables, search)) as pool:
            outcomes = list(pool.map(_evaluate_one, test, chunksize=1))
    else:
        outcomes = [_evaluate_one(s, configs, tables, search) for s in test]

    by_len: dict[int, EvalRow] = {}
    for sentence, outcome in zip(test, outcomes):
        row = by_len.setdefault(sentence.m, EvalRow(sentence.m, 0, *({lab: 0 for lab in labels} for _ in range(3))))
        row.total += 1
        for lab, (err, tie, dead) in zip(labels, outcome):
            row.errors[lab] += err
            row.ties[lab] += tie
            row.dead[lab] += dead
    rows = [by_len[m] for m in sorted(by_len)]
    totals = EvalRow("total", 0, *({lab: 0 for lab in labels} for _ in range(3)))
    for row in rows:
        totals.add(row)
    return EvalReport(labels, rows, totals, mode)


def split_open(sentences: Sequence[Sentence]) -> tuple[list[Sentence], list[Sentence]]:
    """Deterministic 80/20 train/test split by line index (every fifth line is test)."""
    train = [s for i, s in enumerate(sentences) if i % 5 != 4]
    test = [s for i, s in enumerate(sentences) if i % 5 == 4]
    return train, test


@dataclass
class ParamReport:
    label: str
    distinct_parameters: int
    bound_note: str
    V: int
    L_or_n: float | int


def param_count(tables: Tables, model: str, n=3) -> ParamReport:
    """Count stored table entries a model needs.

    The approximate model reads the pair table plus unigrams whatever its
    order; the exact model of order n reads the n-gram and (n-1)-gram tables.
    """
    V = tables.vocab.size
    if model == APPROX:
        markers = tables.ngrams.count((0,))
        sentences = markers // 2
        avg_len = round(tables.ngrams.token_total / sentences - 2, 4) if sentences else 0.0
        label = "AMn" if n == FULL else f"AM{n}"
        size = len(tables.pairs) + len(tables.ngrams.counts[1])
        return ParamReport(label, size, "O((L-1)*V^2)", V, avg_len)
    if model != EXACT or n == FULL:
        raise ValueError(f"bad model/order: {model!r}/{n!r}")
    if n > tables.ngrams.order:
        raise ValueError(f"order {n} exceeds the trained order {tables.ngrams.order}")
    size = len(tables.ngrams.counts[n]) + len(tables.ngrams.counts[n - 1])
    return ParamReport(f"M{n}", size, f"O(V^{n})", V, n)
