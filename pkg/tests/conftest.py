import json
from importlib.resources import files
from pathlib import Path

import pytest

from bagorder.corpus import Vocab, load_corpus
from bagorder.tables import Tables

FIXTURES = Path(__file__).parent / "fixtures"
TOY_PATH = files("bagorder") / "data" / "toy.txt"


def make_tables(corpus_words, order=4, distance_cap=None):
    """Tables from a list of sentences given as strings or word lists."""
    vocab = Vocab()
    sentences = [vocab.encode(s.split() if isinstance(s, str) else s) for s in corpus_words]
    return Tables.from_corpus(sentences, vocab, order, distance_cap)


@pytest.fixture(scope="session")
def toy():
    vocab = Vocab()
    sentences = load_corpus(TOY_PATH, vocab)
    return sentences, Tables.from_corpus(sentences, vocab, 4)


@pytest.fixture(scope="session")
def counterexample():
    return json.loads((FIXTURES / "counterexample.json").read_text())


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "acceptance" in report.keywords:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
