"""Command-line interface: train, score, generate, eval, params, counterexample."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .corpus import Bag, Vocab, load_corpus, parse_line
from .errors import BagOrderError, ConfigurationError, NoArrangement
from .evaluate import evaluate, param_count, split_open
from .scoring import FULL, approx_score, markov_score
from .search import APPROX, EXACT, SearchConfig, find_counterexample, generate
from .tables import Tables, checksums


def _order(text):
    if text.lower() in (FULL, "n"):
        return FULL
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"order must be an integer or 'full', got {text!r}") from None
    if value < 2:
        raise argparse.ArgumentTypeError("order must be at least 2")
    return value


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _floor(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"floor must be a number, got {text!r}") from None
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError("floor must lie in [0, 1]")
    return value


def _labels(text):
    labels = [t for t in text.split(",") if t.strip()]
    try:
        for lab in labels:
            SearchConfig.from_label(lab)
    except ConfigurationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not labels:
        raise argparse.ArgumentTypeError("no model labels given")
    return labels


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=_positive, default=1, help="worker processes (default 1)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized utilities")

    tables_opt = argparse.ArgumentParser(add_help=False)
    tables_opt.add_argument(
        "--tables",
        default=os.environ.get("BAGORDER_TABLES"),
        help="table directory (default: $BAGORDER_TABLES)",
    )
    tables_opt.add_argument("--floor", type=_floor, default=0.0, help="probability of unseen events")

    model_opt = argparse.ArgumentParser(add_help=False)
    model_opt.add_argument("--model", choices=(EXACT, APPROX), default=APPROX)
    model_opt.add_argument("--order", type=_order, default=3, help="window width, or 'full'")

    search_opt = argparse.ArgumentParser(add_help=False)
    search_opt.add_argument(
        "--no-condition4", dest="condition4", action="store_false",
        help="merge paths regardless of word coverage (unsafe, for demonstration)",
    )
    search_opt.add_argument("--beam-width", type=_positive, default=None)

    parser = argparse.ArgumentParser(prog="bagorder", description="Bag generation with (approximate) n-gram Markov models.")
    parser.add_argument("--version", action="version", version=f"bagorder {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", parents=[common], help="count tables from a corpus")
    p.add_argument("--corpus", nargs="+", required=True)
    p.add_argument("--order", type=_order, default=3)
    p.add_argument("--distance-cap", type=_positive, default=None)
    p.add_argument("--out", required=True, help="output table directory")

    p = sub.add_parser("score", parents=[common, tables_opt, model_opt], help="score sentences")
    p.add_argument("--sentence", action="append", help="sentence text (repeatable; default: stdin lines)")

    p = sub.add_parser("generate", parents=[common, tables_opt, model_opt, search_opt], help="order a bag of words")
    p.add_argument("--bag", action="append", help="space-separated words (repeatable; default: stdin lines)")

    p = sub.add_parser("eval", parents=[common, tables_opt, search_opt], help="error table over test sentences")
    p.add_argument("--test", help="test corpus (default: the training corpus, closed test)")
    p.add_argument("--corpus", help="train in memory from this corpus instead of --tables")
    p.add_argument("--order", type=_positive, default=None, help="training order with --corpus")
    p.add_argument("--open", action="store_true", help="80/20 split of --corpus by line index")
    p.add_argument("--models", type=_labels, default=["M2", "M3", "AM2", "AM3", "AMn"])
    p.add_argument("--tsv", help="also write the table as TSV")
    p.add_argument("--figure", help="also render the error distribution (png/svg/pdf)")

    p = sub.add_parser("params", parents=[common, tables_opt], help="parameter counts per model")
    p.add_argument("--models", type=_labels, default=None)

    p = sub.add_parser("counterexample", parents=[common], help="search for a coverage-merge failure")
    p.add_argument("--attempts", type=_positive, default=5000)
    p.add_argument("--out", help="write the instance as JSON")
    return parser


def _header(args, tables_dir=None):
    skip = {"command", "func"}
    config = " ".join(f"{k}={v}" for k, v in sorted(vars(args).items()) if k not in skip)
    lines = [f"# bagorder {__version__} {args.command}", f"# config: {config}"]
    if tables_dir:
        sums = " ".join(f"{k}={v}" for k, v in checksums(tables_dir).items())
        lines.append(f"# tables: {sums}")
    print("\n".join(lines))


def _load(args) -> Tables:
    if not args.tables:
        raise BagOrderError("no table directory: pass --tables or set BAGORDER_TABLES")
    if not os.path.isdir(args.tables):
        raise BagOrderError(f"table directory not found: {args.tables}")
    try:
        tables = Tables.load(args.tables)
    except OSError as exc:
        raise BagOrderError(f"cannot read tables: {exc}") from exc
    return tables.with_floor(args.floor) if args.floor else tables


def _check_order(model, order, tables):
    if model == EXACT and (order == FULL or order > tables.ngrams.order):
        raise ConfigurationError(f"exact model order {order} needs tables trained to at least that order "
                                 f"(trained: {tables.ngrams.order})")


def _inputs(values):
    if values:
        return list(values)
    return [line.rstrip("\r\n") for line in sys.stdin]


def cmd_train(args):
    if args.order == FULL:
        raise ConfigurationError("training needs an integer order")
    vocab = Vocab()
    sentences = []
    for path in args.corpus:
        sentences.extend(load_corpus(path, vocab))
    Tables.from_corpus(sentences, vocab, args.order, args.distance_cap).save(args.out)
    _header(args, args.out)
    print(f"sentences\t{len(sentences)}\nV\t{vocab.size}")


def cmd_score(args):
    tables = _load(args)
    _check_order(args.model, args.order, tables)
    _header(args, args.tables)
    vocab = tables.vocab.copy()
    for i, text in enumerate(_inputs(args.sentence), 1):
        s = parse_line(text, vocab, i)
        if args.model == EXACT:
            score = markov_score(s, args.order, tables.ngrams)
        else:
            score = approx_score(s, args.order, tables.pairs, tables.ngrams)
        flag = "\tclamped" if score.clamped else ""
        print(f"{' '.join(vocab.decode(s.tokens))}\t{score.value!r}{flag}")


def cmd_generate(args):
    tables = _load(args)
    cfg = SearchConfig(args.model, args.order, args.condition4, args.beam_width)
    _check_order(cfg.model, cfg.order, tables)
    _header(args, args.tables)
    if not cfg.condition4:
        print("# warning: coverage condition disabled; results may be suboptimal (unsafe)")
    if cfg.beam_width:
        print("# warning: beam search; optimality not guaranteed (approximate search)")
    vocab = tables.vocab.copy()
    for i, text in enumerate(_inputs(args.bag), 1):
        bag = Bag.of(parse_line(text, vocab, i).tokens)
        try:
            result = generate(bag, cfg, tables)
        except NoArrangement as exc:
            print(f"{text}\t-inf\t0\t0\t# {exc}")
            continue
        print(result.to_tsv(vocab))


def cmd_eval(args):
    configs = [SearchConfig.from_label(lab, condition4=args.condition4, beam_width=args.beam_width) for lab in args.models]
    if args.open and not args.corpus:
        raise ConfigurationError("--open needs --corpus")
    if args.corpus:
        vocab = Vocab()
        sentences = load_corpus(args.corpus, vocab)
        if args.open:
            train_set, test = split_open(sentences)
        else:
            train_set, test = sentences, None
        need = max([c.order for c in configs if c.model == EXACT] + [2])
        tables = Tables.from_corpus(train_set, vocab, args.order or need)
        if args.floor:
            tables = tables.with_floor(args.floor)
        tables_dir = None
    else:
        tables = _load(args)
        tables_dir = args.tables
        test = None
    if test is None:
        if not args.test and not args.corpus:
            raise ConfigurationError("eval needs --test (or --corpus for a closed test)")
        test = load_corpus(args.test or args.corpus, tables.vocab.copy())
    _header(args, tables_dir)
    report = evaluate(test, configs, tables, threads=args.threads, mode="open" if args.open else "closed")
    sys.stdout.write(report.render())
    if args.tsv:
        with open(args.tsv, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report.to_tsv())
    if args.figure:
        from .plotting import error_distribution_figure

        error_distribution_figure(report, args.figure)


def cmd_params(args):
    tables = _load(args)
    labels = args.models
    if labels is None:
        top = tables.ngrams.order
        labels = [f"M{k}" for k in range(2, top + 1)] + [f"AM{k}" for k in range(2, top + 1)] + ["AMn"]
    _header(args, args.tables)
    print("model\tparameters\tbound\tV\tL_or_n")
    for lab in labels:
        cfg = SearchConfig.from_label(lab)
        try:
            rep = param_count(tables, cfg.model, cfg.order)
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None
        print(f"{rep.label}\t{rep.distinct_parameters}\t{rep.bound_note}\t{rep.V}\t{rep.L_or_n}")


def cmd_counterexample(args):
    _header(args)
    found = find_counterexample(args.seed, args.attempts)
    if found is None:
        print("no counterexample found")
        return 1
    text = json.dumps(found, indent=2, sort_keys=True)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0


COMMANDS = {
    "train": cmd_train,
    "score": cmd_score,
    "generate": cmd_generate,
    "eval": cmd_eval,
    "params": cmd_params,
    "counterexample": cmd_counterexample,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args) or 0
    except BagOrderError as exc:
        print(f"bagorder: error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())
