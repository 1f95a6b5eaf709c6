"""Word-order recovery from bags of words with exact and approximate n-gram Markov models."""

__version__ = "0.1.0"

from .corpus import MARKER, MARKER_ID, Bag, Sentence, Vocab, load_corpus, pad, to_bag
from .errors import (
    BagOrderError,
    ConfigurationError,
    NoArrangement,
    ReservedTokenError,
    SearchSizeError,
    TableFormatError,
    TableVersionError,
)
from .scoring import FULL, LogScore, Ring, approx_score, markov_score, ring_init, ring_shift, tuple_min
from .search import SearchConfig, brute_force_generate, generate
from .tables import NGramTables, PairKey, PairTable, Tables, extract_pairs, ngram_cond_prob, pair_prob, train

__all__ = [
    "MARKER", "MARKER_ID", "Bag", "Sentence", "Vocab", "load_corpus", "pad", "to_bag",
    "BagOrderError", "ConfigurationError", "NoArrangement", "ReservedTokenError",
    "SearchSizeError", "TableFormatError", "TableVersionError",
    "FULL", "LogScore", "Ring", "approx_score", "markov_score", "ring_init", "ring_shift", "tuple_min",
    "SearchConfig", "brute_force_generate", "generate",
    "NGramTables", "PairKey", "PairTable", "Tables", "extract_pairs", "ngram_cond_prob", "pair_prob", "train",
]
