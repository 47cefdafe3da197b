"""Source-level misinformation analytics over a labeled tweet corpus.

Pipeline stages live in their own modules (corpus, lexicon, entities,
graph, embeddings, imagesim), persistence in store, the read-only JSON
API in service, and the command line in cli.
"""

__version__ = "0.1.0"

from .corpus import Account, AccountRegistry, Corpus, TimeRange, Tweet, tokenize
from .filters import FilterState, apply_filters

__all__ = [
    "Account",
    "AccountRegistry",
    "Corpus",
    "TimeRange",
    "Tweet",
    "tokenize",
    "FilterState",
    "apply_filters",
    "__version__",
]
