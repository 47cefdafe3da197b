"""Stacking filter semantics shared by every API view.

A filter state is a conjunction: tweets by the selected account AND
mentioning every selected entity AND inside the time range AND containing
both halves of the (entity, related word) pair. The empty state selects
everything. Filtering is a pure function of (corpus, entity index, state),
so identical requests always see identical results.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .corpus import Corpus, TimeRange, tokenize
from .entities import join_token

if TYPE_CHECKING:
    from .entities import EntityIndex


class FilterError(ValueError):
    pass


@dataclass(frozen=True)
class FilterState:
    account: str | None = None  # handle
    entities: frozenset[str] = frozenset()  # canonical names
    time: TimeRange | None = None
    word_pair: tuple[str, str] | None = None  # (entity, related word)

    def is_empty(self) -> bool:
        return (
            self.account is None
            and not self.entities
            and self.time is None
            and self.word_pair is None
        )


class TokenCache:
    """Entity-joined token sets per tweet, built lazily for word filters."""

    def __init__(self, corpus: Corpus, index: "EntityIndex"):
        self._corpus = corpus
        self._index = index
        self._sets: dict[str, frozenset[str]] = {}

    def tokens_of(self, tweet_id: str) -> frozenset[str]:
        cached = self._sets.get(tweet_id)
        if cached is None:
            tweet = self._corpus.get(tweet_id)
            tokens = set(tokenize(tweet.text))
            for mention in self._index.mentions_by_tweet.get(tweet_id, ()):
                tokens.add(join_token(mention.canonical))
            cached = frozenset(tokens)
            self._sets[tweet_id] = cached
        return cached


def apply_filters(
    corpus: Corpus,
    index: "EntityIndex",
    state: FilterState,
    token_cache: TokenCache | None = None,
) -> set[str]:
    """Tweet ids surviving the conjunction of all active filters."""
    if state.account is not None:
        account = corpus.registry.get(state.account)
        if account is None:
            raise FilterError(f"unknown account filter: {state.account!r}")
        selected = {t.id for t in corpus.by_account(account.id)}
    else:
        selected = {t.id for t in corpus}

    for canonical in sorted(state.entities):
        if canonical not in index:
            raise FilterError(f"unknown entity filter: {canonical!r}")
        selected &= index.tweets_mentioning(canonical)

    if state.time is not None:
        selected = {
            tweet_id
            for tweet_id in selected
            if corpus.get(tweet_id).timestamp in state.time
        }

    if state.word_pair is not None:
        entity_word, related_word = state.word_pair
        cache = token_cache or TokenCache(corpus, index)
        needed = {join_token(entity_word), related_word.lower()}
        selected = {
            tweet_id
            for tweet_id in selected
            if needed <= cache.tokens_of(tweet_id)
        }
    return selected
