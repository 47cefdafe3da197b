"""Gazetteer-based named entity extraction and the account-entity index.

Entity matching is deterministic dictionary lookup: greedy longest match
first, left to right, case-insensitive, over the tokenized tweet. Each
token belongs to at most one mention. The gazetteer file carries one
record per line, tab-separated: canonical name, type, pipe-separated
surface forms. A blocklist file (one surface form per line) can veto
noisy forms without editing the gazetteer.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path

ENTITY_TYPES = ("person", "place", "organization")


class GazetteerError(ValueError):
    pass


@dataclass(frozen=True)
class EntityMention:
    tweet_id: str
    canonical: str
    entity_type: str
    start: int
    length: int


class Gazetteer:
    def __init__(self, entries: dict[str, tuple[str, set[str]]]):
        """entries: canonical name -> (entity type, surface forms)."""
        self.entries = {}
        self._forms: dict[tuple[str, ...], str] = {}
        self.max_len = 0
        for canonical, (entity_type, forms) in entries.items():
            if entity_type not in ENTITY_TYPES:
                raise GazetteerError(
                    f"unknown entity type {entity_type!r} for {canonical!r}"
                )
            if not forms:
                raise GazetteerError(f"entry {canonical!r} has no surface forms")
            self.entries[canonical] = entity_type
            for form in forms:
                key = tuple(form.lower().split())
                if not key:
                    raise GazetteerError(f"empty surface form for {canonical!r}")
                if key in self._forms and self._forms[key] != canonical:
                    raise GazetteerError(
                        f"surface form {form!r} claimed by both "
                        f"{self._forms[key]!r} and {canonical!r}"
                    )
                self._forms[key] = canonical
                self.max_len = max(self.max_len, len(key))

    def __len__(self) -> int:
        return len(self.entries)

    def type_of(self, canonical: str) -> str:
        return self.entries[canonical]

    def lookup(self, tokens: tuple[str, ...]) -> str | None:
        return self._forms.get(tokens)


def load_gazetteer(path: str | Path, blocklist_path: str | Path | None = None) -> Gazetteer:
    blocked: set[str] = set()
    if blocklist_path is not None:
        with open(blocklist_path, encoding="utf-8") as fh:
            blocked = {line.strip().lower() for line in fh if line.strip()}
    entries: dict[str, tuple[str, set[str]]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise GazetteerError(
                    f"{path}:{lineno}: expected name<TAB>type<TAB>form|form|..."
                )
            canonical = parts[0].strip().lower()
            entity_type = parts[1].strip().lower()
            forms = {
                f.strip().lower()
                for f in parts[2].split("|")
                if f.strip() and f.strip().lower() not in blocked
            }
            if canonical in entries:
                raise GazetteerError(f"{path}:{lineno}: duplicate entry {canonical!r}")
            if canonical in blocked or not forms:
                continue  # fully blocklisted names vanish from the gazetteer
            entries[canonical] = (entity_type, forms)
    return Gazetteer(entries)


def extract_entities(
    tokens: list[str], gazetteer: Gazetteer, tweet_id: str = ""
) -> list[EntityMention]:
    """Non-overlapping mentions, longest match first, left to right."""
    mentions = []
    i = 0
    n = len(tokens)
    while i < n:
        found = None
        for length in range(min(gazetteer.max_len, n - i), 0, -1):
            canonical = gazetteer.lookup(tuple(tokens[i : i + length]))
            if canonical is not None:
                found = (canonical, length)
                break
        if found:
            canonical, length = found
            mentions.append(
                EntityMention(
                    tweet_id=tweet_id,
                    canonical=canonical,
                    entity_type=gazetteer.type_of(canonical),
                    start=i,
                    length=length,
                )
            )
            i += length
        else:
            i += 1
    return mentions


class EntityIndex:
    """Mention counts per (entity, account) plus per-tweet mention lists."""

    def __init__(
        self,
        counts: dict[str, dict[str, int]],
        types: dict[str, str],
        mentions_by_tweet: dict[str, list[EntityMention]],
    ):
        self.counts = counts  # canonical -> account_id -> count
        self.types = types  # canonical -> entity type
        self.mentions_by_tweet = mentions_by_tweet
        self.type_totals = Counter()
        for canonical, per_account in counts.items():
            self.type_totals[types[canonical]] += sum(per_account.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, EntityIndex):
            return NotImplemented
        return (
            self.counts == other.counts
            and self.types == other.types
            and self.mentions_by_tweet == other.mentions_by_tweet
        )

    def total(self, canonical: str) -> int:
        return sum(self.counts.get(canonical, {}).values())

    def entities(self) -> list[str]:
        return sorted(self.counts)

    def __contains__(self, canonical: str) -> bool:
        return canonical in self.counts

    def tweets_mentioning(self, canonical: str) -> set[str]:
        return {
            tweet_id
            for tweet_id, mentions in self.mentions_by_tweet.items()
            if any(m.canonical == canonical for m in mentions)
        }


def build_entity_index(tokenized_tweets, gazetteer: Gazetteer) -> EntityIndex:
    """Index (tweet_id, account_id, tokens) triples through the gazetteer."""
    counts: dict[str, dict[str, int]] = {}
    mentions_by_tweet: dict[str, list[EntityMention]] = {}
    for tweet_id, account_id, tokens in tokenized_tweets:
        mentions = extract_entities(tokens, gazetteer, tweet_id=tweet_id)
        if mentions:
            mentions_by_tweet[tweet_id] = mentions
        for mention in mentions:
            per_account = counts.setdefault(mention.canonical, {})
            per_account[account_id] = per_account.get(account_id, 0) + 1
    types = {canonical: gazetteer.type_of(canonical) for canonical in counts}
    return EntityIndex(counts, types, mentions_by_tweet)


def top_entities(
    index: EntityIndex,
    entity_type: str,
    k: int,
    tweet_ids: set[str] | None = None,
) -> list[tuple[str, int]]:
    """Top-k (entity, count) of one type, optionally over a filtered tweet set.

    tweet_ids=None means unfiltered. Descending by count, ties by name.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    totals: Counter[str] = Counter()
    if tweet_ids is None:
        for canonical, per_account in index.counts.items():
            if index.types[canonical] == entity_type:
                totals[canonical] = sum(per_account.values())
    else:
        for tweet_id in tweet_ids:
            for mention in index.mentions_by_tweet.get(tweet_id, ()):
                if mention.entity_type == entity_type:
                    totals[mention.canonical] += 1
    ranked = sorted(totals.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


def join_token(canonical: str) -> str:
    """Canonical entity name as a single queryable token ("north korea" -> "north_korea")."""
    return "_".join(canonical.lower().split())


def join_entity_tokens(tokens: list[str], gazetteer: Gazetteer) -> list[str]:
    """Replace matched entity spans with their joined canonical token.

    Applied identically when preparing embedding training streams and
    when resolving queries, so multi-word entities stay queryable.
    """
    mentions = extract_entities(tokens, gazetteer)
    if not mentions:
        return list(tokens)
    out: list[str] = []
    i = 0
    by_start = {m.start: m for m in mentions}
    n = len(tokens)
    while i < n:
        mention = by_start.get(i)
        if mention is not None:
            out.append(join_token(mention.canonical))
            i += mention.length
        else:
            out.append(tokens[i])
            i += 1
    return out
