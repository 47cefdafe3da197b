"""Per-account language features: lexicon scoring, 0-100 scaling, ranks.

Six features are surfaced: fairness, loyalty, subjectivity, fear, anger,
negativity. The first three correlate with real accounts, the last three
with suspicious ones, and the UI groups them that way.

Lexicon files: one term per line, "#" comments allowed, UTF-8. Terms may
be multi-word phrases; matching is greedy longest-match over tokens.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from statistics import mean, median

FEATURES = ("fairness", "loyalty", "subjectivity", "fear", "anger", "negativity")
REAL_LEANING = ("fairness", "loyalty", "subjectivity")
SUSPICIOUS_LEANING = ("fear", "anger", "negativity")


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class Lexicon:
    name: str
    terms: frozenset[tuple[str, ...]]  # each term a tuple of lowercase tokens
    max_len: int

    @classmethod
    def from_terms(cls, name: str, terms: list[str]) -> "Lexicon":
        split_terms = set()
        for term in terms:
            parts = tuple(term.lower().split())
            if parts:
                split_terms.add(parts)
        if not split_terms:
            raise LexiconError(f"lexicon {name!r} is empty")
        return cls(name, frozenset(split_terms), max(len(t) for t in split_terms))

    def __len__(self) -> int:
        return len(self.terms)


def load_lexicon_file(name: str, path: Path) -> Lexicon:
    terms = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                terms.append(line)
    return Lexicon.from_terms(name, terms)


def load_lexicons(directory: str | Path) -> dict[str, Lexicon]:
    """Load one term file per feature from a directory (<feature>.txt)."""
    directory = Path(directory)
    lexicons = {}
    missing = []
    for feature in FEATURES:
        path = directory / f"{feature}.txt"
        if not path.exists():
            missing.append(feature)
            continue
        lexicons[feature] = load_lexicon_file(feature, path)
    if missing:
        raise LexiconError(f"missing lexicon file(s) for: {', '.join(missing)}")
    return lexicons


def score_raw(tokens: list[str], lexicon: Lexicon) -> float:
    """Fraction of token positions covered by lexicon terms, in [0, 1].

    Phrases are matched greedily, longest first, left to right; a matched
    n-token phrase covers n positions. An empty token list scores 0.
    """
    if not tokens:
        return 0.0
    matched = 0
    i = 0
    n = len(tokens)
    while i < n:
        hit = 0
        for length in range(min(lexicon.max_len, n - i), 0, -1):
            if tuple(tokens[i : i + length]) in lexicon.terms:
                hit = length
                break
        if hit:
            matched += hit
            i += hit
        else:
            i += 1
    return matched / n


@dataclass(frozen=True)
class LanguageProfile:
    account_id: str
    handle: str
    raw: dict[str, float]
    scaled: dict[str, float]
    rank: dict[str, int]


@dataclass(frozen=True)
class FeatureStats:
    mean: dict[str, float]
    median: dict[str, float]


def scale_and_rank(
    raw_scores: dict[str, dict[str, float]]
) -> tuple[dict[str, dict[str, float]], dict[str, dict[str, int]]]:
    """Min-max scale raw scores to [0, 100] and rank accounts per feature.

    raw_scores maps feature -> handle -> raw fraction. Rank 1 is the
    highest scaled score; ties break by ascending handle. A feature where
    every account scores the same carries no signal: all scaled scores
    become 0 and ranks follow handle order.
    """
    scaled: dict[str, dict[str, float]] = {}
    ranks: dict[str, dict[str, int]] = {}
    for feature, per_account in raw_scores.items():
        if not per_account:
            raise LexiconError("scale_and_rank requires at least one account")
        values = per_account.values()
        low, high = min(values), max(values)
        span = high - low
        if span == 0:
            scaled[feature] = {handle: 0.0 for handle in per_account}
            ordering = sorted(per_account)
        else:
            # pin the extremes so float noise never escapes [0, 100]
            scaled[feature] = {
                handle: (
                    0.0 if value == low
                    else 100.0 if value == high
                    else min(100.0, max(0.0, 100.0 * (value - low) / span))
                )
                for handle, value in per_account.items()
            }
            ordering = sorted(per_account, key=lambda h: (-scaled[feature][h], h))
        ranks[feature] = {handle: i for i, handle in enumerate(ordering, start=1)}
    return scaled, ranks


def feature_stats(scaled: dict[str, dict[str, float]]) -> FeatureStats:
    means = {}
    medians = {}
    for feature, per_account in scaled.items():
        if not per_account:
            raise LexiconError("feature_stats requires at least one account")
        values = list(per_account.values())
        means[feature] = mean(values)
        medians[feature] = median(values)
    return FeatureStats(mean=means, median=medians)


def build_profiles(
    account_tokens: dict[str, list[str]],
    lexicons: dict[str, Lexicon],
    handles_by_id: dict[str, str],
) -> tuple[list[LanguageProfile], FeatureStats]:
    """Score every account on every feature and assemble profiles.

    account_tokens maps account id -> concatenated token list over the
    account's tweets. Profiles come back sorted by handle.
    """
    raw_by_feature: dict[str, dict[str, float]] = {f: {} for f in FEATURES}
    id_by_handle = {}
    raw_by_account: dict[str, dict[str, float]] = {}
    for account_id, tokens in account_tokens.items():
        handle = handles_by_id[account_id]
        id_by_handle[handle] = account_id
        raw_by_account[account_id] = {}
        for feature in FEATURES:
            value = score_raw(tokens, lexicons[feature])
            raw_by_feature[feature][handle] = value
            raw_by_account[account_id][feature] = value
    scaled, ranks = scale_and_rank(raw_by_feature)
    profiles = []
    for handle in sorted(id_by_handle):
        account_id = id_by_handle[handle]
        profiles.append(
            LanguageProfile(
                account_id=account_id,
                handle=handle,
                raw=raw_by_account[account_id],
                scaled={f: scaled[f][handle] for f in FEATURES},
                rank={f: ranks[f][handle] for f in FEATURES},
            )
        )
    stats = feature_stats(scaled)
    return profiles, stats
