"""Account registry, tweet corpus, tokenization, and daily tweet counts.

Input formats:
  * account list: one record per line, tab-separated:
    handle, label ("real"|"suspicious"), description, location. UTF-8.
  * tweet corpus: JSONL, one object per line with fields
    id, account (handle), created_at (ISO-8601 UTC), text,
    mentions (array of handles), retweet_of (handle or null),
    images (array of image ids). UTF-8.
"""

from __future__ import annotations

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from pathlib import Path
from typing import Iterator

logger = logging.getLogger(__name__)

REAL = "real"
SUSPICIOUS = "suspicious"
LABELS = (REAL, SUSPICIOUS)


class CorpusError(ValueError):
    """Unrecoverable problem in an input file."""


@dataclass(frozen=True)
class Account:
    id: str
    handle: str
    label: str
    description: str = ""
    location: str | None = None


@dataclass(frozen=True)
class Tweet:
    id: str
    account_id: str
    timestamp: datetime
    text: str
    mentions: tuple[str, ...] = ()
    retweet_of: str | None = None
    image_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class TimeRange:
    """Half-open UTC interval [start, end)."""

    start: datetime
    end: datetime

    def __post_init__(self) -> None:
        object.__setattr__(self, "start", as_utc(self.start))
        object.__setattr__(self, "end", as_utc(self.end))
        if not self.start < self.end:
            raise ValueError(f"empty time range: {self.start} >= {self.end}")

    def __contains__(self, instant: datetime) -> bool:
        return self.start <= as_utc(instant) < self.end


def as_utc(instant: datetime) -> datetime:
    """Normalize a datetime to UTC; naive datetimes are taken as UTC."""
    if instant.tzinfo is None:
        return instant.replace(tzinfo=timezone.utc)
    return instant.astimezone(timezone.utc)


def parse_timestamp(value: str) -> datetime:
    # Python 3.10 fromisoformat rejects the trailing 'Z'.
    if value.endswith(("Z", "z")):
        value = value[:-1] + "+00:00"
    return as_utc(datetime.fromisoformat(value))


class AccountRegistry:
    """Labeled accounts keyed by case-insensitive handle.

    Iteration order is ascending by lowercased handle, so every
    registry-driven computation is deterministic.
    """

    def __init__(self, accounts: list[Account]):
        by_handle: dict[str, Account] = {}
        for account in accounts:
            key = account.handle.lower()
            if not key:
                raise CorpusError("empty account handle")
            if key in by_handle:
                raise CorpusError(f"duplicate account handle: {account.handle!r}")
            if account.label not in LABELS:
                raise CorpusError(
                    f"unknown label {account.label!r} for handle {account.handle!r}"
                )
            by_handle[key] = account
        self._by_handle = dict(sorted(by_handle.items()))
        self._by_id = {a.id: a for a in self._by_handle.values()}

    def __len__(self) -> int:
        return len(self._by_handle)

    def __iter__(self) -> Iterator[Account]:
        return iter(self._by_handle.values())

    def __contains__(self, handle: str) -> bool:
        return handle.lower() in self._by_handle

    def get(self, handle: str) -> Account | None:
        return self._by_handle.get(handle.lower())

    def by_id(self, account_id: str) -> Account:
        return self._by_id[account_id]

    def count(self, label: str) -> int:
        return sum(1 for a in self if a.label == label)

    @property
    def handles(self) -> list[str]:
        return [a.handle for a in self]


def load_accounts(path: str | Path) -> AccountRegistry:
    """Read the tab-separated account list into a registry."""
    accounts: list[Account] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise CorpusError(f"{path}:{lineno}: expected handle<TAB>label")
            handle = parts[0].strip()
            label = parts[1].strip()
            description = parts[2] if len(parts) > 2 else ""
            location = parts[3] if len(parts) > 3 and parts[3] else None
            accounts.append(
                Account(
                    id=handle.lower(),
                    handle=handle,
                    label=label,
                    description=description,
                    location=location,
                )
            )
    return AccountRegistry(accounts)


_TWEET_FIELDS = ("id", "account", "created_at", "text")


def _parse_tweet_record(record: dict, registry: AccountRegistry) -> Tweet:
    for name in _TWEET_FIELDS:
        if name not in record:
            raise CorpusError(f"tweet record missing field {name!r}")
    account = registry.get(str(record["account"]))
    if account is None:
        raise CorpusError(f"unregistered account: {record['account']!r}")
    return Tweet(
        id=str(record["id"]),
        account_id=account.id,
        timestamp=parse_timestamp(str(record["created_at"])),
        text=str(record["text"]),
        mentions=tuple(str(m) for m in record.get("mentions") or ()),
        retweet_of=record.get("retweet_of") or None,
        image_ids=tuple(str(i) for i in record.get("images") or ()),
    )


class Corpus:
    """Immutable tweet collection bound to a registry."""

    def __init__(self, tweets: list[Tweet], registry: AccountRegistry, skipped: int = 0):
        self.tweets: tuple[Tweet, ...] = tuple(tweets)
        self.registry = registry
        self.skipped = skipped
        self._by_id = {t.id: t for t in self.tweets}
        by_account: dict[str, list[Tweet]] = {}
        for tweet in self.tweets:
            by_account.setdefault(tweet.account_id, []).append(tweet)
        self._by_account = by_account

    def __len__(self) -> int:
        return len(self.tweets)

    def __iter__(self) -> Iterator[Tweet]:
        return iter(self.tweets)

    def get(self, tweet_id: str) -> Tweet | None:
        return self._by_id.get(tweet_id)

    def by_account(self, account_id: str) -> tuple[Tweet, ...]:
        return tuple(self._by_account.get(account_id, ()))

    def count_for(self, account_id: str) -> int:
        return len(self._by_account.get(account_id, ()))


def load_tweets(path: str | Path, registry: AccountRegistry, strict: bool = False) -> Corpus:
    """Read the JSONL tweet corpus.

    Records that fail to parse or reference an unregistered account are
    skipped with a counted warning; with strict=True they abort the load.
    """
    if len(registry) == 0:
        raise CorpusError("cannot load tweets against an empty account registry")
    tweets: list[Tweet] = []
    skipped = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                if not isinstance(record, dict):
                    raise CorpusError("tweet record is not a JSON object")
                tweets.append(_parse_tweet_record(record, registry))
            except (json.JSONDecodeError, CorpusError, ValueError) as exc:
                if strict:
                    raise CorpusError(f"{path}:{lineno}: {exc}") from exc
                skipped += 1
                logger.warning("skipping tweet record at %s:%d: %s", path, lineno, exc)
    return Corpus(tweets, registry, skipped=skipped)


_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_TOKEN_RE = re.compile(r"[#@]\w+|\w+")


def tokenize(text: str) -> list[str]:
    """Lowercase tokens with URLs removed.

    "@handle" and "#tag" survive as single tokens; everything else is
    split on word boundaries, so punctuation and apostrophes drop out.
    """
    return _TOKEN_RE.findall(_URL_RE.sub(" ", text.lower()))


def daily_counts(
    corpus: Corpus, account: Account, time_range: TimeRange
) -> list[tuple[date, int]]:
    """Zero-filled per-UTC-day tweet counts for one account."""
    if corpus.registry.get(account.handle) is None:
        raise CorpusError(f"unknown account: {account.handle!r}")
    buckets: Counter[date] = Counter()
    for tweet in corpus.by_account(account.id):
        if tweet.timestamp in time_range:
            buckets[tweet.timestamp.date()] += 1
    series: list[tuple[date, int]] = []
    day = time_range.start.date()
    last = (time_range.end - timedelta(microseconds=1)).date()
    while day <= last:
        series.append((day, buckets.get(day, 0)))
        day += timedelta(days=1)
    return series
