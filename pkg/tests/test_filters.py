"""Stacking filter semantics: conjunction, emptiness, and error paths."""

from datetime import datetime, timezone

import pytest
from hypothesis import given, strategies as st

from sourcesift.corpus import Account, AccountRegistry, Corpus, TimeRange, Tweet, tokenize
from sourcesift.entities import Gazetteer, build_entity_index
from sourcesift.filters import FilterError, FilterState, TokenCache, apply_filters


def ts(day, hour=12):
    return datetime(2018, 3, day, hour, tzinfo=timezone.utc)


TWEET_ROWS = [
    # (id, account_id, day, text); three of the ten mention gop
    ("t01", "alpha", 1, "GOP blocks the bill"),
    ("t02", "alpha", 2, "the gop caucus meets today"),
    ("t03", "bravo", 3, "Quinn praises the GOP plan"),
    ("t04", "bravo", 4, "mara quinn on premiums again"),
    ("t05", "bravo", 5, "premiums rise downtown"),
    ("t06", "umbra", 6, "they hide the truth"),
    ("t07", "umbra", 7, "quinn hides premiums truth"),
    ("t08", "umbra", 8, "nothing to see here"),
    ("t09", "alpha", 9, "weather is calm"),
    ("t10", "alpha", 10, "quinn speaks at noon"),
]


@pytest.fixture(scope="module")
def world():
    registry = AccountRegistry(
        [
            Account(id="alpha", handle="Alpha", label="real"),
            Account(id="bravo", handle="Bravo", label="real"),
            Account(id="umbra", handle="Umbra", label="suspicious"),
        ]
    )
    tweets = [
        Tweet(id=tweet_id, account_id=account_id, timestamp=ts(day), text=text)
        for tweet_id, account_id, day, text in TWEET_ROWS
    ]
    corpus = Corpus(tweets, registry)
    gazetteer = Gazetteer(
        {
            "gop": ("organization", {"gop"}),
            "mara quinn": ("person", {"mara quinn", "quinn"}),
        }
    )
    index = build_entity_index(
        [(t.id, t.account_id, tuple(tokenize(t.text))) for t in tweets], gazetteer
    )
    return corpus, index


ALL_IDS = {row[0] for row in TWEET_ROWS}


def test_empty_state_selects_everything(world):
    corpus, index = world
    assert FilterState().is_empty()
    assert apply_filters(corpus, index, FilterState()) == ALL_IDS


def test_account_filter(world):
    corpus, index = world
    got = apply_filters(corpus, index, FilterState(account="Bravo"))
    assert got == {"t03", "t04", "t05"}
    # handles are case-insensitive
    assert apply_filters(corpus, index, FilterState(account="bravo")) == got


def test_unknown_account_raises(world):
    corpus, index = world
    with pytest.raises(FilterError, match="unknown account"):
        apply_filters(corpus, index, FilterState(account="Nobody"))


def test_entity_filter_counts_planted_subset(world):
    corpus, index = world
    got = apply_filters(corpus, index, FilterState(entities=frozenset({"gop"})))
    assert got == {"t01", "t02", "t03"}
    assert len(got) == 3 and len(ALL_IDS) == 10


def test_entity_filter_matches_aliases(world):
    corpus, index = world
    got = apply_filters(
        corpus, index, FilterState(entities=frozenset({"mara quinn"}))
    )
    assert got == {"t03", "t04", "t07", "t10"}


def test_unknown_entity_raises(world):
    corpus, index = world
    with pytest.raises(FilterError, match="unknown entity"):
        apply_filters(corpus, index, FilterState(entities=frozenset({"nessie"})))


def test_time_filter_is_half_open(world):
    corpus, index = world
    state = FilterState(time=TimeRange(ts(2, 0), ts(4, 12)))
    assert apply_filters(corpus, index, state) == {"t02", "t03"}


def test_word_pair_requires_both_halves(world):
    corpus, index = world
    state = FilterState(word_pair=("mara quinn", "premiums"))
    # t03 mentions the entity without the word; t05 the word without the entity
    assert apply_filters(corpus, index, state) == {"t04", "t07"}


def test_word_pair_is_case_insensitive_on_the_word(world):
    corpus, index = world
    state = FilterState(word_pair=("mara quinn", "PREMIUMS"))
    assert apply_filters(corpus, index, state) == {"t04", "t07"}


def test_word_pair_with_unmentioned_entity_selects_nothing(world):
    corpus, index = world
    state = FilterState(word_pair=("atlantis", "premiums"))
    assert apply_filters(corpus, index, state) == set()


def test_conjunction_is_intersection_of_singletons(world):
    corpus, index = world
    state = FilterState(
        account="Bravo",
        entities=frozenset({"gop"}),
        time=TimeRange(ts(1, 0), ts(6, 0)),
    )
    singletons = [
        FilterState(account="Bravo"),
        FilterState(entities=frozenset({"gop"})),
        FilterState(time=TimeRange(ts(1, 0), ts(6, 0))),
    ]
    expected = ALL_IDS.copy()
    for single in singletons:
        expected &= apply_filters(corpus, index, single)
    assert apply_filters(corpus, index, state) == expected == {"t03"}


def test_shared_token_cache_matches_fresh_evaluation(world):
    corpus, index = world
    cache = TokenCache(corpus, index)
    state = FilterState(word_pair=("gop", "bill"))
    assert apply_filters(corpus, index, state, cache) == apply_filters(
        corpus, index, state
    ) == {"t01"}


ACCOUNTS = st.sampled_from([None, "Alpha", "Bravo", "Umbra"])
ENTITIES = st.frozensets(st.sampled_from(["gop", "mara quinn"]), max_size=2)
TIMES = st.sampled_from(
    [None, TimeRange(ts(1, 0), ts(6, 0)), TimeRange(ts(4, 0), ts(11, 0))]
)
PAIRS = st.sampled_from(
    [None, ("mara quinn", "premiums"), ("gop", "bill"), ("gop", "zzz")]
)


@given(account=ACCOUNTS, entities=ENTITIES, time=TIMES, pair=PAIRS)
def test_filters_conjunctive_and_monotone(world, account, entities, time, pair):
    corpus, index = world
    state = FilterState(account=account, entities=entities, time=time, word_pair=pair)
    combined = apply_filters(corpus, index, state)

    expected = ALL_IDS.copy()
    if account is not None:
        expected &= apply_filters(corpus, index, FilterState(account=account))
    for canonical in entities:
        expected &= apply_filters(
            corpus, index, FilterState(entities=frozenset({canonical}))
        )
    if time is not None:
        expected &= apply_filters(corpus, index, FilterState(time=time))
    if pair is not None:
        expected &= apply_filters(corpus, index, FilterState(word_pair=pair))
    assert combined == expected
    assert combined <= ALL_IDS
