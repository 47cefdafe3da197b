import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sourcesift.lexicon import (
    FEATURES,
    Lexicon,
    LexiconError,
    build_profiles,
    feature_stats,
    load_lexicons,
    scale_and_rank,
    score_raw,
)


def lex(*terms):
    return Lexicon.from_terms("test", list(terms))


def test_load_lexicons_missing_feature_names_it(tmp_path):
    for feature in FEATURES:
        if feature != "anger":
            (tmp_path / f"{feature}.txt").write_text("calm\n", encoding="utf-8")
    with pytest.raises(LexiconError, match="anger"):
        load_lexicons(tmp_path)


def test_load_lexicons_fixture_counts(fixture_dir):
    lexicons = load_lexicons(fixture_dir / "lexicons")
    assert set(lexicons) == set(FEATURES)
    for feature in FEATURES:
        assert len(lexicons[feature].terms) == 10


def test_score_raw_hand_case():
    assert score_raw(["angry", "angry", "calm"], lex("angry")) == pytest.approx(2 / 3)


def test_score_raw_empty_tokens_is_zero():
    assert score_raw([], lex("angry")) == 0.0


def test_score_raw_disjoint_lexicon_is_zero():
    assert score_raw(["calm", "day"], lex("angry")) == 0.0


def test_score_raw_multiword_counts_matched_positions():
    # "blood boil" covers two of four positions
    assert score_raw(["my", "blood", "boil", "now"], lex("blood boil")) == pytest.approx(0.5)


def test_score_raw_greedy_longest_match_wins():
    lexicon = lex("blood", "blood boil")
    assert score_raw(["blood", "boil"], lexicon) == pytest.approx(1.0)


def test_scale_and_rank_hand_case():
    raws = {"f": {"a": 0.1, "b": 0.3, "c": 0.2}}
    scaled, ranks = scale_and_rank(raws)
    assert scaled["f"]["a"] == 0.0  # extremes are exact by construction
    assert scaled["f"]["b"] == 100.0
    assert scaled["f"]["c"] == pytest.approx(50.0)
    assert ranks["f"] == {"b": 1, "c": 2, "a": 3}


def test_scale_and_rank_degenerate_feature_all_zero_handle_order():
    raws = {"f": {"b": 0.2, "a": 0.2, "c": 0.2}}
    scaled, ranks = scale_and_rank(raws)
    assert scaled["f"] == {"a": 0.0, "b": 0.0, "c": 0.0}
    assert ranks["f"] == {"a": 1, "b": 2, "c": 3}


def test_scale_and_rank_ties_break_by_handle():
    raws = {"f": {"zeta": 0.5, "alpha": 0.5, "mid": 0.0}}
    _, ranks = scale_and_rank(raws)
    assert ranks["f"] == {"alpha": 1, "zeta": 2, "mid": 3}


def test_feature_stats_hand_case():
    stats = feature_stats({"f": {"a": 0.0, "b": 50.0, "c": 100.0}})
    assert stats.mean["f"] == pytest.approx(50.0)
    assert stats.median["f"] == pytest.approx(50.0)


def test_feature_stats_single_account():
    stats = feature_stats({"f": {"a": 42.0}})
    assert stats.mean["f"] == 42.0
    assert stats.median["f"] == 42.0


def test_rank_permutation_on_200_random_profiles():
    # acceptance: ranks form a permutation of 1..N for every feature,
    # scaled values stay in [0, 100]
    rng = random.Random(20180301)
    for trial in range(200):
        n = rng.randint(1, 17)
        handles = [f"acc{i:02d}" for i in range(n)]
        raws = {
            feature: {h: rng.choice([0.0, rng.random()]) for h in handles}
            for feature in FEATURES
        }
        scaled, ranks = scale_and_rank(raws)
        for feature in FEATURES:
            assert sorted(ranks[feature].values()) == list(range(1, n + 1))
            for value in scaled[feature].values():
                assert 0.0 <= value <= 100.0


@given(
    st.dictionaries(
        st.text(alphabet="abcdefgh", min_size=1, max_size=6),
        st.floats(min_value=0, max_value=1, allow_nan=False),
        min_size=1,
        max_size=8,
    )
)
def test_rank_matches_scaled_ordering(raw_by_handle):
    scaled, ranks = scale_and_rank({"f": raw_by_handle})
    by_rank = sorted(raw_by_handle, key=lambda h: ranks["f"][h])
    for earlier, later in zip(by_rank, by_rank[1:]):
        assert (scaled["f"][earlier], later) >= (scaled["f"][later], earlier)


def test_build_profiles_orders_by_handle_and_keeps_all_features():
    lexicons = {feature: lex("term" + feature) for feature in FEATURES}
    tokens = {"b": ["termanger"], "a": ["calm"]}
    profiles, stats = build_profiles(tokens, lexicons, {"a": "Alpha", "b": "Beta"})
    assert [p.handle for p in profiles] == ["Alpha", "Beta"]
    for profile in profiles:
        assert set(profile.raw) == set(FEATURES)
        assert set(profile.scaled) == set(FEATURES)
        assert set(profile.rank) == set(FEATURES)
    assert set(stats.mean) == set(FEATURES)


def test_planted_anger_account_gets_rank_one(bundle, meta):
    profiles = {p.handle: p for p in bundle.profiles}
    anger_rank_1 = [h for h, p in profiles.items() if p.rank["anger"] == 1]
    assert anger_rank_1 == [meta["anger_account"]]
    raws = sorted((p.raw["anger"], h) for h, p in profiles.items())
    # strict dominance, not a tie broken by handle order
    assert raws[-1][1] == meta["anger_account"]
    assert raws[-1][0] > raws[-2][0]
