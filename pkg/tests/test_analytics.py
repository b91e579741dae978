import math
import random
from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moralmap.analytics import (
    AnalyticsError,
    FEATURE_KEYS,
    TweetFilter,
    aggregate_counties,
    bin_timeline,
    filter_tweets,
    frame_entropy,
    summarize_frames,
)
from moralmap.context import CountyContext, CovidSeries
from moralmap.corpus import Stance
from moralmap.taxonomy import default_taxonomy

from conftest import make_tweet

TAX = default_taxonomy()
FRAMES = TAX.frame_names()


def ctx(fips="00001", population=100000):
    return CountyContext(fips=fips, population=population, demographics={},
                         dem_share=0.5, rep_share=0.4, mask_use=0.6)


CONTEXTS = {"00001": ctx(), "00002": ctx("00002", 50000)}


def rand_tagged(n=200, seed=5):
    rng = random.Random(seed)
    out = []
    for i in range(n):
        out.append((
            make_tweet(
                tid=f"t{i}",
                ts=f"2020-03-{rng.randint(1, 28):02d}T06:00:00+00:00",
                frame=rng.choice(FRAMES),
                stance=rng.choice([Stance.PRO, Stance.ANTI, Stance.UNKNOWN]),
                sentiment=rng.uniform(-1, 1),
                vivid=rng.random() < 0.5,
                virality=rng.randint(0, 20),
            ),
            rng.choice(["00001", "00002"]),
        ))
    return out


STATE_OF = {"00001": "AA", "00002": "AB"}


def test_empty_filter_is_identity():
    tagged = rand_tagged()
    assert filter_tweets(tagged, TweetFilter(), STATE_OF) == tagged


def test_frame_state_conjunction_can_be_empty():
    tagged = [(make_tweet(frame="Care"), "00001"),
              (make_tweet(tid="t2", frame="Betrayal"), "00002")]
    flt = TweetFilter(frames=frozenset({"Betrayal"}), states=frozenset({"AA"}))
    assert filter_tweets(tagged, flt, STATE_OF) == []


def test_conjunction_equals_sequential_single_clause_filters():
    rng = random.Random(99)
    tagged = rand_tagged(300, seed=2)
    for _ in range(25):
        frames = frozenset(rng.sample(FRAMES, rng.randint(1, 4)))
        stances = frozenset(rng.sample([Stance.PRO, Stance.ANTI, Stance.UNKNOWN],
                                       rng.randint(1, 2)))
        d0 = date(2020, 3, rng.randint(1, 14))
        d1 = date(2020, 3, rng.randint(15, 28))
        combined = TweetFilter(frames=frames, stances=stances, date_from=d0, date_to=d1)
        sequential = filter_tweets(
            filter_tweets(
                filter_tweets(
                    filter_tweets(tagged, TweetFilter(frames=frames), STATE_OF),
                    TweetFilter(stances=stances), STATE_OF),
                TweetFilter(date_from=d0), STATE_OF),
            TweetFilter(date_to=d1), STATE_OF)
        assert filter_tweets(tagged, combined, STATE_OF) == sequential


def test_two_care_pro_tweets_hand_computed():
    tagged = [
        (make_tweet(tid="a", frame="Care", stance=Stance.PRO, sentiment=0.5), "00001"),
        (make_tweet(tid="b", frame="Care", stance=Stance.PRO, sentiment=0.7), "00001"),
    ]
    vectors, uncovered = aggregate_counties(tagged, CONTEXTS)
    v = vectors["00001"]
    assert uncovered == []
    assert len(v.values) == 14
    assert v.get("pro_share") == 1.0
    assert v.get("mean_sentiment") == pytest.approx(0.6)
    assert v.get("share_care") == 1.0
    assert v.get("frame_entropy") == 0.0
    assert v.get("log_count") == pytest.approx(math.log(3))
    assert v.get("per_capita") == pytest.approx(2 / 100000 * 100000)


def test_zero_tweet_county_yields_null_vector():
    vectors, _ = aggregate_counties([(make_tweet(), "00001")], CONTEXTS)
    assert "00002" not in vectors


def test_uniform_twelve_frames_max_entropy():
    tagged = [(make_tweet(tid=f"t{i}", frame=f), "00001")
              for i, f in enumerate(FRAMES)]
    vectors, _ = aggregate_counties(tagged, CONTEXTS)
    assert vectors["00001"].get("frame_entropy") == pytest.approx(1.0)


def test_unknown_stance_excluded_from_pro_share():
    tagged = [
        (make_tweet(tid="a", stance=Stance.PRO), "00001"),
        (make_tweet(tid="b", stance=Stance.UNKNOWN), "00001"),
    ]
    vectors, _ = aggregate_counties(tagged, CONTEXTS)
    assert vectors["00001"].get("pro_share") == 1.0


def test_all_unknown_stance_pro_share_is_nan():
    tagged = [(make_tweet(stance=Stance.UNKNOWN), "00001")]
    vectors, _ = aggregate_counties(tagged, CONTEXTS)
    assert math.isnan(vectors["00001"].get("pro_share"))


def test_missing_context_routed_to_coverage():
    vectors, uncovered = aggregate_counties([(make_tweet(), "99999")], CONTEXTS)
    assert vectors == {}
    assert uncovered == ["99999"]


def test_foundation_shares_sum_to_one():
    tagged = rand_tagged(500)
    vectors, _ = aggregate_counties(tagged, CONTEXTS)
    for v in vectors.values():
        assert sum(v.values[8:14]) == pytest.approx(1.0, abs=1e-9)
        assert 0.0 <= v.get("frame_entropy") <= 1.0


def test_aggregation_permutation_invariant():
    tagged = rand_tagged(100)
    shuffled = list(tagged)
    random.Random(1).shuffle(shuffled)
    v1, _ = aggregate_counties(tagged, CONTEXTS)
    v2, _ = aggregate_counties(shuffled, CONTEXTS)
    assert v1 == v2


def test_removing_tweet_changes_only_its_county():
    tagged = rand_tagged(100)
    removed = tagged[0]
    v1, _ = aggregate_counties(tagged, CONTEXTS)
    v2, _ = aggregate_counties(tagged[1:], CONTEXTS)
    other = "00002" if removed[1] == "00001" else "00001"
    assert v1[other] == v2[other]
    assert v1[removed[1]] != v2[removed[1]]


@given(st.lists(st.integers(min_value=0, max_value=1000), min_size=12, max_size=12))
def test_entropy_bounds_property(counts):
    h = frame_entropy(counts, 12)
    assert 0.0 <= h <= 1.0 + 1e-12
    nonzero = sum(1 for c in counts if c > 0)
    if nonzero == 1:
        assert h == 0.0
    if nonzero == 12 and len(set(counts)) == 1:
        assert h == pytest.approx(1.0)


# --- timeline ---


def test_one_week_one_bin():
    tagged = [(make_tweet(tid=f"t{i}", ts=f"2020-03-0{i % 7 + 1}T01:00:00+00:00"), "00001")
              for i in range(10)]
    bins = bin_timeline(tagged, None, width_days=7)
    assert len(bins) == 1
    assert bins[0].total == 10
    assert bins[0].new_cases == 0


def test_covid_deltas_distributed_into_bins():
    tagged = [(make_tweet(ts="2020-03-01T01:00:00+00:00"), "00001"),
              (make_tweet(tid="t2", ts="2020-03-03T01:00:00+00:00"), "00001")]
    covid = {"00001": CovidSeries(date(2020, 3, 1), (0, 3, 5), (0, 1, 1))}
    bins = bin_timeline(tagged, covid, width_days=1)
    assert [b.new_cases for b in bins] == [0, 3, 2]
    assert [b.new_deaths for b in bins] == [0, 1, 0]


def test_no_covid_series_bins_zero():
    tagged = rand_tagged(50)
    bins = bin_timeline(tagged, None, width_days=7)
    assert all(b.new_cases == 0 and b.new_deaths == 0 for b in bins)
    assert sum(b.total for b in bins) == 50


def test_bins_tile_range_exactly():
    tagged = rand_tagged(200)
    flt = TweetFilter(date_from=date(2020, 3, 1), date_to=date(2020, 3, 28))
    bins = bin_timeline(tagged, None, width_days=7, flt=flt, state_of=STATE_OF)
    assert [b.bin_start for b in bins] == [date(2020, 3, 1), date(2020, 3, 8),
                                           date(2020, 3, 15), date(2020, 3, 22)]


def test_inverted_range_errors():
    flt = TweetFilter(date_from=date(2020, 4, 1), date_to=date(2020, 3, 1))
    with pytest.raises(AnalyticsError):
        bin_timeline(rand_tagged(10), None, 1, flt, STATE_OF)


def test_width_zero_errors():
    with pytest.raises(AnalyticsError):
        bin_timeline(rand_tagged(10), None, 0)


# --- frame summaries ---


def test_all_care_summary():
    tagged = [(make_tweet(tid=f"t{i}", frame="Care"), "00001") for i in range(5)]
    rows = summarize_frames(tagged)
    assert len(rows) == 12
    by_frame = {r.frame: r.count for r in rows}
    assert by_frame["Care"] == 5
    assert sum(by_frame.values()) == 5


def test_summary_matches_groupby_oracle():
    tagged = rand_tagged(400, seed=9)
    rows = summarize_frames(tagged)
    oracle = {}
    for t, _ in tagged:
        oracle[t.frame.name] = oracle.get(t.frame.name, 0) + 1
    for r in rows:
        assert r.count == oracle.get(r.frame, 0)


def test_planted_dominance_reproduced():
    rng = random.Random(4)
    frames = ["Care"] * 60 + ["Harm"] * 40 + ["Liberty"] * 10
    tagged = [(make_tweet(tid=f"t{i}", frame=f), "00001")
              for i, f in enumerate(frames)]
    rows = {r.frame: r.count for r in summarize_frames(tagged)}
    assert rows["Care"] > rows["Harm"] > rows["Liberty"]


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=1, max_value=14))
def test_conservation_across_views(seed, width):
    rng = random.Random(seed)
    tagged = rand_tagged(150, seed=seed)
    frames = frozenset(rng.sample(FRAMES, rng.randint(1, 12))) if rng.random() < 0.7 else None
    stances = (frozenset(rng.sample([Stance.PRO, Stance.ANTI, Stance.UNKNOWN],
                                    rng.randint(1, 3)))
               if rng.random() < 0.5 else None)
    flt = TweetFilter(frames=frames, stances=stances)
    subset = filter_tweets(tagged, flt, STATE_OF)
    bins = bin_timeline(tagged, None, width, flt, STATE_OF)
    rows = summarize_frames(tagged, flt, STATE_OF)
    assert sum(b.total for b in bins) == len(subset) == sum(r.count for r in rows)
