from datetime import datetime, timezone

import pytest
from hypothesis import given
from hypothesis import strategies as st

from moralmap.corpus import (
    CorpusError,
    CorpusSchema,
    Stance,
    StanceLexicon,
    enrich_stance,
    estimate_stance,
    parse_corpus,
)

from conftest import make_tweet

HEADER = "id,timestamp,lat,lon,frame,stance,sentiment,vivid,virality,text,hashtags\n"


def write_corpus(tmp_path, lines):
    path = tmp_path / "corpus.csv"
    path.write_text(HEADER + "".join(line + "\n" for line in lines))
    return path


def valid_line(i=1, frame="Care", lat="40.0", ts="2020-03-10T10:00:00Z"):
    return f"t{i},{ts},{lat},-90.0,{frame},Pro,0.5,1,3,hello,#stayhome"


def test_all_valid_lines_parse(tmp_path):
    path = write_corpus(tmp_path, [valid_line(i) for i in range(1, 6)])
    tweets, report = parse_corpus(path)
    assert len(tweets) == 5
    assert len(report) == 0
    assert tweets[0].timestamp == datetime(2020, 3, 10, 10, tzinfo=timezone.utc)
    assert tweets[0].sentiment == 0.5
    assert tweets[0].vivid is True
    assert tweets[0].hashtags == ("stayhome",)


def test_unknown_frame_rejected_others_kept(tmp_path):
    path = write_corpus(tmp_path, [valid_line(1), valid_line(2, frame="NotAFrame"),
                                   valid_line(3)])
    tweets, report = parse_corpus(path)
    assert len(tweets) == 2
    assert report.rejects == [(2, "unknown-frame")]


def test_latitude_out_of_range_rejected(tmp_path):
    path = write_corpus(tmp_path, [valid_line(1, lat="95.0")])
    tweets, report = parse_corpus(path)
    assert tweets == []
    assert report.rejects == [(1, "out-of-range")]


def test_duplicate_id_keeps_first(tmp_path):
    path = write_corpus(tmp_path, [valid_line(1), valid_line(1)])
    tweets, report = parse_corpus(path)
    assert len(tweets) == 1
    assert report.rejects == [(2, "duplicate-id")]


def test_study_window_filters(tmp_path):
    path = write_corpus(tmp_path, [valid_line(1, ts="2019-01-01T00:00:00Z"),
                                   valid_line(2)])
    window = (datetime(2020, 3, 1, tzinfo=timezone.utc),
              datetime(2020, 5, 31, tzinfo=timezone.utc))
    tweets, report = parse_corpus(path, study_window=window)
    assert [t.id for t in tweets] == ["t2"]
    assert report.rejects == [(1, "outside-study-window")]


def test_unit_sentiment_remapped(tmp_path):
    path = write_corpus(tmp_path, ["t1,2020-03-10T10:00:00Z,40,-90,Care,Pro,0.75,0,0,,"])
    tweets, _ = parse_corpus(path, CorpusSchema(sentiment_range="unit"))
    assert tweets[0].sentiment == pytest.approx(0.5)


def test_freedom_alias_resolves_at_parse_time(tmp_path):
    path = write_corpus(tmp_path, [valid_line(1, frame="Freedom")])
    tweets, _ = parse_corpus(path)
    assert tweets[0].frame.name == "Liberty"


def test_missing_schema_column_is_hard_error(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("id,timestamp\n")
    with pytest.raises(CorpusError, match="missing column"):
        parse_corpus(path)


def test_unreadable_source_is_hard_error(tmp_path):
    with pytest.raises(CorpusError, match="not readable"):
        parse_corpus(tmp_path / "nope.csv")


def test_count_conservation(tmp_path):
    lines = [valid_line(i) for i in range(1, 8)]
    lines[2] = valid_line(3, lat="123")
    lines[5] = valid_line(6, frame="Bogus")
    path = write_corpus(tmp_path, lines)
    tweets, report = parse_corpus(path)
    assert len(tweets) + len(report) == len(lines)


# --- stance heuristic ---

LEX = StanceLexicon.from_lists(["#stayhome", "#staysafe"], ["#reopen", "#openup"])


def test_single_pro_match():
    t = make_tweet(hashtags=("stayhome",), stance=Stance.UNKNOWN)
    assert estimate_stance(t, LEX) is Stance.PRO


def test_no_evidence_is_unknown():
    assert estimate_stance(make_tweet(hashtags=()), LEX) is Stance.UNKNOWN


def test_tie_is_unknown():
    # verified by enumerating all four label assignments of a 2-hashtag tweet:
    # only (pro, anti) / (anti, pro) tie; both yield Unknown
    t = make_tweet(hashtags=("stayhome", "reopen"))
    assert estimate_stance(t, LEX) is Stance.UNKNOWN
    for a, b in [("stayhome", "staysafe"), ("reopen", "openup")]:
        expected = Stance.PRO if a in LEX.pro else Stance.ANTI
        assert estimate_stance(make_tweet(hashtags=(a, b)), LEX) is expected


def test_lexicon_overlap_rejected():
    with pytest.raises(ValueError, match="both"):
        StanceLexicon.from_lists(["x"], ["x"])


@given(st.lists(st.sampled_from(["stayhome", "staysafe", "reopen", "openup", "misc"]),
                max_size=8),
       st.randoms())
def test_stance_invariant_under_order_and_duplicates(tags, rnd):
    base = estimate_stance(make_tweet(hashtags=tuple(tags)), LEX)
    shuffled = list(tags) + ([rnd.choice(tags)] if tags else [])
    rnd.shuffle(shuffled)
    assert estimate_stance(make_tweet(hashtags=tuple(shuffled)), LEX) is base


def test_enrich_preserves_labeled_stance():
    labeled = make_tweet(stance=Stance.ANTI, hashtags=("stayhome",))
    unlabeled = make_tweet(tid="t2", stance=Stance.UNKNOWN, hashtags=("stayhome",))
    out = enrich_stance([labeled, unlabeled], LEX)
    assert out[0].stance is Stance.ANTI
    assert out[1].stance is Stance.PRO
