"""Scalar sentiment scoring, Pearson correlation, confidence filtering, stability."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poliscope.annotations import SentimentDistribution
from poliscope.sentiment import (
    argmax_class,
    confidence,
    filter_most_confident,
    mean_score,
    pearson,
    score_mention,
    stability_check,
)

import oracles
from builders import linked_mention, no_flip_mentions, noisy_mentions


def dist(p_neg, p_neu, p_pos):
    return SentimentDistribution(p_negative=p_neg, p_neutral=p_neu, p_positive=p_pos)


class TestArgmax:
    def test_clear_winners(self):
        assert argmax_class(dist(0.7, 0.2, 0.1)) == "negative"
        assert argmax_class(dist(0.2, 0.7, 0.1)) == "neutral"
        assert argmax_class(dist(0.1, 0.2, 0.7)) == "positive"

    def test_two_way_tie_resolves_neutral(self):
        assert argmax_class(dist(0.4, 0.2, 0.4)) == "neutral"
        assert argmax_class(dist(0.4, 0.4, 0.2)) == "neutral"

    def test_three_way_tie_resolves_neutral(self):
        third = 1.0 / 3.0
        assert argmax_class(dist(third, third, third)) == "neutral"

    def test_scores(self):
        assert score_mention(dist(0.7, 0.2, 0.1)) == -1.0
        assert score_mention(dist(0.1, 0.7, 0.2)) == 0.0
        assert score_mention(dist(0.1, 0.2, 0.7)) == 1.0

    def test_expected_mode(self):
        assert score_mention(dist(0.1, 0.2, 0.7), "expected") == 0.7 - 0.1
        assert score_mention(dist(0.5, 0.3, 0.2), "expected") == 0.2 - 0.5

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            score_mention(dist(0.1, 0.2, 0.7), "softmax")

    def test_confidence_is_max_probability(self):
        assert confidence(dist(0.1, 0.2, 0.7)) == 0.7


class TestMean:
    def test_mean(self):
        assert mean_score([1.0, 0.0, -1.0, 1.0]) == 0.25

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            mean_score([])


class TestPearson:
    def test_perfect_line(self):
        assert pearson([1.0, 2.0, 3.0], [10.0, 20.0, 30.0]) == pytest.approx(1.0, abs=1e-15)

    def test_perfect_inverse(self):
        assert pearson([1.0, 2.0, 3.0], [3.0, 2.0, 1.0]) == pytest.approx(-1.0, abs=1e-15)

    def test_frozen_value_matches_reference(self):
        x = [2.0, 4.0, 5.0, 9.0]
        y = [1.0, 3.0, 2.0, 8.0]
        assert pearson(x, y) == oracles.pearson_reference(x, y)
        assert pearson(x, y) == pytest.approx(0.9468641529479987, abs=1e-12)

    def test_zero_variance_rejected(self):
        with pytest.raises(ValueError):
            pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            pearson([1.0, 2.0, 3.0], [5.0, 5.0, 5.0])

    def test_short_input_rejected(self):
        with pytest.raises(ValueError):
            pearson([1.0], [2.0])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            pearson([1.0, 2.0], [1.0, 2.0, 3.0])

    @given(
        st.lists(st.floats(-100, 100, allow_nan=False), min_size=3, max_size=30),
        st.floats(0.1, 5.0),
        st.floats(-10.0, 10.0),
    )
    def test_affine_invariance(self, x, a, b):
        if len(set(x)) < 2:
            return
        y = [a * v + b for v in x]
        try:
            r = pearson(x, y)
        except ValueError:
            return  # a*x+b collapsed to a constant at float precision
        assert r == pytest.approx(1.0, abs=1e-9)
        assert abs(r) <= 1.0 + 1e-12

    @given(
        st.lists(
            st.tuples(
                st.floats(-10, 10, allow_nan=False), st.floats(-10, 10, allow_nan=False)
            ),
            min_size=3,
            max_size=30,
        )
    )
    def test_symmetry_and_bounds(self, pairs):
        x = [p[0] for p in pairs]
        y = [p[1] for p in pairs]
        if len(set(x)) < 2 or len(set(y)) < 2:
            return
        try:
            r = pearson(x, y)
        except ValueError:
            return  # degenerate after centering
        assert r == pearson(y, x)
        assert abs(r) <= 1.0 + 1e-12


class TestConfidenceFilter:
    def test_keeps_ceiling_quota_per_class(self):
        mentions = (
            [linked_mention("A", "positive", 0.9 - i * 0.01, i) for i in range(5)]
            + [linked_mention("B", "negative", 0.9 - i * 0.01, 10 + i) for i in range(3)]
        )
        kept = filter_most_confident(mentions, 0.5)
        by_class = {"positive": 0, "negative": 0}
        for m in kept:
            by_class[argmax_class(m.sentiment)] += 1
        assert by_class == {"positive": 3, "negative": 2}  # ceil(2.5), ceil(1.5)

    def test_most_confident_survive(self):
        mentions = [linked_mention("A", "positive", c, i) for i, c in enumerate([0.9, 0.8, 0.7, 0.6])]
        kept = filter_most_confident(mentions, 0.5)
        assert [confidence(m.sentiment) for m in kept] == [0.9, 0.8]

    def test_fraction_one_is_identity(self):
        mentions = [linked_mention("A", "positive", 0.9 - i * 0.05, i) for i in range(7)]
        assert filter_most_confident(mentions, 1.0) == mentions

    def test_order_preserved(self):
        mentions = [
            linked_mention("A", "positive", 0.6, 0),
            linked_mention("A", "negative", 0.9, 1),
            linked_mention("A", "positive", 0.9, 2),
        ]
        kept = filter_most_confident(mentions, 0.5)
        assert [m.doc_id for m in kept] == ["d00001", "d00002"]

    def test_ties_break_by_doc_then_span(self):
        a = linked_mention("A", "positive", 0.8, 2)
        b = linked_mention("B", "positive", 0.8, 1)
        kept = filter_most_confident([a, b], 0.5)
        assert kept == [b]  # same confidence, earlier doc_id wins

    def test_bad_fraction_rejected(self):
        with pytest.raises(ValueError):
            filter_most_confident([], 0.0)
        with pytest.raises(ValueError):
            filter_most_confident([], 1.1)

    @given(
        st.lists(
            st.tuples(
                st.sampled_from(["A", "B", "C"]),
                st.sampled_from(["negative", "neutral", "positive"]),
                st.floats(0.51, 0.95),
            ),
            max_size=40,
        ),
        st.floats(0.05, 1.0),
    )
    def test_quota_property(self, specs, fraction):
        mentions = [linked_mention(e, w, c, i) for i, (e, w, c) in enumerate(specs)]
        kept = filter_most_confident(mentions, fraction)
        totals, kept_counts = {}, {}
        for m in mentions:
            totals[argmax_class(m.sentiment)] = totals.get(argmax_class(m.sentiment), 0) + 1
        for m in kept:
            kept_counts[argmax_class(m.sentiment)] = kept_counts.get(argmax_class(m.sentiment), 0) + 1
        for cls, total in totals.items():
            assert kept_counts.get(cls, 0) == math.ceil(fraction * total)
        it = iter(mentions)
        assert all(m in it for m in kept)  # kept is a subsequence


class TestStability:
    def test_engineered_no_flip_corpus_is_perfectly_stable(self):
        result = stability_check(no_flip_mentions(), keep_fraction=0.5)
        assert result.pearson_mentions == pytest.approx(1.0, abs=1e-12)
        assert result.pearson_sentiment == pytest.approx(1.0, abs=1e-12)
        assert result.support_size == 4

    def test_fraction_one_is_perfectly_stable(self):
        result = stability_check(noisy_mentions(seed=11), keep_fraction=1.0)
        assert result.pearson_mentions == pytest.approx(1.0, abs=1e-12)
        assert result.pearson_sentiment == pytest.approx(1.0, abs=1e-12)

    def test_matches_reference_exactly_on_noisy_corpus(self):
        from poliscope.annotations import annotation_to_record

        mentions = noisy_mentions(seed=23)
        result = stability_check(mentions, top_k=25, keep_fraction=0.4)
        records = [annotation_to_record(m) for m in mentions]
        ref_mentions, ref_sentiment = oracles.stability_reference(
            records, top_k=25, keep_fraction=0.4
        )
        assert result.pearson_mentions == ref_mentions
        assert result.pearson_sentiment == ref_sentiment
        assert result.support_size == 25

    def test_support_is_most_mentioned_entities(self):
        mentions = (
            [linked_mention("RARE", "positive", 0.9, 0)]
            + [linked_mention("MID", "positive", 0.9 - i * 0.01, 1 + i) for i in range(3)]
            + [linked_mention("TOP", "negative", 0.9 - i * 0.01, 10 + i) for i in range(5)]
        )
        result = stability_check(mentions, top_k=2, keep_fraction=0.5)
        assert result.support_size == 2  # TOP and MID; RARE excluded

    def test_unlinked_mentions_rejected(self):
        bad = no_flip_mentions()
        object.__setattr__(bad[0], "link", None)
        with pytest.raises(ValueError):
            stability_check(bad)

    def test_single_entity_rejected(self):
        mentions = [linked_mention("A", "positive", 0.9 - i * 0.01, i) for i in range(4)]
        with pytest.raises(ValueError):
            stability_check(mentions, keep_fraction=0.5)
