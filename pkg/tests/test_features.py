"""Feature vector assembly, projection, and matrix round-trips."""

from __future__ import annotations

import pytest

from fraudlex.errors import DimensionMismatch, MalformedDocument, NoCustomerResponses
from fraudlex.features import (
    FEATURE_NAMES,
    Dataset,
    FeatureSubset,
    FeatureVector,
    featurize,
    project,
    read_matrix,
    subset_feature_names,
    write_matrix,
)
from fraudlex.markers import CATEGORY_NAMES, conversation_marker_features, default_lexicon
from fraudlex.sentiment import SENTIMENT_STAT_NAMES, LexiconScorer, aggregate_sentiment
from fraudlex.transcripts import Corpus, parse_transcript


def corpus_from_texts(texts_by_id: dict, label="fraud") -> Corpus:
    transcripts = []
    for tid, texts in texts_by_id.items():
        turns = [{"speaker": "customer", "text": text} for text in texts]
        transcripts.append(parse_transcript({"id": tid, "label": label, "turns": turns}))
    return Corpus(transcripts=transcripts)


def test_canonical_feature_order():
    assert FEATURE_NAMES == CATEGORY_NAMES + SENTIMENT_STAT_NAMES
    assert len(FEATURE_NAMES) == 27
    assert subset_feature_names(FeatureSubset.MARKERS) == CATEGORY_NAMES
    assert subset_feature_names(FeatureSubset.SENTIMENT) == SENTIMENT_STAT_NAMES
    assert subset_feature_names(FeatureSubset.COMBINED) == FEATURE_NAMES


def test_null_signal_case():
    # One response matching neither lexicon: zero markers, degenerate stats.
    corpus = corpus_from_texts({"a": ["zzz qqq xyzzy"]})
    dataset = featurize(corpus)
    row = dataset.rows[0]
    assert row.values[:16] == (0.0,) * 16
    assert row.values[16:] == (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1.0)


def test_four_responses_tr():
    corpus = corpus_from_texts({"a": ["one", "two", "three", "four"]})
    dataset = featurize(corpus)
    assert dataset.rows[0].values[FEATURE_NAMES.index("total_responses")] == 4.0


def test_composition_matches_building_blocks():
    texts = [
        "I guess I can't remember, honestly.",
        "They said the charge was wrong and I was upset.",
        "Maybe it was my wife's card.",
    ]
    corpus = corpus_from_texts({"a": texts})
    lexicon = default_lexicon()
    scorer = LexiconScorer()
    row = featurize(corpus, lexicon=lexicon, scorer=scorer).rows[0]
    responses = corpus.transcripts[0].customer_responses()
    marker_block = conversation_marker_features(responses, lexicon)
    scores = [scorer("a", i, r) for i, r in enumerate(responses)]
    sentiment_block = aggregate_sentiment(scores).as_values()
    assert row.values[:16] == tuple(float(v) for v in marker_block)
    assert row.values[16:] == sentiment_block


def test_rows_follow_corpus_order():
    corpus = corpus_from_texts({"b": ["hello"], "a": ["hello"]})
    corpus.transcripts.sort(key=lambda t: t.id)
    dataset = featurize(corpus)
    assert dataset.row_ids() == ("a", "b")


def test_no_customer_responses():
    transcript = parse_transcript(
        {"id": "x", "label": "fraud", "turns": [{"speaker": "agent", "text": "Hello?"}]}
    )
    with pytest.raises(NoCustomerResponses, match="'x'"):
        featurize(Corpus(transcripts=[transcript]))


def test_subset_featurize_widths():
    corpus = corpus_from_texts({"a": ["I guess so"]})
    assert len(featurize(corpus, subset=FeatureSubset.MARKERS).rows[0].values) == 16
    assert len(featurize(corpus, subset=FeatureSubset.SENTIMENT).rows[0].values) == 11
    assert len(featurize(corpus, subset=FeatureSubset.COMBINED).rows[0].values) == 27


def test_projection_widths_and_idempotence():
    corpus = corpus_from_texts({"a": ["I guess I was happy"], "b": ["They never called"]})
    combined = featurize(corpus)
    markers = project(combined, FeatureSubset.MARKERS)
    sentiment = project(combined, FeatureSubset.SENTIMENT)
    assert all(len(r.values) == 16 for r in markers.rows)
    assert all(len(r.values) == 11 for r in sentiment.rows)
    again = project(markers, FeatureSubset.MARKERS)
    assert again.rows == markers.rows and again.subset == markers.subset
    assert markers.row_ids() == combined.row_ids()
    assert [r.label for r in markers.rows] == [r.label for r in combined.rows]


def test_projection_equals_direct_subset_featurize():
    corpus = corpus_from_texts({"a": ["I guess I was happy"], "b": ["They never called"]})
    combined = featurize(corpus)
    for subset in (FeatureSubset.MARKERS, FeatureSubset.SENTIMENT):
        direct = featurize(corpus, subset=subset)
        assert project(combined, subset).rows == direct.rows


def test_projection_commutes_with_row_filtering():
    corpus = corpus_from_texts({"a": ["I guess"], "b": ["happy days"], "c": ["they said"]})
    combined = featurize(corpus)
    keep = {"a", "c"}
    filtered = Dataset(
        subset=combined.subset, rows=[r for r in combined.rows if r.row_id in keep]
    )
    route_one = project(filtered, FeatureSubset.MARKERS)
    projected = project(combined, FeatureSubset.MARKERS)
    route_two = Dataset(
        subset=projected.subset, rows=[r for r in projected.rows if r.row_id in keep]
    )
    assert route_one.rows == route_two.rows


def test_cannot_project_subset_to_other_subset():
    corpus = corpus_from_texts({"a": ["hello"]})
    markers = featurize(corpus, subset=FeatureSubset.MARKERS)
    with pytest.raises(DimensionMismatch):
        project(markers, FeatureSubset.SENTIMENT)


def test_matrix_round_trip_exact(tmp_path):
    corpus = corpus_from_texts(
        {"a": ["I guess I was happy", "not happy at all"], "b": ["They never called me back"]}
    )
    dataset = featurize(corpus)
    path = tmp_path / "features.csv"
    write_matrix(dataset, path)
    loaded = read_matrix(path)
    assert loaded.subset == dataset.subset
    assert loaded.rows == dataset.rows  # bitwise equality via repr round-trip


def test_matrix_header_shape(tmp_path):
    corpus = corpus_from_texts({"a": ["hello there"]})
    path = tmp_path / "features.csv"
    write_matrix(featurize(corpus), path)
    header = path.read_text("utf-8").splitlines()[0].split(",")
    assert header == ["id", *FEATURE_NAMES, "label"]


def test_matrix_round_trip_subsets(tmp_path):
    corpus = corpus_from_texts({"a": ["I guess I was happy"]})
    for subset in FeatureSubset:
        dataset = featurize(corpus, subset=subset)
        path = tmp_path / f"{subset.value}.csv"
        write_matrix(dataset, path)
        assert read_matrix(path).rows == dataset.rows


def test_unlabelled_rows_round_trip(tmp_path):
    corpus = corpus_from_texts({"a": ["hello there"]}, label=None)
    dataset = featurize(corpus)
    path = tmp_path / "features.csv"
    write_matrix(dataset, path)
    loaded = read_matrix(path)
    assert loaded.rows[0].label is None
    with pytest.raises(MalformedDocument):
        loaded.labels()


@pytest.mark.parametrize(
    "mangle",
    [
        lambda lines: ["id,foo,label"] + lines[1:],
        lambda lines: [],
        lambda lines: lines + [lines[1].rsplit(",", 1)[0]],
        lambda lines: lines[:1] + [lines[1].rsplit(",", 1)[0] + ",7"],
        lambda lines: lines[:1] + [lines[1].rsplit(",", 1)[0] + ",yes"],
    ],
)
def test_bad_matrix_files(tmp_path, mangle):
    corpus = corpus_from_texts({"a": ["hello there"]})
    path = tmp_path / "features.csv"
    write_matrix(featurize(corpus), path)
    lines = path.read_text("utf-8").splitlines()
    path.write_text("\n".join(mangle(lines)) + "\n", "utf-8")
    with pytest.raises(MalformedDocument):
        read_matrix(path)


def test_non_finite_values_rejected(tmp_path):
    path = tmp_path / "features.csv"
    names = ",".join(subset_feature_names(FeatureSubset.SENTIMENT))
    row = ",".join(["a"] + ["nan"] + ["0.0"] * 10 + ["1"])
    path.write_text(f"id,{names},label\n{row}\n", "utf-8")
    with pytest.raises(MalformedDocument, match="non-finite"):
        read_matrix(path)


def test_dataset_accessors():
    rows = [
        FeatureVector(row_id="a", values=(1.0, 2.0), label=0),
        FeatureVector(row_id="b", values=(3.0, 4.0), label=1),
    ]
    dataset = Dataset(subset=FeatureSubset.COMBINED, rows=rows)
    assert dataset.matrix().tolist() == [[1.0, 2.0], [3.0, 4.0]]
    assert dataset.labels().tolist() == [0, 1]
    assert dataset.row_ids() == ("a", "b")
    assert len(dataset) == 2


def test_external_scorer_used_by_featurize():
    corpus = corpus_from_texts({"a": ["one", "two"]})
    scores = {("a", 0): 0.5, ("a", 1): -0.5}

    def scorer(tid, idx, stream):
        return scores[(tid, idx)]

    row = featurize(corpus, subset=FeatureSubset.SENTIMENT, scorer=scorer).rows[0]
    by_name = dict(zip(SENTIMENT_STAT_NAMES, row.values))
    assert by_name["sentiment_mean"] == 0.0
    assert by_name["sentiment_min"] == -0.5
    assert by_name["sentiment_max"] == 0.5
    assert by_name["positive_energy"] == 0.5
    assert by_name["negative_energy"] == 0.5
