"""Transcript parsing, serialization, and corpus loading."""

from __future__ import annotations

import json

import pytest

from fraudlex.errors import (
    DuplicateId,
    MalformedDocument,
    MissingId,
    UnknownSpeaker,
)
from fraudlex.transcripts import (
    Corpus,
    Transcript,
    Turn,
    load_corpus,
    parse_transcript,
    serialize_transcript,
)


def make_doc(doc_id="call_001", label="fraud", turns=None):
    if turns is None:
        turns = [
            {"speaker": "agent", "text": "Can you confirm your name?"},
            {"speaker": "customer", "text": "It's John."},
        ]
    doc = {"id": doc_id, "turns": turns}
    if label is not None:
        doc["label"] = label
    return doc


def test_parse_basic_fields():
    t = parse_transcript(make_doc())
    assert t.id == "call_001"
    assert t.label == 1
    assert [turn.speaker for turn in t.turns] == ["agent", "customer"]
    assert t.turns[1].text == "It's John."


def test_parse_accepts_str_and_bytes():
    doc = make_doc()
    as_str = json.dumps(doc)
    assert parse_transcript(as_str) == parse_transcript(doc)
    assert parse_transcript(as_str.encode("utf-8")) == parse_transcript(doc)


def test_customer_responses_filters_agent_turns():
    t = parse_transcript(make_doc())
    responses = t.customer_responses()
    assert len(responses) == 1
    assert responses[0].tokens == ("it's", "john")


def test_customer_responses_is_order_preserving_filter():
    turns = [
        {"speaker": "customer", "text": "first"},
        {"speaker": "agent", "text": "question"},
        {"speaker": "customer", "text": "second"},
        {"speaker": "customer", "text": "third"},
    ]
    t = parse_transcript(make_doc(turns=turns))
    expected = [turn.text for turn in t.turns if turn.speaker == "customer"]
    assert [" ".join(r.tokens) for r in t.customer_responses()] == expected


def test_zero_customer_turns_parses():
    t = parse_transcript(make_doc(turns=[{"speaker": "agent", "text": "Hello?"}]))
    assert t.customer_responses() == ()


@pytest.mark.parametrize(
    ("word", "code"), [("fraud", 1), ("non_fraud", 0), (None, None)]
)
def test_label_words(word, code):
    assert parse_transcript(make_doc(label=word)).label == code


@pytest.mark.parametrize("bad", ["FRAUD", "scam", "", 1, 0, True])
def test_bad_label_rejected(bad):
    with pytest.raises(MalformedDocument):
        parse_transcript(make_doc(label=bad))


def test_empty_turns_dropped():
    turns = [
        {"speaker": "customer", "text": "   "},
        {"speaker": "customer", "text": "kept"},
        {"speaker": "agent", "text": ""},
    ]
    t = parse_transcript(make_doc(turns=turns))
    assert len(t.turns) == 1
    assert t.turns[0].text == "kept"


def test_unknown_speaker():
    with pytest.raises(UnknownSpeaker):
        parse_transcript(make_doc(turns=[{"speaker": "operator", "text": "hi"}]))


def test_missing_id():
    doc = make_doc()
    del doc["id"]
    with pytest.raises(MissingId):
        parse_transcript(doc)
    with pytest.raises(MissingId):
        parse_transcript(make_doc(doc_id=""))


@pytest.mark.parametrize(
    "raw",
    [
        "{not json",
        json.dumps([1, 2]),
        json.dumps({"id": "x", "turns": "oops"}),
        json.dumps({"id": "x", "turns": [["customer", "hi"]]}),
        json.dumps({"id": "x", "turns": [{"speaker": "customer"}]}),
    ],
)
def test_malformed_documents(raw):
    with pytest.raises(MalformedDocument):
        parse_transcript(raw)


def test_round_trip():
    original = parse_transcript(
        make_doc(
            turns=[
                {"speaker": "agent", "text": "Why was the card used in Spain?"},
                {"speaker": "customer", "text": "Honestly, I can't remember."},
            ]
        )
    )
    assert parse_transcript(serialize_transcript(original)) == original


def test_round_trip_unlabelled():
    original = parse_transcript(make_doc(label=None))
    text = serialize_transcript(original)
    assert "label" not in json.loads(text)
    assert parse_transcript(text) == original


def test_serialized_labels_are_words():
    doc = json.loads(serialize_transcript(parse_transcript(make_doc(label="non_fraud"))))
    assert doc["label"] == "non_fraud"


def test_class_counts():
    transcripts = [
        Transcript(id=f"c{i}", label=label, turns=(Turn("customer", "hi"),))
        for i, label in enumerate([1, 1, 1, 0, 0, None])
    ]
    corpus = Corpus(transcripts=transcripts)
    assert corpus.class_counts() == {"fraud": 3, "non_fraud": 2, "unlabeled": 1}


def test_class_counts_omits_absent_labels():
    corpus = Corpus(transcripts=[Transcript(id="a", label=1, turns=(Turn("customer", "x"),))])
    assert corpus.class_counts() == {"fraud": 1}


def write_doc(directory, doc_id, label="fraud", name=None):
    path = directory / (name or f"{doc_id}.json")
    path.write_text(json.dumps(make_doc(doc_id=doc_id, label=label)), "utf-8")
    return path


def test_load_corpus_directory_sorted_by_id(tmp_path):
    # File names deliberately disagree with ids; order must follow ids.
    write_doc(tmp_path, "b", name="1.json")
    write_doc(tmp_path, "a", name="2.json")
    write_doc(tmp_path, "c", name="0.json")
    corpus = load_corpus(tmp_path)
    assert [t.id for t in corpus.transcripts] == ["a", "b", "c"]


def test_load_corpus_skips_underscore_and_non_json(tmp_path):
    write_doc(tmp_path, "a")
    (tmp_path / "_ground_truth.json").write_text("{}", "utf-8")
    (tmp_path / "notes.txt").write_text("not a transcript", "utf-8")
    corpus = load_corpus(tmp_path)
    assert [t.id for t in corpus.transcripts] == ["a"]


def test_load_corpus_manifest(tmp_path):
    sub = tmp_path / "calls"
    sub.mkdir()
    write_doc(sub, "b")
    write_doc(sub, "a", label="non_fraud")
    manifest = tmp_path / "manifest.txt"
    manifest.write_text("# corpus\n\ncalls/b.json\ncalls/a.json\n", "utf-8")
    corpus = load_corpus(manifest)
    assert [t.id for t in corpus.transcripts] == ["a", "b"]
    assert corpus.class_counts() == {"fraud": 1, "non_fraud": 1}


def test_load_corpus_manifest_missing_file(tmp_path):
    manifest = tmp_path / "manifest.txt"
    manifest.write_text("gone.json\n", "utf-8")
    with pytest.raises(MalformedDocument, match="gone.json"):
        load_corpus(manifest)


def test_load_corpus_duplicate_id(tmp_path):
    write_doc(tmp_path, "a", name="first.json")
    write_doc(tmp_path, "a", name="second.json")
    with pytest.raises(DuplicateId, match="first.json"):
        load_corpus(tmp_path)


def test_load_corpus_parse_error_names_file(tmp_path):
    (tmp_path / "broken.json").write_text("{oops", "utf-8")
    with pytest.raises(MalformedDocument, match="broken.json"):
        load_corpus(tmp_path)


def test_load_corpus_rejects_nonexistent_path(tmp_path):
    with pytest.raises(MalformedDocument):
        load_corpus(tmp_path / "missing")


def test_by_id(tmp_path):
    write_doc(tmp_path, "a")
    write_doc(tmp_path, "b")
    corpus = load_corpus(tmp_path)
    assert corpus.by_id("b").id == "b"
    with pytest.raises(MissingId):
        corpus.by_id("zz")
