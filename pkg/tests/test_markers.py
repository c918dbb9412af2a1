"""Marker lexicon loading and category counting, checked against the
naive descending-length scan oracle."""

from __future__ import annotations

import json
import random
from importlib import resources

import pytest

from fraudlex.errors import MalformedDocument
from fraudlex.markers import (
    CATEGORY_NAMES,
    N_CATEGORIES,
    conversation_marker_features,
    count_markers,
    default_lexicon,
    lexicon_from_mapping,
    load_lexicon,
)
from fraudlex.tokenize import TokenStream, tokenize

from oracles import naive_count_category, naive_count_markers

LEX = default_lexicon()


def stream_of(*tokens: str) -> TokenStream:
    return tokenize(" ".join(tokens))


def counts_by_name(stream: TokenStream) -> dict:
    return dict(zip(CATEGORY_NAMES, count_markers(stream, LEX).tolist()))


def test_category_names_and_order():
    assert LEX.category_names == CATEGORY_NAMES
    assert N_CATEGORIES == 16


def test_hand_checked_example():
    got = counts_by_name(stream_of("i", "guess", "i", "can't", "remember", "honestly"))
    assert got["hedging"] == 1  # "i guess"
    assert got["memory_loss"] == 1  # "can't remember"
    assert got["negation"] == 1  # "can't"
    assert got["overzealous_expression"] == 1  # "honestly"
    assert got["pronouns"] >= 2
    assert got["self_reference"] >= 2
    # The full vector, not just the spot checks, must match the oracle.
    patterns = [p for _, p in LEX.categories]
    stream = stream_of("i", "guess", "i", "can't", "remember", "honestly")
    assert count_markers(stream, LEX).tolist() == naive_count_markers(stream.tokens, patterns)


def test_empty_stream_zero_vector():
    assert count_markers(tokenize(""), LEX).tolist() == [0] * 16


def test_repeated_single_token_pattern():
    got = counts_by_name(stream_of("they", "said", "they", "would"))
    assert got["third_person_plural_pronouns"] == 2


def test_within_category_longest_match_non_overlapping():
    mapping = {name: [] for name in CATEGORY_NAMES}
    mapping["negation"] = ["no", "no way"]
    lex = lexicon_from_mapping("t1", mapping)
    # "no way" wins at position 0 and consumes "way", then "no" matches.
    got = count_markers(stream_of("no", "way", "no"), lex)
    assert got[CATEGORY_NAMES.index("negation")] == 2


def test_cross_category_overlap_allowed():
    mapping = {name: [] for name in CATEGORY_NAMES}
    mapping["negation"] = ["can't"]
    mapping["memory_loss"] = ["can't remember"]
    lex = lexicon_from_mapping("t1", mapping)
    got = count_markers(stream_of("i", "can't", "remember"), lex)
    assert got[CATEGORY_NAMES.index("negation")] == 1
    assert got[CATEGORY_NAMES.index("memory_loss")] == 1


def test_case_insensitivity():
    text = "I GUESS I Can't Remember, Honestly!"
    upper = count_markers(tokenize(text), LEX)
    lower = count_markers(tokenize(text.lower()), LEX)
    assert upper.tolist() == lower.tolist()


def test_additivity_and_identity():
    a = stream_of("i", "guess", "so")
    b = stream_of("they", "never", "called", "me")
    single = conversation_marker_features([a], LEX)
    assert single.tolist() == count_markers(a, LEX).tolist()
    combined = conversation_marker_features([a, b], LEX)
    assert combined.tolist() == (count_markers(a, LEX) + count_markers(b, LEX)).tolist()


def test_zero_responses_zero_vector():
    assert conversation_marker_features([], LEX).tolist() == [0] * 16


def test_concatenation_additivity_across_response_split():
    first = [stream_of("i", "swear", "to", "god"), stream_of("maybe", "later")]
    second = [stream_of("they", "took", "everything")]
    whole = conversation_marker_features(first + second, LEX)
    parts = conversation_marker_features(first, LEX) + conversation_marker_features(second, LEX)
    assert whole.tolist() == parts.tolist()


def test_per_1000_tokens_normalisation():
    stream = stream_of("i", "guess", "i", "guess")  # 4 tokens, hedging = 2
    scaled = conversation_marker_features([stream], LEX, per_1000_tokens=True)
    assert scaled[CATEGORY_NAMES.index("hedging")] == pytest.approx(2 * 1000.0 / 4)
    assert conversation_marker_features([], LEX, per_1000_tokens=True).tolist() == [0.0] * 16


def test_mapping_key_order_does_not_matter():
    text = resources.files("fraudlex.data").joinpath("marker_lexicon_v1.json").read_text("utf-8")
    doc = json.loads(text)
    shuffled = dict(reversed(list(doc["categories"].items())))
    lex2 = lexicon_from_mapping(doc["version"], shuffled)
    stream = stream_of("i", "guess", "they", "never", "remember")
    assert count_markers(stream, lex2).tolist() == count_markers(stream, LEX).tolist()
    assert lex2.category_names == CATEGORY_NAMES


def test_oracle_equivalence_random_streams():
    rng = random.Random(1234)
    # Vocabulary: every token used by lexicon patterns plus unknown noise.
    vocab = sorted({t for _, ps in LEX.categories for p in ps for t in p})
    vocab += ["xx", "yy", "zz", "the", "and"]
    patterns = [p for _, p in LEX.categories]
    for _ in range(1000):
        tokens = tuple(rng.choice(vocab) for _ in range(rng.randrange(0, 40)))
        stream = TokenStream(tokens=tokens, spans=((0, 0),) * len(tokens))
        assert count_markers(stream, LEX).tolist() == naive_count_markers(tokens, patterns)


def test_oracle_equivalence_adversarial_prefix_chains():
    # Patterns that are prefixes of one another exercise the longest-match
    # backtracking path: a partial long match must not eat a short one.
    mapping = {name: [] for name in CATEGORY_NAMES}
    mapping["hedging"] = ["a", "a b c"]
    lex = lexicon_from_mapping("t1", mapping)
    idx = CATEGORY_NAMES.index("hedging")
    rng = random.Random(99)
    for _ in range(300):
        tokens = tuple(rng.choice(["a", "b", "c"]) for _ in range(rng.randrange(0, 12)))
        stream = TokenStream(tokens=tokens, spans=((0, 0),) * len(tokens))
        expected = naive_count_category(tokens, [("a",), ("a", "b", "c")])
        assert count_markers(stream, lex)[idx] == expected


def test_default_lexicon_contains_table_seed_phrases():
    by_name = dict(LEX.categories)
    assert ("because",) in by_name["causation"]
    assert ("i", "guess") in by_name["hedging"]
    assert ("can't", "remember") in by_name["memory_loss"]
    assert ("they",) in by_name["third_person_plural_pronouns"]
    assert ("honestly",) in by_name["overzealous_expression"]
    for _, patterns in LEX.categories:
        assert patterns, "every category ships at least one pattern"


def test_load_lexicon_round_trip(tmp_path):
    doc = {
        "version": "custom-1",
        "categories": {name: ["zzz"] for name in CATEGORY_NAMES},
    }
    path = tmp_path / "lex.json"
    path.write_text(json.dumps(doc), "utf-8")
    lex = load_lexicon(path)
    assert lex.version == "custom-1"
    assert count_markers(stream_of("zzz", "zzz"), lex).tolist() == [2] * 16


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("version"),
        lambda d: d.pop("categories"),
        lambda d: d["categories"].pop("negation"),
        lambda d: d["categories"].update({"extra_category": ["x"]}),
        lambda d: d["categories"].update({"negation": ["no", "no"]}),
        lambda d: d["categories"].update({"negation": [""]}),
    ],
)
def test_invalid_lexicon_documents(tmp_path, mutate):
    doc = {"version": "v", "categories": {name: ["ok"] for name in CATEGORY_NAMES}}
    mutate(doc)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc), "utf-8")
    with pytest.raises(MalformedDocument):
        load_lexicon(path)


def test_invalid_lexicon_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", "utf-8")
    with pytest.raises(MalformedDocument, match="bad.json"):
        load_lexicon(path)


def test_counts_are_nonnegative_integers():
    rng = random.Random(7)
    vocab = sorted({t for _, ps in LEX.categories for p in ps for t in p})
    for _ in range(50):
        tokens = tuple(rng.choice(vocab) for _ in range(rng.randrange(0, 30)))
        stream = TokenStream(tokens=tokens, spans=((0, 0),) * len(tokens))
        got = count_markers(stream, LEX)
        assert got.dtype.kind == "i"
        assert (got >= 0).all()
