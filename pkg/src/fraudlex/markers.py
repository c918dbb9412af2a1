"""Marker lexicon and occurrence counting.

A lexicon is data, not code: a versioned JSON file mapping the sixteen
fixed category names to phrase lists.  Counting is per category a
non-overlapping longest-match left-to-right scan, so "can't remember"
counts once for memory_loss while its "can't" still counts for negation
(categories are matched independently and may overlap each other).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from fraudlex import _kernels
from fraudlex.errors import MalformedDocument
from fraudlex.tokenize import TokenStream, tokenize

# Category names and their order are fixed; every lexicon file must carry
# exactly these keys in exactly this order.
CATEGORY_NAMES: tuple[str, ...] = (
    "causation",
    "negation",
    "hedging",
    "qualified_assertions",
    "temporal_lacunae",
    "overzealous_expression",
    "memory_loss",
    "third_person_plural_pronouns",
    "pronouns",
    "negative_emotion",
    "negative_sentiment",
    "positive_emotion",
    "positive_sentiment",
    "disfluencies",
    "self_reference",
    "nominalised_verbs",
)

N_CATEGORIES = len(CATEGORY_NAMES)

_DEFAULT_LEXICON_RESOURCE = "marker_lexicon_v1.json"


@dataclass(frozen=True)
class _CategoryTrie:
    """Flattened token-id trie for one category (see _kernels)."""

    child_start: np.ndarray
    child_count: np.ndarray
    edge_token: np.ndarray
    edge_child: np.ndarray
    term_len: np.ndarray


@dataclass(frozen=True)
class MarkerLexicon:
    """Sixteen named categories, each a set of token-sequence patterns."""

    version: str
    categories: tuple[tuple[str, tuple[tuple[str, ...], ...]], ...]
    _vocab: dict = field(default_factory=dict, repr=False, compare=False)
    _tries: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self) -> None:
        _validate(self)
        vocab: dict[str, int] = {}
        for _, patterns in self.categories:
            for pattern in patterns:
                for token in pattern:
                    vocab.setdefault(token, len(vocab))
        tries = tuple(
            _flatten_trie([tuple(vocab[t] for t in p) for p in patterns])
            for _, patterns in self.categories
        )
        object.__setattr__(self, "_vocab", vocab)
        object.__setattr__(self, "_tries", tries)

    @property
    def category_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.categories)

    def token_ids(self, stream: TokenStream) -> np.ndarray:
        """Map a stream's tokens to pattern-vocabulary ids (-1 = unknown)."""
        vocab = self._vocab
        return np.fromiter(
            (vocab.get(t, -1) for t in stream.tokens), dtype=np.int32, count=len(stream)
        )


def _validate(lex: MarkerLexicon) -> None:
    names = tuple(name for name, _ in lex.categories)
    if names != CATEGORY_NAMES:
        raise MalformedDocument(
            f"lexicon categories must be exactly {list(CATEGORY_NAMES)} in order, got {list(names)}"
        )
    if not lex.version or not isinstance(lex.version, str):
        raise MalformedDocument("lexicon version must be a non-empty string")
    for name, patterns in lex.categories:
        seen = set()
        for pattern in patterns:
            if len(pattern) == 0:
                raise MalformedDocument(f"category {name!r} contains an empty pattern")
            if pattern in seen:
                raise MalformedDocument(f"category {name!r} repeats pattern {' '.join(pattern)!r}")
            seen.add(pattern)
            for token in pattern:
                if token != token.lower() or any(c.isspace() for c in token):
                    raise MalformedDocument(f"pattern token {token!r} in {name!r} is not a clean token")


def _flatten_trie(patterns: list[tuple[int, ...]]) -> _CategoryTrie:
    children: list[dict[int, int]] = [{}]
    term: list[int] = [0]
    for pattern in patterns:
        node = 0
        for token_id in pattern:
            nxt = children[node].get(token_id)
            if nxt is None:
                children.append({})
                term.append(0)
                nxt = len(children) - 1
                children[node][token_id] = nxt
            node = nxt
        term[node] = len(pattern)
    child_start, child_count = [], []
    edge_token, edge_child = [], []
    for node_children in children:
        items = sorted(node_children.items())
        child_start.append(len(edge_token))
        child_count.append(len(items))
        for token_id, child in items:
            edge_token.append(token_id)
            edge_child.append(child)
    as_i32 = lambda xs: np.asarray(xs, dtype=np.int32)
    return _CategoryTrie(
        child_start=as_i32(child_start),
        child_count=as_i32(child_count),
        edge_token=as_i32(edge_token),
        edge_child=as_i32(edge_child),
        term_len=as_i32(term),
    )


def lexicon_from_mapping(version: str, mapping: dict[str, list[str]]) -> MarkerLexicon:
    """Build a lexicon from {category: [phrase, ...]}; phrases are tokenized here.

    Keys may arrive in any order; categories are stored in the fixed
    CATEGORY_NAMES order so counts always share one index alignment.
    """
    if set(mapping) != set(CATEGORY_NAMES):
        missing = sorted(set(CATEGORY_NAMES) - set(mapping))
        extra = sorted(set(mapping) - set(CATEGORY_NAMES))
        raise MalformedDocument(f"lexicon category mismatch: missing={missing} unexpected={extra}")
    categories = []
    for name in CATEGORY_NAMES:
        patterns = []
        for phrase in mapping[name]:
            stream = tokenize(phrase)
            if not stream.tokens:
                raise MalformedDocument(f"phrase {phrase!r} in {name!r} tokenizes to nothing")
            patterns.append(stream.tokens)
        categories.append((name, tuple(patterns)))
    return MarkerLexicon(version=version, categories=tuple(categories))


def load_lexicon(path) -> MarkerLexicon:
    with open(path, "r", encoding="utf-8") as fh:
        return _parse_lexicon(fh.read(), source=str(path))


def _parse_lexicon(text: str, source: str = "<string>") -> MarkerLexicon:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{source}: invalid lexicon JSON: {exc}") from exc
    if not isinstance(doc, dict) or "categories" not in doc or "version" not in doc:
        raise MalformedDocument(f"{source}: lexicon must be an object with 'version' and 'categories'")
    return lexicon_from_mapping(doc["version"], doc["categories"])


def default_lexicon() -> MarkerLexicon:
    """The lexicon shipped with the package."""
    text = resources.files("fraudlex.data").joinpath(_DEFAULT_LEXICON_RESOURCE).read_text("utf-8")
    return _parse_lexicon(text, source=_DEFAULT_LEXICON_RESOURCE)


def count_markers(stream: TokenStream, lexicon: MarkerLexicon) -> np.ndarray:
    """Length-16 int vector of per-category occurrence counts."""
    ids = lexicon.token_ids(stream)
    counts = np.zeros(N_CATEGORIES, dtype=np.int64)
    for idx, trie in enumerate(lexicon._tries):
        counts[idx] = _kernels.count_category(
            ids, trie.child_start, trie.child_count, trie.edge_token, trie.edge_child, trie.term_len
        )
    return counts


def conversation_marker_features(
    responses: list[TokenStream], lexicon: MarkerLexicon, per_1000_tokens: bool = False
) -> np.ndarray:
    """Element-wise sum of count_markers over all responses.

    With ``per_1000_tokens`` the summed counts are rescaled to occurrences
    per thousand tokens (the default reports raw counts).
    """
    total = np.zeros(N_CATEGORIES, dtype=np.int64)
    n_tokens = 0
    for stream in responses:
        total += count_markers(stream, lexicon)
        n_tokens += len(stream)
    if per_1000_tokens:
        if n_tokens == 0:
            return np.zeros(N_CATEGORIES, dtype=np.float64)
        return total.astype(np.float64) * (1000.0 / n_tokens)
    return total
