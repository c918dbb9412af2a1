"""Deterministic word tokenizer shared by the marker and sentiment engines.

Rules: lowercase everything, keep apostrophes and hyphens only between
word characters (so "can't" and "follow-up" stay single tokens), drop all
other punctuation, split on whitespace.  Curly apostrophes (U+2019) are
normalised to ASCII so lexicon entries written with plain quotes match
transcripts produced by word processors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

# Word runs optionally joined by intra-word apostrophes/hyphens.
# [^\W_] = letters, digits and combining marks, minus the underscore.
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’\-][^\W_]+)*", re.UNICODE)


@dataclass(frozen=True)
class TokenStream:
    """Lowercased tokens plus, per token, byte offsets into the source text."""

    tokens: tuple[str, ...]
    spans: tuple[tuple[int, int], ...] = field(default=(), repr=False)

    def __len__(self) -> int:
        return len(self.tokens)


def tokenize(text: str) -> TokenStream:
    """Split ``text`` into a TokenStream; empty input yields an empty stream."""
    tokens: list[str] = []
    spans: list[tuple[int, int]] = []
    # Byte offsets are tracked incrementally so multi-byte characters before
    # a token shift its span correctly.
    char_pos = 0
    byte_pos = 0
    for m in _TOKEN_RE.finditer(text):
        start_b = byte_pos + len(text[char_pos : m.start()].encode("utf-8"))
        end_b = start_b + len(m.group().encode("utf-8"))
        char_pos, byte_pos = m.end(), end_b
        tokens.append(m.group().lower().replace("’", "'"))
        spans.append((start_b, end_b))
    return TokenStream(tokens=tuple(tokens), spans=tuple(spans))
