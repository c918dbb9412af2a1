"""Transcript documents: parsing, validation, serialisation, corpus loading.

A transcript is an ordered list of speaker turns. Only customer turns
carry signal for this toolkit; agent turns are retained for round-trips
but never scored or counted. Turns whose text is empty after stripping
are dropped at parse time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from fraudlex.errors import (
    DuplicateId,
    MalformedDocument,
    MissingId,
    UnknownSpeaker,
)
from fraudlex.tokenize import TokenStream, tokenize

SPEAKER_AGENT = "agent"
SPEAKER_CUSTOMER = "customer"
# Documents carry the words; code carries 0/1 (fraud = 1, as in tree
# leaf labels v:0 / v:1).
LABEL_NON_FRAUD = 0
LABEL_FRAUD = 1
LABEL_WORDS = {"non_fraud": LABEL_NON_FRAUD, "fraud": LABEL_FRAUD}

_VALID_SPEAKERS = frozenset({SPEAKER_AGENT, SPEAKER_CUSTOMER})
_VALID_LABELS = frozenset({LABEL_NON_FRAUD, LABEL_FRAUD, None})


@dataclass(frozen=True)
class Turn:
    speaker: str
    text: str

    def __post_init__(self) -> None:
        if self.speaker not in _VALID_SPEAKERS:
            raise UnknownSpeaker(f"unknown speaker {self.speaker!r}")


@dataclass(frozen=True)
class Transcript:
    """One call: an id, ordered turns, and an optional fraud label."""

    id: str
    turns: tuple
    label: int | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise MissingId("transcript id must be a non-empty string")
        if self.label not in _VALID_LABELS:
            raise MalformedDocument(f"label must be 0, 1 or absent, got {self.label!r}")

    def customer_responses(self) -> tuple[TokenStream, ...]:
        """Token streams of the customer turns, in call order."""
        return tuple(tokenize(t.text) for t in self.turns if t.speaker == SPEAKER_CUSTOMER)


@dataclass
class Corpus:
    """A list of transcripts with unique ids, plus where each came from."""

    transcripts: list
    provenance: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.transcripts)

    def by_id(self, transcript_id: str) -> Transcript:
        for t in self.transcripts:
            if t.id == transcript_id:
                return t
        raise MissingId(f"no transcript with id {transcript_id!r}")

    def class_counts(self) -> dict:
        """Label-word histogram, e.g. {"fraud": 32, "non_fraud": 24}.

        Keys appear in the fixed order fraud, non_fraud, unlabeled and
        only when their count is non-zero.
        """
        words = {LABEL_FRAUD: "fraud", LABEL_NON_FRAUD: "non_fraud", None: "unlabeled"}
        counts = {word: 0 for word in words.values()}
        for t in self.transcripts:
            counts[words[t.label]] += 1
        return {word: n for word, n in counts.items() if n}


def parse_transcript(data) -> Transcript:
    """Parse one transcript from a JSON string, bytes, or decoded dict."""
    if isinstance(data, (str, bytes)):
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise MalformedDocument(f"invalid transcript JSON: {exc}") from exc
    else:
        doc = data
    if not isinstance(doc, dict):
        raise MalformedDocument(f"transcript document must be an object, got {type(doc).__name__}")
    if "id" not in doc or not isinstance(doc["id"], str) or not doc["id"]:
        raise MissingId("transcript is missing a non-empty string 'id'")
    raw_turns = doc.get("turns")
    if not isinstance(raw_turns, list):
        raise MalformedDocument("transcript 'turns' must be a list")
    turns = []
    for i, raw in enumerate(raw_turns):
        if not isinstance(raw, dict):
            raise MalformedDocument(f"turn {i} must be an object")
        speaker = raw.get("speaker")
        text = raw.get("text")
        if not isinstance(speaker, str):
            raise MalformedDocument(f"turn {i} is missing a string 'speaker'")
        if not isinstance(text, str):
            raise MalformedDocument(f"turn {i} is missing a string 'text'")
        stripped = text.strip()
        if not stripped:
            continue
        turns.append(Turn(speaker=speaker, text=stripped))
    raw_label = doc.get("label")
    if raw_label is None:
        label = None
    elif raw_label in LABEL_WORDS:
        label = LABEL_WORDS[raw_label]
    else:
        raise MalformedDocument(
            f"label must be 'fraud', 'non_fraud' or absent, got {raw_label!r}"
        )
    return Transcript(id=doc["id"], turns=tuple(turns), label=label)


def serialize_transcript(transcript: Transcript) -> str:
    """JSON text that parses back to an equal transcript."""
    doc = {
        "id": transcript.id,
        "turns": [{"speaker": t.speaker, "text": t.text} for t in transcript.turns],
    }
    if transcript.label is not None:
        doc["label"] = "fraud" if transcript.label == LABEL_FRAUD else "non_fraud"
    return json.dumps(doc, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def _add(corpus: Corpus, transcript: Transcript, source: str) -> None:
    if any(t.id == transcript.id for t in corpus.transcripts):
        first = corpus.provenance.get(transcript.id, "?")
        raise DuplicateId(
            f"duplicate transcript id {transcript.id!r} in {source} (first seen in {first})"
        )
    corpus.transcripts.append(transcript)
    corpus.provenance[transcript.id] = source


def load_corpus(path) -> Corpus:
    """Load transcripts from a directory of .json files or a manifest file.

    Directory mode reads every ``*.json`` whose name does not start with
    an underscore, in sorted name order. Manifest mode reads one path per
    line (relative to the manifest, '#' comments and blanks skipped).
    """
    path = Path(path)
    corpus = Corpus(transcripts=[])
    if path.is_dir():
        for child in sorted(path.iterdir()):
            if child.suffix != ".json" or child.name.startswith("_"):
                continue
            _add(corpus, _parse_file(child), str(child))
    elif path.is_file():
        for line_no, line in enumerate(path.read_text("utf-8").splitlines(), start=1):
            entry = line.strip()
            if not entry or entry.startswith("#"):
                continue
            target = (path.parent / entry).resolve()
            if not target.is_file():
                raise MalformedDocument(f"{path}:{line_no}: no such transcript file: {entry}")
            _add(corpus, _parse_file(target), f"{path}:{line_no}")
    else:
        raise MalformedDocument(f"corpus path is neither a directory nor a file: {path}")
    corpus.transcripts.sort(key=lambda t: t.id)
    return corpus


def _parse_file(path: Path) -> Transcript:
    try:
        text = path.read_text("utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise MalformedDocument(f"{path}: {exc}") from exc
    try:
        return parse_transcript(text)
    except MalformedDocument as exc:
        raise MalformedDocument(f"{path}: {exc}") from exc
