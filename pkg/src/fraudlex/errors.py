"""Exception hierarchy.

``FraudlexError`` is the base for everything the toolkit raises on bad
input; the CLI maps it to exit code 2.  Programming errors (bugs) are
left as ordinary exceptions and exit with code 1.
"""

from __future__ import annotations


class FraudlexError(Exception):
    """Base class for all input/contract violations."""


# --- transcript ingestion ---------------------------------------------------

class MalformedDocument(FraudlexError):
    """Transcript or lexicon document does not conform to its format."""


class UnknownSpeaker(MalformedDocument):
    """A turn names a speaker outside {agent, customer}."""


class MissingId(MalformedDocument):
    """Transcript document has no usable ``id`` field."""


class DuplicateId(FraudlexError):
    """Two transcripts in one corpus share an id."""


# --- sentiment --------------------------------------------------------------

class OutOfRangeScore(FraudlexError):
    """An externally supplied sentiment score lies outside [-1, 1]."""


class UnknownTranscript(FraudlexError):
    """A score row references a transcript id absent from the corpus."""


class UnknownResponseIndex(FraudlexError):
    """A score row references a response index past the transcript's end."""


class MissingResponseScore(FraudlexError):
    """A customer response has no externally supplied score."""


class EmptyScoreList(FraudlexError):
    """Sentiment aggregation was asked to summarise zero scores."""


# --- features & models ------------------------------------------------------

class NoCustomerResponses(FraudlexError):
    """Featurization requires at least one non-empty customer response."""


class SingleClassTraining(FraudlexError):
    """Training data contains rows of only one class."""


class DegenerateFeatures(FraudlexError):
    """Feature matrix contains NaN or infinite values."""


class DimensionMismatch(FraudlexError):
    """Prediction input width differs from the trained feature width."""


class LexiconVersionMismatch(FraudlexError):
    """Model was trained under a different marker-lexicon version."""


# --- evaluation & synthesis -------------------------------------------------

class TooFewRows(FraudlexError):
    """Fewer rows than folds requested."""


class InvalidConfig(FraudlexError):
    """Synthetic-corpus configuration violates its own invariants."""
