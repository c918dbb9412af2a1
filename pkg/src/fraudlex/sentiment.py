"""Per-response polarity scoring and per-conversation sentiment statistics.

Two interchangeable scoring backends: a valence lexicon with a small
negation window (fully explainable, the default), and externally
precomputed scores read from a file (so an upstream neural scorer can be
swapped in without this package depending on one).

Statistic conventions are fixed so results are reproducible:
sample SD (n-1 denominator, 0 for n=1); linear-interpolation quantiles;
population-moment skewness g1 = m3 / m2^1.5 and excess kurtosis
m4 / m2^2 - 3, both defined as 0 when m2 = 0; pE / nE are the one-sided
sums of positive / negated-negative scores; tR counts scored responses.
A constant score list is degenerate by definition (sd = iqr = skewness
= kurtosis = 0, mean = the constant), not by floating-point accident.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from importlib import resources

from fraudlex.errors import (
    EmptyScoreList,
    MalformedDocument,
    MissingResponseScore,
    OutOfRangeScore,
    UnknownResponseIndex,
    UnknownTranscript,
)
from fraudlex.tokenize import TokenStream

_DEFAULT_VALENCE_RESOURCE = "valence_lexicon_v1.json"

SENTIMENT_STAT_NAMES: tuple[str, ...] = (
    "sentiment_mean",
    "sentiment_sd",
    "sentiment_min",
    "sentiment_max",
    "sentiment_median",
    "sentiment_iqr",
    "sentiment_kurtosis",
    "sentiment_skewness",
    "positive_energy",
    "negative_energy",
    "total_responses",
)


@dataclass(frozen=True)
class ValenceLexicon:
    """Token valences in [-1, 1] plus negator tokens and a lookback window."""

    version: str
    entries: dict
    negators: frozenset
    negation_window: int = 3

    def __post_init__(self) -> None:
        for token, valence in self.entries.items():
            if not -1.0 <= float(valence) <= 1.0:
                raise MalformedDocument(f"valence for {token!r} outside [-1, 1]: {valence}")
        for negator in self.negators:
            if self.entries.get(negator) == 0:
                raise MalformedDocument(f"negator {negator!r} also listed as a zero-valence entry")
        if self.negation_window < 0:
            raise MalformedDocument("negation_window must be >= 0")


def load_valence_lexicon(path) -> ValenceLexicon:
    with open(path, "r", encoding="utf-8") as fh:
        return _parse_valence(fh.read(), source=str(path))


def default_valence_lexicon() -> ValenceLexicon:
    text = resources.files("fraudlex.data").joinpath(_DEFAULT_VALENCE_RESOURCE).read_text("utf-8")
    return _parse_valence(text, source=_DEFAULT_VALENCE_RESOURCE)


def _parse_valence(text: str, source: str) -> ValenceLexicon:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{source}: invalid valence JSON: {exc}") from exc
    try:
        return ValenceLexicon(
            version=doc["version"],
            entries={str(k).lower(): float(v) for k, v in doc["entries"].items()},
            negators=frozenset(str(t).lower() for t in doc["negators"]),
            negation_window=int(doc.get("negation_window", 3)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"{source}: bad valence lexicon structure: {exc}") from exc


def score_response(stream: TokenStream, lex: ValenceLexicon) -> float:
    """Mean adjusted valence of matched tokens, clamped to [-1, 1]; 0 if none match.

    A matched token's valence is sign-flipped when a negator occurs within
    the ``negation_window`` tokens before it ("not happy" scores -0.8).
    """
    tokens = stream.tokens
    matched: list[float] = []
    for i, token in enumerate(tokens):
        valence = lex.entries.get(token)
        if valence is None:
            continue
        window = tokens[max(0, i - lex.negation_window) : i]
        if any(t in lex.negators for t in window):
            valence = -valence
        matched.append(valence)
    if not matched:
        return 0.0
    return max(-1.0, min(1.0, math.fsum(matched) / len(matched)))


class ExternalScores:
    """Precomputed per-response scores keyed by (transcript id, response index)."""

    def __init__(self, scores: dict):
        self.scores = scores

    def __call__(self, transcript_id: str, response_index: int, stream: TokenStream) -> float:
        try:
            return self.scores[(transcript_id, response_index)]
        except KeyError:
            raise MissingResponseScore(
                f"no external score for transcript {transcript_id!r} response {response_index}"
            ) from None


class LexiconScorer:
    """Default backend: scores every response with one valence lexicon."""

    def __init__(self, lex: ValenceLexicon | None = None):
        self.lexicon = lex if lex is not None else default_valence_lexicon()

    def __call__(self, transcript_id: str, response_index: int, stream: TokenStream) -> float:
        return score_response(stream, self.lexicon)


def load_external_scores(path, corpus) -> ExternalScores:
    """Read `transcript_id, response_index, score` rows and check completeness.

    Every customer response of every transcript in ``corpus`` must be
    covered exactly once, scores must lie in [-1, 1], and ids/indices must
    exist; nothing is silently defaulted.
    """
    expected = {
        t.id: len(t.customer_responses()) for t in corpus.transcripts
    }
    scores: dict[tuple[str, int], float] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for line_no, row in enumerate(csv.reader(fh), start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 3:
                raise MalformedDocument(f"{path}:{line_no}: expected 3 fields, got {len(row)}")
            tid = row[0].strip()
            try:
                index = int(row[1])
                score = float(row[2])
            except ValueError as exc:
                raise MalformedDocument(f"{path}:{line_no}: {exc}") from exc
            if tid not in expected:
                raise UnknownTranscript(f"{path}:{line_no}: unknown transcript {tid!r}")
            if not 0 <= index < expected[tid]:
                raise UnknownResponseIndex(
                    f"{path}:{line_no}: transcript {tid!r} has {expected[tid]} responses, got index {index}"
                )
            if not -1.0 <= score <= 1.0:
                raise OutOfRangeScore(f"{path}:{line_no}: score {score} outside [-1, 1]")
            if (tid, index) in scores:
                raise MalformedDocument(f"{path}:{line_no}: duplicate row for ({tid}, {index})")
            scores[(tid, index)] = score
    for tid, n_responses in expected.items():
        for index in range(n_responses):
            if (tid, index) not in scores:
                raise MissingResponseScore(f"no score for transcript {tid!r} response {index}")
    return ExternalScores(scores)


@dataclass(frozen=True)
class SentimentStats:
    """The eleven per-conversation aggregates, in canonical order."""

    mean: float
    sd: float
    min: float
    max: float
    median: float
    iqr: float
    kurtosis: float
    skewness: float
    positive_energy: float
    negative_energy: float
    total_responses: int

    def as_values(self) -> tuple[float, ...]:
        return (
            self.mean, self.sd, self.min, self.max, self.median, self.iqr,
            self.kurtosis, self.skewness, self.positive_energy,
            self.negative_energy, float(self.total_responses),
        )


def _quantile(sorted_scores: list[float], p: float) -> float:
    # Linear interpolation at rank h = (n-1) p over the sorted sample.
    h = (len(sorted_scores) - 1) * p
    lo = math.floor(h)
    frac = h - lo
    if frac == 0.0:
        return sorted_scores[lo]
    return sorted_scores[lo] + frac * (sorted_scores[lo + 1] - sorted_scores[lo])


def aggregate_sentiment(scores) -> SentimentStats:
    """Summarise a non-empty list of response scores into SentimentStats."""
    scores = list(scores)
    n = len(scores)
    if n == 0:
        raise EmptyScoreList("a conversation must have at least one scored response")
    ordered = sorted(scores)
    if ordered[0] == ordered[-1]:
        # Constant lists are summarised exactly; computing moments around
        # fsum(scores)/n would leave 1-ulp residues and garbage skewness.
        c = ordered[0]
        return SentimentStats(
            mean=c, sd=0.0, min=c, max=c, median=c, iqr=0.0,
            kurtosis=0.0, skewness=0.0,
            positive_energy=max(c, 0.0) * n, negative_energy=max(-c, 0.0) * n,
            total_responses=n,
        )
    mean = math.fsum(scores) / n
    devs = [s - mean for s in scores]
    m2 = math.fsum(d * d for d in devs) / n
    m3 = math.fsum(d * d * d for d in devs) / n
    m4 = math.fsum(d * d * d * d for d in devs) / n
    sd = math.sqrt(math.fsum(d * d for d in devs) / (n - 1)) if n > 1 else 0.0
    skewness = m3 / m2**1.5 if m2 > 0.0 else 0.0
    kurtosis = m4 / (m2 * m2) - 3.0 if m2 > 0.0 else 0.0
    return SentimentStats(
        mean=mean,
        sd=sd,
        min=ordered[0],
        max=ordered[-1],
        median=_quantile(ordered, 0.5),
        iqr=_quantile(ordered, 0.75) - _quantile(ordered, 0.25),
        kurtosis=kurtosis,
        skewness=skewness,
        positive_energy=math.fsum(s for s in scores if s > 0.0),
        negative_energy=math.fsum(-s for s in scores if s < 0.0),
        total_responses=n,
    )
