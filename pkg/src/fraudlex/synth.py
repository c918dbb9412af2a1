"""Seeded generator of labelled synthetic call transcripts.

Text realism is deliberately sacrificed for controllability: customer
responses are assembled from template sentences that are clean of every
controlled marker phrase, valence word and negator, then marker phrases
and at most one leading valence word are injected at known rates. A
ground-truth sidecar records exactly what was injected per call, so
oracle tests can check the feature extractor against it by equality.

Class signal is carried by four deception-indicative marker categories
(hedging, negation, memory loss, third-person plural pronouns), whose
per-response injection rate is base + boost * s for fraud calls and
base * (1 - s) for non-fraud, and by the valence-word sign, negative
with probability 0.5 + 0.5 s for fraud and 0.5 - 0.5 s for non-fraud.
At s = 0 the two classes are generated from identical distributions; at
s = 1 they are strongly separated. Neutral categories are injected at
the same rate for both classes so the matcher sees varied input either
way. The emotion/sentiment categories are covered by the valence word
itself (those words belong to both lexicons); pronouns and
self_reference occur naturally in the templates and are the two
categories the sidecar does not control.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from fraudlex.errors import InvalidConfig
from fraudlex.transcripts import (
    Corpus,
    LABEL_FRAUD,
    LABEL_NON_FRAUD,
    SPEAKER_AGENT,
    SPEAKER_CUSTOMER,
    Transcript,
    Turn,
    serialize_transcript,
)

TRUTH_FORMAT_VERSION = "fraudlex-truth-v1"
GROUND_TRUTH_FILENAME = "_ground_truth.json"
MANIFEST_FILENAME = "_manifest.txt"

DECEPTION_CATEGORIES: tuple[str, ...] = (
    "hedging",
    "negation",
    "memory_loss",
    "third_person_plural_pronouns",
)

NEUTRAL_CATEGORIES: tuple[str, ...] = (
    "causation",
    "qualified_assertions",
    "temporal_lacunae",
    "overzealous_expression",
    "disfluencies",
    "nominalised_verbs",
)

# Injection pools. Restricted subsets of the marker lexicon chosen so no
# pool phrase contains another controlled category's phrase and no
# adjacent pair of injected phrases can merge into a longer pattern
# (e.g. "to be honest" is excluded so "needed" + it cannot form the
# qualified assertion "needed to").
PHRASE_POOLS = {
    "hedging": ("maybe", "perhaps", "possibly", "probably"),
    "negation": ("no", "not", "never", "nothing"),
    "memory_loss": ("i forget", "i forgot", "slipped my mind"),
    "third_person_plural_pronouns": ("they", "them", "their"),
    "causation": ("because", "therefore", "consequently"),
    "qualified_assertions": ("needed", "attempted", "tried"),
    "temporal_lacunae": ("afterwards", "eventually", "subsequently"),
    "overzealous_expression": ("honestly", "truthfully", "genuinely", "frankly"),
    "disfluencies": ("uh", "um", "er"),
    "nominalised_verbs": ("payment", "transaction", "statement", "agreement"),
}

# Valence words double as emotion/sentiment marker injections; every
# word here is an entry of both shipped lexicons.
VALENCE_POOLS = {
    "positive_emotion": ("happy", "glad", "pleased", "wonderful", "great"),
    "positive_sentiment": ("good", "excellent", "fantastic", "perfect", "pleasant"),
    "negative_emotion": ("afraid", "upset", "worried", "terrible", "awful"),
    "negative_sentiment": ("bad", "unhappy", "annoyed", "frustrated", "disappointed"),
}

CONTROLLED_CATEGORIES: tuple[str, ...] = tuple(PHRASE_POOLS) + tuple(VALENCE_POOLS)

# Customer sentence stock: no controlled phrases, valence words or
# negators anywhere (a test runs the real matcher over these).
CUSTOMER_TEMPLATES: tuple[str, ...] = (
    "i called about the account yesterday",
    "the bank sent me a letter last week",
    "my card was used at the shop in town",
    "i spoke with the branch on monday morning",
    "the money left the account on friday",
    "i checked the balance on my phone",
    "the letter arrived at my old address",
    "i visited the branch to ask about it",
    "my wife saw the charge on the screen",
    "the amount was larger than i expected",
    "i wrote down the reference number for you",
    "the call came in the early afternoon",
)

AGENT_TEMPLATES: tuple[str, ...] = (
    "thank you for calling, how can i help you today?",
    "let me check that for you now.",
    "i see, could you give me a few more details?",
    "one moment while i bring up the record.",
    "is there anything else i can do for you?",
)


@dataclass(frozen=True)
class SynthConfig:
    n_fraud: int = 32
    n_nonfraud: int = 24
    seed: int = 7
    signal_strength: float = 1.0
    response_mean: float = 19.0
    response_sd: float = 15.0
    response_min: int = 4
    response_max: int = 101
    deception_base: float = 0.35
    deception_boost: float = 0.4
    neutral_rate: float = 0.25
    valence_rate: float = 0.85

    def __post_init__(self) -> None:
        if self.n_fraud < 1 or self.n_nonfraud < 1:
            raise InvalidConfig("class counts must be at least 1")
        if not 0.0 <= self.signal_strength <= 1.0:
            raise InvalidConfig("signal_strength must lie in [0, 1]")
        if self.response_min < 1 or self.response_min > self.response_max:
            raise InvalidConfig("need 1 <= response_min <= response_max")
        if self.response_sd < 0:
            raise InvalidConfig("response_sd must be non-negative")
        for name in ("deception_base", "deception_boost", "neutral_rate", "valence_rate"):
            if getattr(self, name) < 0:
                raise InvalidConfig(f"{name} must be non-negative")
        if not 0.0 <= self.valence_rate <= 1.0:
            raise InvalidConfig("valence_rate must lie in [0, 1]")

    def category_rate(self, category: str, label: int) -> float:
        """Expected injections per response for one category and class."""
        s = self.signal_strength
        if category in DECEPTION_CATEGORIES:
            if label == LABEL_FRAUD:
                return self.deception_base + self.deception_boost * s
            return self.deception_base * (1.0 - s)
        return self.neutral_rate

    def negative_valence_probability(self, label: int) -> float:
        s = self.signal_strength
        return 0.5 + 0.5 * s if label == LABEL_FRAUD else 0.5 - 0.5 * s


def _draw_count(rng: np.random.Generator, rate: float) -> int:
    # floor(rate) guaranteed injections plus a Bernoulli for the
    # fractional part keeps the expectation exactly at `rate`.
    whole = int(rate)
    frac = rate - whole
    return whole + (1 if frac > 0.0 and rng.random() < frac else 0)


def _pick(rng: np.random.Generator, pool) -> str:
    return pool[int(rng.integers(len(pool)))]


def _make_response(rng: np.random.Generator, config: SynthConfig, label: int, injected: dict) -> str:
    words: list = []
    if rng.random() < config.valence_rate:
        negative = rng.random() < config.negative_valence_probability(label)
        if negative:
            category = _pick(rng, ("negative_emotion", "negative_sentiment"))
        else:
            category = _pick(rng, ("positive_emotion", "positive_sentiment"))
        words.append(_pick(rng, VALENCE_POOLS[category]))
        injected[category] += 1
    words.extend(_pick(rng, CUSTOMER_TEMPLATES).split())
    for category in PHRASE_POOLS:
        count = _draw_count(rng, config.category_rate(category, label))
        for _ in range(count):
            words.extend(_pick(rng, PHRASE_POOLS[category]).split())
        injected[category] += count
    return " ".join(words) + "."


def _make_call(rng: np.random.Generator, config: SynthConfig, call_id: str, label: int):
    n_responses = int(np.rint(rng.normal(config.response_mean, config.response_sd)))
    n_responses = max(config.response_min, min(config.response_max, n_responses))
    injected = {category: 0 for category in CONTROLLED_CATEGORIES}
    turns: list = []
    for i in range(n_responses):
        turns.append(Turn(speaker=SPEAKER_AGENT, text=_pick(rng, AGENT_TEMPLATES)))
        turns.append(Turn(speaker=SPEAKER_CUSTOMER, text=_make_response(rng, config, label, injected)))
    transcript = Transcript(id=call_id, turns=tuple(turns), label=label)
    truth = {"label": label, "n_responses": n_responses, "injected": injected}
    return transcript, truth


def generate(config: SynthConfig) -> tuple[Corpus, dict]:
    """Build the corpus and its ground-truth sidecar document."""
    rng = np.random.default_rng(config.seed)
    total = config.n_fraud + config.n_nonfraud
    width = max(3, len(str(total - 1)))
    corpus = Corpus(transcripts=[])
    calls: dict = {}
    for index in range(total):
        label = LABEL_FRAUD if index < config.n_fraud else LABEL_NON_FRAUD
        call_id = f"call_{index:0{width}d}"
        transcript, truth = _make_call(rng, config, call_id, label)
        corpus.transcripts.append(transcript)
        corpus.provenance[call_id] = "synthetic"
        calls[call_id] = truth
    truth_doc = {
        "format": TRUTH_FORMAT_VERSION,
        "config": {
            "n_fraud": config.n_fraud,
            "n_nonfraud": config.n_nonfraud,
            "seed": config.seed,
            "signal_strength": config.signal_strength,
            "response_mean": config.response_mean,
            "response_sd": config.response_sd,
            "response_min": config.response_min,
            "response_max": config.response_max,
            "deception_base": config.deception_base,
            "deception_boost": config.deception_boost,
            "neutral_rate": config.neutral_rate,
            "valence_rate": config.valence_rate,
        },
        "controlled_categories": list(CONTROLLED_CATEGORIES),
        "calls": calls,
    }
    return corpus, truth_doc


def write_corpus(corpus: Corpus, truth_doc: dict, out_dir) -> list:
    """Write call files, sidecar and manifest; returns the call paths.

    Output is byte-identical for identical inputs: fixed name scheme,
    sorted JSON keys, no timestamps.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    names = []
    for transcript in corpus.transcripts:
        name = f"{transcript.id}.json"
        path = out / name
        path.write_text(serialize_transcript(transcript), encoding="utf-8")
        paths.append(path)
        names.append(name)
    (out / GROUND_TRUTH_FILENAME).write_text(
        json.dumps(truth_doc, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    (out / MANIFEST_FILENAME).write_text("\n".join(names) + "\n", encoding="utf-8")
    return paths


def load_ground_truth(corpus_dir) -> dict:
    path = Path(corpus_dir) / GROUND_TRUTH_FILENAME
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
