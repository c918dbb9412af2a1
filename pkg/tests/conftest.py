"""Shared fixtures and the acceptance-criteria summary hook."""

from __future__ import annotations

import re
import time

import pytest

from fraudlex.evaluation import cross_validate, make_folds
from fraudlex.features import FeatureSubset, featurize
from fraudlex.models.common import MODEL_KINDS
from fraudlex.synth import SynthConfig, generate


@pytest.fixture(scope="session")
def default_corpus():
    """The default corpus shape: 32 fraud / 24 non-fraud, seed 7, s=1."""
    corpus, truth = generate(SynthConfig(seed=7, signal_strength=1.0))
    return corpus, truth


@pytest.fixture(scope="session")
def default_dataset(default_corpus):
    corpus, _ = default_corpus
    return featurize(corpus, subset=FeatureSubset.COMBINED)


@pytest.fixture(scope="session")
def signal_sweep():
    """Mean test accuracy per model over 20 seeds at s in {0, 0.5, 1}.

    Computed once; the end-to-end signal and monotonicity tests share it.
    Returns {signal: {kind: [per-seed mean test accuracy]}} plus the
    wall-clock cost of the whole sweep under "elapsed_seconds".
    """
    start = time.monotonic()
    sweep: dict = {}
    for signal in (0.0, 0.5, 1.0):
        per_model: dict = {kind: [] for kind in MODEL_KINDS}
        for seed in range(20):
            corpus, _ = generate(SynthConfig(seed=seed, signal_strength=signal))
            dataset = featurize(corpus, subset=FeatureSubset.COMBINED)
            plan = make_folds(dataset, K=10, seed=seed)
            results = cross_validate(dataset, MODEL_KINDS, plan)
            for kind in MODEL_KINDS:
                per_model[kind].append(results[kind]["test"]["mean"])
        sweep[signal] = per_model
    sweep["elapsed_seconds"] = time.monotonic() - start
    return sweep


_CRITERION_PATTERN = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            match = _CRITERION_PATTERN.search(getattr(report, "nodeid", ""))
            if match:
                name = report.nodeid.split("::")[-1]
                lines.append((int(match.group(1)), name, outcome))
    if not lines:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number, name, outcome in sorted(lines):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {name}")
