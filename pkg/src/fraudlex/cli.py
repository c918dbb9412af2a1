"""Command-line entry point: extract, evaluate, explain, predict, synth.

Exit codes: 0 on success, 2 on input/configuration errors (including
usage errors raised by the argument parser), 1 on internal failures.
Configuration precedence is flags > config file > built-in defaults,
and every machine-readable output embeds the effective configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from fraudlex import __version__
from fraudlex.errors import (
    FraudlexError,
    InvalidConfig,
    LexiconVersionMismatch,
    MalformedDocument,
)
from fraudlex.evaluation import (
    EvalReport,
    K_DEFAULT,
    cross_validate,
    make_folds,
    render_report,
)
from fraudlex.features import (
    FeatureSubset,
    featurize,
    project,
    read_matrix,
    subset_feature_names,
    write_matrix,
)
from fraudlex.markers import default_lexicon, load_lexicon
from fraudlex.models import fit_model, load_model, render_tree, save_model
from fraudlex.models.common import MODEL_KINDS
from fraudlex.sentiment import (
    LexiconScorer,
    default_valence_lexicon,
    load_external_scores,
    load_valence_lexicon,
)
from fraudlex.synth import SynthConfig, generate, write_corpus
from fraudlex.transcripts import load_corpus, parse_transcript

DEFAULT_SEED = 7

_SUBSET_BY_NAME = {s.value: s for s in FeatureSubset}


def _load_config_file(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidConfig(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidConfig("config file must hold a JSON object")
    return doc


def _resolve(args, config: dict, name: str, default):
    """flags > config file > default."""
    value = getattr(args, name, None)
    if value is not None:
        return value
    if name in config:
        return config[name]
    return default


def _active_lexicon(args, config: dict):
    path = _resolve(args, config, "lexicon", None)
    return default_lexicon() if path is None else load_lexicon(path)


def _make_scorer(args, config: dict, corpus):
    selector = _resolve(args, config, "sentiment", "lexicon")
    if selector == "lexicon":
        path = _resolve(args, config, "valence_lexicon", None)
        lex = default_valence_lexicon() if path is None else load_valence_lexicon(path)
        return LexiconScorer(lex)
    if selector.startswith("external:"):
        return load_external_scores(selector[len("external:") :], corpus)
    raise InvalidConfig(
        f"--sentiment must be 'lexicon' or 'external:<path>', got {selector!r}"
    )


def _parse_subsets(value) -> list:
    if value in (None, "all"):
        return ["markers", "sentiment", "combined"]
    names = [v.strip() for v in value.split(",") if v.strip()]
    for name in names:
        if name not in _SUBSET_BY_NAME:
            raise InvalidConfig(f"unknown feature subset {name!r}")
    return names


def _parse_models(value) -> list:
    if value in (None, "all"):
        return list(MODEL_KINDS)
    kinds = [v.strip() for v in value.split(",") if v.strip()]
    for kind in kinds:
        if kind not in MODEL_KINDS:
            raise InvalidConfig(f"unknown model {kind!r}; choose from {MODEL_KINDS}")
    return kinds


def _parse_standardize(value):
    if value in (None, "auto"):
        return None
    if value == "on":
        return True
    if value == "off":
        return False
    raise InvalidConfig(f"--standardize must be on, off or auto, got {value!r}")


def _load_labelled_corpus(path):
    corpus = load_corpus(path)
    if len(corpus) == 0:
        raise MalformedDocument(f"corpus at {path} contains no transcripts")
    return corpus


def _subset_of_model(model) -> FeatureSubset:
    names = tuple(model.feature_names)
    for subset in FeatureSubset:
        if names == subset_feature_names(subset):
            return subset
    raise MalformedDocument("model feature names match no known feature subset")


def cmd_extract(args) -> int:
    config = _load_config_file(args.config)
    corpus = _load_labelled_corpus(args.corpus)
    lexicon = _active_lexicon(args, config)
    scorer = _make_scorer(args, config, corpus)
    subset = _SUBSET_BY_NAME[_resolve(args, config, "features", "combined")]
    per_1000 = bool(_resolve(args, config, "per_1000", False))
    dataset = featurize(
        corpus, subset=subset, lexicon=lexicon, scorer=scorer, per_1000_tokens=per_1000
    )
    write_matrix(dataset, args.out)
    counts = corpus.class_counts()
    print(f"wrote {len(dataset)} rows x {len(dataset.feature_names)} features to {args.out}")
    print(
        f"class counts: fraud={counts.get('fraud', 0)} non_fraud={counts.get('non_fraud', 0)} "
        f"unlabelled={counts.get('unlabeled', 0)}"
    )
    print(f"lexicon={lexicon.version} features={subset.value} per_1000={per_1000}")
    return 0


def cmd_evaluate(args) -> int:
    config = _load_config_file(args.config)
    subsets = _parse_subsets(_resolve(args, config, "features", "all"))
    models = _parse_models(_resolve(args, config, "models", "all"))
    k = int(_resolve(args, config, "k", K_DEFAULT))
    seed = int(_resolve(args, config, "seed", DEFAULT_SEED))
    standardize = _parse_standardize(_resolve(args, config, "standardize", "auto"))
    stratified = bool(_resolve(args, config, "stratified", True))
    out_dir = Path(args.out_dir)

    input_path = Path(args.input)
    if input_path.is_file() and input_path.suffix == ".csv":
        full = read_matrix(input_path)
        lexicon_version = None
    else:
        corpus = _load_labelled_corpus(input_path)
        lexicon = _active_lexicon(args, config)
        scorer = _make_scorer(args, config, corpus)
        full = featurize(corpus, subset=FeatureSubset.COMBINED, lexicon=lexicon, scorer=scorer)
        lexicon_version = lexicon.version
    if full.subset != FeatureSubset.COMBINED:
        requested = {full.subset.value}
        missing = set(subsets) - requested
        if missing:
            raise InvalidConfig(
                f"input matrix holds only {full.subset.value} features; "
                f"cannot evaluate {sorted(missing)}"
            )

    plan = make_folds(full, K=k, seed=seed, stratified=stratified)
    results: dict = {}
    for subset_name in subsets:
        dataset = project(full, _SUBSET_BY_NAME[subset_name])
        results[subset_name] = cross_validate(
            dataset, models, plan, standardize=standardize, lexicon_version=lexicon_version
        )
    effective = {
        "command": "evaluate",
        "input": str(args.input),
        "features": subsets,
        "models": models,
        "K": k,
        "seed": seed,
        "standardize": "auto" if standardize is None else standardize,
        "stratified": stratified,
        "lexicon_version": lexicon_version,
        "version": __version__,
    }
    report = EvalReport.build(results, plan, effective)

    out_dir.mkdir(parents=True, exist_ok=True)
    report.save(out_dir / "report.json")
    text = render_report(report)
    (out_dir / "report.txt").write_text(text, encoding="utf-8")
    models_dir = out_dir / "models"
    models_dir.mkdir(exist_ok=True)
    for subset_name in subsets:
        dataset = project(full, _SUBSET_BY_NAME[subset_name])
        for kind in models:
            model = fit_model(
                kind, dataset, standardize=standardize, lexicon_version=lexicon_version
            )
            save_model(model, models_dir / f"{subset_name}_{kind}.json")
    print(text, end="")
    print(f"report written to {out_dir / 'report.txt'} and {out_dir / 'report.json'}")
    print(f"full-data models written to {models_dir}")
    return 0


def _featurize_query(args, config, model):
    subset = _subset_of_model(model)
    with open(args.query, "r", encoding="utf-8") as fh:
        transcript = parse_transcript(fh.read())
    from fraudlex.transcripts import Corpus

    corpus = Corpus(transcripts=[transcript])
    lexicon = _active_lexicon(args, config)
    if model.lexicon_version is not None and model.lexicon_version != lexicon.version:
        raise LexiconVersionMismatch(
            f"model was built with lexicon {model.lexicon_version!r} but the active "
            f"lexicon is {lexicon.version!r}"
        )
    scorer = _make_scorer(args, config, corpus)
    dataset = featurize(corpus, subset=subset, lexicon=lexicon, scorer=scorer)
    return dataset.rows[0]


def cmd_explain(args) -> int:
    config = _load_config_file(args.config)
    model = load_model(args.model)
    if model.kind == "knn":
        if args.query is None:
            print("error: explaining a knn model requires --query <transcript.json>", file=sys.stderr)
            return 2
        row = _featurize_query(args, config, model)
        explanation = model.explain(row.values)
        lines = [f"model: knn (k={explanation.details['k']})", f"query: {row.row_id}"]
        for neighbour in explanation.details["neighbours"]:
            lines.append(
                f"  neighbour {neighbour['row_id']}  distance={neighbour['distance']:.6f}  "
                f"label={neighbour['label']}"
            )
        text = "\n".join(lines) + "\n"
    elif model.kind == "tree":
        text = render_tree(model.explain())
    elif model.kind == "svm":
        details = model.explain().details
        ranked = sorted(details["weights"].items(), key=lambda kv: (-abs(kv[1]), kv[0]))
        lines = ["model: svm (linear, C=1)"]
        lines += [f"  {name:28s} {weight:+.6f}" for name, weight in ranked]
        lines.append(f"  {'bias':28s} {details['bias']:+.6f}")
        text = "\n".join(lines) + "\n"
    else:
        details = model.explain().details
        lines = ["model: naive_bayes (gaussian)"]
        for label in ("0", "1"):
            table = details["classes"][label]
            lines.append(f"class {label}: prior={table['prior']:.6f}")
            for name, cell in table["features"].items():
                lines.append(
                    f"  {name:28s} mean={cell['mean']:+.6f}  variance={cell['variance']:.6e}"
                )
        text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"explanation written to {args.out}")
    else:
        print(text, end="")
    return 0


def cmd_predict(args) -> int:
    config = _load_config_file(args.config)
    model = load_model(args.model)
    row = _featurize_query(args, config, model)
    prediction = int(model.predict([row.values])[0])
    label = "fraud" if prediction == 1 else "non_fraud"
    print(f"{row.row_id}: {label}")
    if model.kind == "tree":
        node = model.nodes[0]
        while not node.is_leaf:
            value = row.values[node.feature]
            went_left = value <= node.threshold
            name = model.feature_names[node.feature]
            print(
                f"  {name} = {value:.6f} {'<=' if went_left else '>'} {node.threshold:g} "
                f"-> {'left' if went_left else 'right'}"
            )
            node = model.nodes[node.left if went_left else node.right]
        print(f"  leaf v:{node.prediction} counts={list(node.counts)}")
    elif model.kind == "svm":
        value = float(model.decision_function([row.values])[0])
        print(f"  decision value w.x + b = {value:+.6f} (>= 0 means fraud)")
    elif model.kind == "naive_bayes":
        posterior = model.predict_proba([row.values])[0]
        print(f"  posterior non_fraud={posterior[0]:.6f} fraud={posterior[1]:.6f}")
    else:
        explanation = model.explain(row.values)
        for neighbour in explanation.details["neighbours"]:
            print(
                f"  neighbour {neighbour['row_id']}  distance={neighbour['distance']:.6f}  "
                f"label={neighbour['label']}"
            )
    return 0


def cmd_synth(args) -> int:
    config = _load_config_file(args.config)
    synth_config = SynthConfig(
        n_fraud=int(_resolve(args, config, "n_fraud", 32)),
        n_nonfraud=int(_resolve(args, config, "n_nonfraud", 24)),
        seed=int(_resolve(args, config, "seed", DEFAULT_SEED)),
        signal_strength=float(_resolve(args, config, "signal_strength", 1.0)),
    )
    corpus, truth = generate(synth_config)
    paths = write_corpus(corpus, truth, args.out)
    print(
        f"wrote {len(paths)} transcripts to {args.out} "
        f"(fraud={synth_config.n_fraud} non_fraud={synth_config.n_nonfraud} "
        f"seed={synth_config.seed} signal={synth_config.signal_strength})"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fraudlex",
        description="Explainable fraud detection for transcribed phone conversations.",
    )
    parser.add_argument("--version", action="version", version=f"fraudlex {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file; flags override its values")
        p.add_argument("--lexicon", help="marker lexicon JSON (default: built-in)")
        p.add_argument(
            "--sentiment",
            help="response scorer: 'lexicon' (default) or 'external:<scores.csv>'",
        )
        p.add_argument("--valence-lexicon", dest="valence_lexicon", help="valence lexicon JSON")

    p = sub.add_parser("extract", help="write a feature matrix CSV for a corpus")
    common(p)
    p.add_argument("corpus", help="corpus directory or manifest file")
    p.add_argument("--features", choices=["markers", "sentiment", "combined"])
    p.add_argument(
        "--per-1000",
        dest="per_1000",
        action="store_const",
        const=True,
        help="rescale marker counts per 1000 tokens",
    )
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("evaluate", help="run K-fold cross-validation and write reports")
    common(p)
    p.add_argument("input", help="corpus directory/manifest or feature matrix CSV")
    p.add_argument("--features", help="comma list of markers,sentiment,combined or 'all'")
    p.add_argument("--models", help=f"comma list from {','.join(MODEL_KINDS)} or 'all'")
    p.add_argument("--k", type=int, help="number of folds (default 10)")
    p.add_argument("--seed", type=int, help=f"fold shuffle seed (default {DEFAULT_SEED})")
    p.add_argument("--standardize", choices=["on", "off", "auto"])
    p.add_argument(
        "--no-stratify",
        dest="stratified",
        action="store_const",
        const=False,
        help="plain (non-stratified) K-fold",
    )
    p.add_argument("--out-dir", required=True, help="directory for report files and models")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("explain", help="print or write a trained model's explanation")
    common(p)
    p.add_argument("model", help="model file written by evaluate")
    p.add_argument("--query", help="transcript JSON (required for knn)")
    p.add_argument("--out", help="write the explanation here instead of stdout")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("predict", help="classify one transcript with a saved model")
    common(p)
    p.add_argument("model", help="model file written by evaluate")
    p.add_argument("query", help="transcript JSON file")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("synth", help="generate a labelled synthetic corpus")
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--n-fraud", dest="n_fraud", type=int)
    p.add_argument("--n-nonfraud", dest="n_nonfraud", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--signal-strength", dest="signal_strength", type=float)
    p.add_argument("--out", required=True, help="output corpus directory")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FraudlexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
