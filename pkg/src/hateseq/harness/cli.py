"""Command line interface: ``run``, ``validate`` and ``preprocess``."""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from ..corpus import CorpusError, binarize, load_dataset, write_generic_csv
from ..learners import ClassifierSpec
from ..pipeline import SequenceError, check_sequence, parse_sequence, run_pipeline
from ..textprep.lexicon import LexiconError, LexiconSet
from .config import (ConfigError, EnsembleEntry, default_ensemble, diagnose, ensemble_name,
                     load_config, validate_config)
from .runner import run_experiment

MODEL_CHOICES = ("lr", "svm", "dt", "rf", "kn")
ENSEMBLE_CHOICES = ("bagging", "adaboost", "vote-hard", "vote-soft", "stacking")


def _apply_overrides(config, args):
    if args.seed is not None:
        config.seed = args.seed
    if args.sequence:
        config.sequences = [parse_sequence(s) for s in args.sequence]
        config.ensemble_sequences = [s.alias for s in config.sequences]
    if args.vectorizer:
        config.vectorizers = [args.vectorizer]
    model = ClassifierSpec(args.model.upper()) if args.model else None
    if args.ensemble:
        kind = args.ensemble.upper().replace("-", "_")
        base = model if kind in ("BAGGING", "ADABOOST") else None
        spec = default_ensemble(kind, base)
        config.ensembles = [EnsembleEntry(ensemble_name(spec), spec)]
        config.models = [] if base is not None or model is None else [model]
    elif model is not None:
        config.models = [model]
        config.ensembles = []
    if args.strict:
        config.strict_constraints = True
    if args.no_spell:
        config.spell_correct = False
    if args.workers:
        config.workers = args.workers
    # ensembles carry the root seed and worker count
    config.ensembles = [dataclasses.replace(e, spec=dataclasses.replace(e.spec, seed=config.seed,
                                                                        workers=config.workers))
                        for e in config.ensembles]
    return config


def cmd_run(args):
    try:
        config = _apply_overrides(load_config(args.config), args)
    except (ConfigError, SequenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    # warnings are logged by the runner itself
    for d in diagnose(config):
        if d.level == "error":
            print(d, file=sys.stderr)
    outcome = run_experiment(config, args.out)
    ok = sum(r.status == "ok" for r in outcome.results)
    print(f"{ok}/{len(outcome.results)} cells succeeded")
    for kind, path in outcome.paths.items():
        print(f"{kind}: {path}")
    return outcome.exit_code


def cmd_validate(args):
    try:
        diagnostics = validate_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for d in diagnostics:
        print(d)
    if any(d.level == "error" for d in diagnostics):
        return 1
    if not diagnostics:
        print("ok")
    return 0


def cmd_preprocess(args):
    try:
        seq = parse_sequence(args.sequence)
        check_sequence(seq, strict=args.strict)
        lex = LexiconSet.load(args.resources) if args.resources else LexiconSet.load()
        corpus = binarize(load_dataset(args.input, args.format))
    except (SequenceError, LexiconError, CorpusError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    cleaned = run_pipeline(seq, corpus, lex, spell=not args.no_spell, workers=args.workers or 1)
    args.output.parent.mkdir(parents=True, exist_ok=True)
    write_generic_csv(cleaned, args.output)
    print(f"wrote {len(cleaned)} documents to {args.output}")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="hateseq", description="Tweet preprocessing-order experiments.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the sequence x model grid from a config file")
    run.add_argument("--config", required=True, type=Path)
    run.add_argument("--out", type=Path, help="output directory (default: the config's 'output')")
    run.add_argument("--seed", type=int)
    run.add_argument("--sequence", action="append", help="alias (T1..T8, PROPOSED) or Roman list; repeatable")
    run.add_argument("--vectorizer", choices=("count", "tfidf"))
    run.add_argument("--model", choices=MODEL_CHOICES)
    run.add_argument("--ensemble", choices=ENSEMBLE_CHOICES)
    run.add_argument("--strict", action="store_true", help="treat ordering-rule violations as errors")
    run.add_argument("--no-spell", action="store_true", help="skip spelling correction")
    run.add_argument("--workers", type=int)
    run.set_defaults(func=cmd_run)

    val = sub.add_parser("validate", help="check a config without running it")
    val.add_argument("--config", required=True, type=Path)
    val.set_defaults(func=cmd_validate)

    pre = sub.add_parser("preprocess", help="apply one sequence to a corpus file")
    pre.add_argument("--sequence", required=True)
    pre.add_argument("--in", dest="input", required=True, type=Path)
    pre.add_argument("--out", dest="output", required=True, type=Path)
    pre.add_argument("--format", default="generic_csv",
                     choices=("generic_csv", "dt_csv", "wzls_csv", "founta_tsv"))
    pre.add_argument("--resources", type=Path, help="lexicon directory")
    pre.add_argument("--strict", action="store_true")
    pre.add_argument("--no-spell", action="store_true")
    pre.add_argument("--workers", type=int)
    pre.set_defaults(func=cmd_preprocess)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
