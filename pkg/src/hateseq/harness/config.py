"""Experiment configuration (YAML) and its validation.

Schema (version 1)::

    version: 1
    seed: 42                      # required
    datasets:                     # required, one or more
      - path: fixture             # "fixture" = the bundled synthetic corpus
        format: generic_csv       # wzls_csv | dt_csv | founta_tsv | generic_csv
    sequences: [T1, T2, PROPOSED, "I,II,VII,III,IV,V,VI,VIII,IX,X,XI,XII"]
    vectorizer: tfidf             # count | tfidf, or a list of both
    min_df: 2
    max_features: 50000
    models:                       # base learners, by name or with params
      - LR
      - {kind: DT, params: {max_depth: 10}}
    ensembles:
      - {kind: STACKING, bases: [LR, SVM, RF], meta: LR, folds: 5}
      - {kind: BAGGING, base: DT, k: 15}
      - {kind: VOTE_SOFT, bases: [LR, SVM, RF], weights: validation}
    ensemble_sequences: [T8, PROPOSED]
    split: [0.8, 0.1, 0.1]
    output: results
    strict_constraints: false
    spell_correct: true
    workers: 1
    resources:                    # optional lexicon overrides
      directory: path/to/lexicons
      slang_map: path/to/slang.tsv

Relative paths are resolved against the config file's directory.
"""

import copy
import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from ..corpus import FORMATS
from ..ensemble import EnsembleError, EnsembleSpec
from ..learners import ClassifierSpec, LearnerError
from ..pipeline import SequenceError, parse_sequence, validate_sequence
from ..textprep.lexicon import ENV_VAR, FILES, resource_dir
from .fixture import FIXTURE_PATH

CONFIG_VERSION = 1
VECTORIZERS = ("count", "tfidf")
DEFAULT_ENSEMBLE_SEQUENCES = ("T8", "PROPOSED")
_KNOWN_KEYS = {"version", "seed", "datasets", "sequences", "vectorizer", "min_df", "max_features",
               "models", "ensembles", "ensemble_sequences", "split", "output", "strict_constraints",
               "spell_correct", "workers", "resources"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" | "warning"
    message: str

    def __str__(self):
        return f"{self.level}: {self.message}"


@dataclass(frozen=True)
class DatasetSpec:
    path: str
    format: str

    @property
    def is_fixture(self):
        return self.path == "fixture"

    def resolved(self):
        return FIXTURE_PATH if self.is_fixture else Path(self.path)


@dataclass(frozen=True)
class EnsembleEntry:
    """An ensemble plus the (optional) rule for voting weights."""

    name: str
    spec: EnsembleSpec
    weights_from_validation: bool = False


@dataclass
class ExperimentConfig:
    seed: int
    datasets: list
    sequences: list
    vectorizers: list
    models: list
    ensembles: list = field(default_factory=list)
    ensemble_sequences: list = field(default_factory=lambda: list(DEFAULT_ENSEMBLE_SEQUENCES))
    split: tuple = (0.8, 0.1, 0.1)
    output: str = "results"
    strict_constraints: bool = False
    spell_correct: bool = True
    min_df: int = 2
    max_features: int = 50_000
    workers: int = 1
    resources: dict = field(default_factory=dict)
    source: str = None

    def lexicon_paths(self):
        """``(directory, per-file paths)``; the environment variable wins for the directory."""
        paths = {k: v for k, v in self.resources.items() if k != "directory"}
        directory = os.environ.get(ENV_VAR) or self.resources.get("directory") or resource_dir()
        return Path(directory), paths

    def as_dict(self):
        return {
            "seed": self.seed,
            "datasets": [{"path": d.path, "format": d.format} for d in self.datasets],
            "sequences": [{"alias": s.alias, "stages": s.roman()} for s in self.sequences],
            "vectorizers": list(self.vectorizers),
            "models": [m.to_dict() for m in self.models],
            "ensembles": [{"name": e.name, **e.spec.to_dict()} for e in self.ensembles],
            "ensemble_sequences": list(self.ensemble_sequences),
            "split": list(self.split),
            "strict_constraints": self.strict_constraints,
            "spell_correct": self.spell_correct,
            "min_df": self.min_df,
            "max_features": self.max_features,
        }


# --------------------------------------------------------------------------
# parsing

def _classifier(entry, where):
    try:
        if isinstance(entry, str):
            return ClassifierSpec(entry)
        if isinstance(entry, dict):
            return ClassifierSpec(entry.get("kind", ""), dict(entry.get("params") or {}))
    except LearnerError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    raise ConfigError(f"{where}: expected a model name or {{kind, params}} mapping")


def _ensemble(entry, seed, idx, workers):
    where = f"ensembles[{idx}]"
    if isinstance(entry, str):
        entry = {"kind": entry}
    if not isinstance(entry, dict):
        raise ConfigError(f"{where}: expected a mapping")
    kind = str(entry.get("kind", "")).upper().replace("-", "_")
    defaults = default_ensemble(kind)
    if defaults is None:
        raise ConfigError(f"{where}: unknown ensemble kind {entry.get('kind')!r}")
    base_entries = entry.get("bases") or ([entry["base"]] if "base" in entry else None)
    bases = ([_classifier(b, f"{where}.bases") for b in base_entries] if base_entries
             else list(defaults.base_specs))
    meta = _classifier(entry["meta"], f"{where}.meta") if "meta" in entry else defaults.meta_spec
    weights = entry.get("weights")
    from_val = weights == "validation"
    try:
        spec = EnsembleSpec(kind, tuple(bases), meta, int(entry.get("k", defaults.k)),
                            int(entry.get("folds", defaults.folds)), seed,
                            None if from_val or weights is None else tuple(weights), workers)
    except EnsembleError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    name = entry.get("name") or ensemble_name(spec)
    return EnsembleEntry(name, spec, from_val)


def default_ensemble(kind, base=None):
    """The ensemble a bare kind name stands for (base models follow the published grid)."""
    trio = (ClassifierSpec("LR"), ClassifierSpec("SVM"), ClassifierSpec("RF"))
    if kind == "BAGGING":
        return EnsembleSpec(kind, (base or ClassifierSpec("DT"),), k=10)
    if kind == "ADABOOST":
        return EnsembleSpec(kind, (base or ClassifierSpec.of("DT", max_depth=1),), k=50)
    if kind in ("VOTE_HARD", "VOTE_SOFT", "STACKING"):
        return EnsembleSpec(kind, trio, ClassifierSpec("LR") if kind == "STACKING" else None)
    return None


def ensemble_name(spec):
    bases = "+".join(b.kind for b in spec.base_specs)
    return f"{spec.kind}({bases})"


def _ratios(value):
    try:
        ratios = tuple(float(r) for r in value)
    except (TypeError, ValueError):
        raise ConfigError("split: expected three ratios") from None
    if len(ratios) != 3 or any(r < 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-6:
        raise ConfigError(f"split: expected three non-negative ratios summing to 1, got {list(value)}")
    return ratios


def _as_list(value):
    if value is None:
        return []
    return list(value) if isinstance(value, (list, tuple)) else [value]


def parse_config(data, base_dir=None, source=None):
    """Build an ExperimentConfig from parsed YAML; raises ConfigError on schema errors."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping at the top level")
    data = copy.deepcopy(data)
    unknown = set(data) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    version = data.get("version", CONFIG_VERSION)
    if version != CONFIG_VERSION:
        raise ConfigError(f"unsupported config version {version!r} (expected {CONFIG_VERSION})")
    if "seed" not in data or isinstance(data["seed"], bool) or not isinstance(data["seed"], int):
        raise ConfigError("seed: an integer seed is required")
    seed = data["seed"]
    base_dir = Path(base_dir) if base_dir else Path.cwd()

    datasets = []
    for i, d in enumerate(_as_list(data.get("datasets"))):
        if isinstance(d, str):
            d = {"path": d}
        if not isinstance(d, dict) or "path" not in d:
            raise ConfigError(f"datasets[{i}]: expected a mapping with a path")
        fmt = str(d.get("format", "generic_csv")).lower()
        if fmt not in FORMATS:
            raise ConfigError(f"datasets[{i}]: unknown format {fmt!r} (valid: {', '.join(FORMATS)})")
        path = str(d["path"])
        if path != "fixture" and not Path(path).is_absolute():
            path = str(base_dir / path)
        datasets.append(DatasetSpec(path, fmt))
    if not datasets:
        raise ConfigError("datasets: at least one dataset is required")

    sequences = []
    for i, s in enumerate(_as_list(data.get("sequences"))):
        try:
            sequences.append(parse_sequence(",".join(s) if isinstance(s, list) else s))
        except SequenceError as exc:
            raise ConfigError(f"sequences[{i}]: {exc}") from None
    if not sequences:
        raise ConfigError("sequences: at least one sequence is required")

    vectorizers = [str(v).lower() for v in _as_list(data.get("vectorizer", "tfidf"))]
    for v in vectorizers:
        if v not in VECTORIZERS:
            raise ConfigError(f"vectorizer: unknown {v!r} (count or tfidf)")

    workers = int(data.get("workers", 1))
    models = [_classifier(m, f"models[{i}]") for i, m in enumerate(_as_list(data.get("models")))]
    ensembles = [_ensemble(e, seed, i, workers) for i, e in enumerate(_as_list(data.get("ensembles")))]
    if not models and not ensembles:
        raise ConfigError("models: at least one model or ensemble is required")

    ens_seqs = []
    for s in _as_list(data.get("ensemble_sequences", list(DEFAULT_ENSEMBLE_SEQUENCES))):
        try:
            ens_seqs.append(parse_sequence(s).alias)
        except SequenceError as exc:
            raise ConfigError(f"ensemble_sequences: {exc}") from None

    resources = dict(data.get("resources") or {})
    bad = set(resources) - set(FILES) - {"directory"}
    if bad:
        raise ConfigError(f"resources: unknown keys {sorted(bad)} (valid: directory, {', '.join(FILES)})")
    for k, v in resources.items():
        if not Path(v).is_absolute():
            resources[k] = str(base_dir / v)

    min_df = int(data.get("min_df", 2))
    max_features = data.get("max_features", 50_000)
    if min_df < 1:
        raise ConfigError("min_df must be >= 1")
    if max_features is not None and int(max_features) < 1:
        raise ConfigError("max_features must be >= 1")

    output = str(data.get("output", "results"))
    if not Path(output).is_absolute():
        output = str(base_dir / output)

    return ExperimentConfig(
        seed=seed, datasets=datasets, sequences=sequences, vectorizers=vectorizers, models=models,
        ensembles=ensembles, ensemble_sequences=ens_seqs, split=_ratios(data.get("split", (0.8, 0.1, 0.1))),
        output=output, strict_constraints=bool(data.get("strict_constraints", False)),
        spell_correct=bool(data.get("spell_correct", True)), min_df=min_df,
        max_features=None if max_features is None else int(max_features), workers=max(1, workers),
        resources=resources, source=source,
    )


def read_config_file(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from None
    return data, path.parent


def load_config(path):
    data, base_dir = read_config_file(path)
    return parse_config(data, base_dir, source=str(path))


# --------------------------------------------------------------------------
# validation

def diagnose(config):
    """Warnings/errors about an already-parsed config; never mutates anything."""
    out = []
    for seq in config.sequences:
        for v in validate_sequence(seq).violations:
            level = "error" if config.strict_constraints else "warning"
            out.append(Diagnostic(level, f"sequence {seq.alias} violates {v}"))
    for d in config.datasets:
        if not d.resolved().exists():
            out.append(Diagnostic("error", f"dataset not found: {d.resolved()}"))
    directory, paths = config.lexicon_paths()
    for name, fname in FILES.items():
        p = Path(paths.get(name) or directory / fname)
        if not p.exists():
            out.append(Diagnostic("error", f"lexicon file for {name} not found: {p}"))
    return out


def validate_config(path):
    """Diagnostics for the config at ``path``; an unreadable file raises ConfigError."""
    data, base_dir = read_config_file(path)
    try:
        config = parse_config(data, base_dir, source=str(path))
    except ConfigError as exc:
        return [Diagnostic("error", str(exc))]
    return diagnose(config)
