"""Preprocessing sequences: presets, ordering rules and corpus execution."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .corpus import LabeledCorpus
from .textprep.stages import StageId, apply_stage

log = logging.getLogger(__name__)

S = StageId

# Roman-numeral column of the published sequence table; I = URL/noise removal,
# II = emoji replacement.
_TABLE = {
    "T1": "I,IV,VI,IX,III,XII,VIII,V,X,XI,VII,II",
    "T2": "I,II,III,IV,V,VI,VII,VIII,IX,X,XI,XII",
    "T3": "I,V,III,IV,VII,II,VI,VIII,IX,X,XI,XII",
    "T4": "I,IV,VII,V,II,III,VI,VIII,IX,X,XI,XII",
    "T5": "I,V,VII,II,III,IV,VI,VIII,IX,X,XI,XII",
    "T6": "I,V,IV,III,VII,II,VI,VIII,X,IX,XI,XII",
    "T7": "I,IV,III,II,VI,VII,VIII,X,V,IX,XI,XII",
    "T8": "I,III,IV,II,VI,VII,VIII,X,V,IX,XI,XII",
    # hashtag removal, then contractions, then segmentation; slang before numerals
    "PROPOSED": "I,II,VII,III,IV,V,VI,VIII,IX,X,XI,XII",
}

ALIASES = tuple(_TABLE)


class SequenceError(ValueError):
    pass


@dataclass(frozen=True)
class Sequence:
    alias: str
    stages: tuple

    def __post_init__(self):
        stages = tuple(StageId.parse(s) for s in self.stages)
        if len(stages) != len(StageId) or set(stages) != set(StageId):
            missing = [s.name for s in StageId if s not in stages]
            raise SequenceError(f"sequence {self.alias!r} must use each of the twelve stages exactly once"
                                + (f" (missing: {', '.join(missing)})" if missing else " (repeats)"))
        object.__setattr__(self, "stages", stages)

    def roman(self):
        return ",".join(s.name for s in self.stages)

    def position(self, stage):
        return self.stages.index(stage)

    def without(self, *skip):
        """Stages in order with ``skip`` removed (e.g. spelling turned off)."""
        return tuple(s for s in self.stages if s not in skip)


def parse_sequence(text, alias=None):
    """Build a sequence from a preset alias or a comma-separated Roman list."""
    key = str(text).strip()
    if key.upper() in _TABLE:
        return preset(key.upper())
    try:
        stages = [StageId.parse(part) for part in key.split(",") if part.strip()]
    except ValueError as exc:
        raise SequenceError(f"{exc}; expected an alias ({', '.join(ALIASES)}) or a Roman list") from None
    return Sequence(alias or key.replace(" ", ""), tuple(stages))


def preset(alias):
    if alias not in _TABLE:
        raise SequenceError(f"unknown sequence alias {alias!r} (valid: {', '.join(ALIASES)})")
    return Sequence(alias, tuple(StageId[r] for r in _TABLE[alias].split(",")))


# --------------------------------------------------------------------------
# ordering rules

@dataclass(frozen=True)
class Violation:
    rule: str
    name: str
    stages: tuple
    positions: tuple

    def __str__(self):
        a, b = (s.name for s in self.stages)
        return f"{self.rule} {self.name}: {a}@{self.positions[0]} / {b}@{self.positions[1]}"


@dataclass(frozen=True)
class ConstraintReport:
    violations: tuple = ()

    @property
    def ok(self):
        return not self.violations

    def rules(self):
        return [v.rule for v in self.violations]


def _before(rule, name, a, b):
    def check(seq):
        pa, pb = seq.position(a), seq.position(b)
        if pa > pb:
            return [Violation(rule, name, (a, b), (pa, pb))]
        return []
    return check


def _first(seq):
    pos = seq.position(S.I)
    if pos != 0:
        return [Violation("R1", "noise-removal-first", (S.I, seq.stages[0]), (pos, 0))]
    return []


def _tail(seq):
    n = len(seq.stages)
    out = []
    if seq.stages[n - 2] != S.XI:
        out.append(Violation("R5", "stopwords-then-stemming-last", (S.XI, seq.stages[n - 2]),
                             (seq.position(S.XI), n - 2)))
    if seq.stages[n - 1] != S.XII:
        out.append(Violation("R5", "stopwords-then-stemming-last", (S.XII, seq.stages[n - 1]),
                             (seq.position(S.XII), n - 1)))
    return out


RULES = (
    _first,
    _before("R2", "contractions-before-segmentation", S.VII, S.III),
    _before("R3", "slang-before-numerals", S.IV, S.IX),
    _before("R4", "noise-before-segmentation", S.I, S.III),
    _tail,
    _before("R6", "numerals-before-stopwords", S.IX, S.XI),
)


def validate_sequence(seq):
    """Check ``seq`` against every ordering rule; never raises."""
    violations = []
    for rule in RULES:
        violations.extend(rule(seq))
    return ConstraintReport(tuple(violations))


def check_sequence(seq, strict=False):
    report = validate_sequence(seq)
    for v in report.violations:
        if strict:
            raise SequenceError(f"sequence {seq.alias} violates {v}")
        log.warning("sequence %s violates %s", seq.alias, v)
    return report


# --------------------------------------------------------------------------
# execution

def preprocess_text(text, seq, lex, spell=True):
    stages = seq.stages if spell else seq.without(S.VI)
    for stage in stages:
        text = apply_stage(stage, text, lex)
    return text


def run_pipeline(seq, corpus, lex, spell=True, workers=1):
    """Apply the stages left to right to every document; ids, labels and order are kept."""
    texts = corpus.texts
    if workers > 1 and len(texts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cleaned = list(pool.map(lambda t: preprocess_text(t, seq, lex, spell), texts))
    else:
        cleaned = [preprocess_text(t, seq, lex, spell) for t in texts]
    return LabeledCorpus(d.with_text(t) for d, t in zip(corpus.documents, cleaned))
