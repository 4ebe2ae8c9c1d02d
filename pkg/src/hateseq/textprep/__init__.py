"""Tweet normalisation stages and their lexicon resources."""

from .lexicon import LexiconError, LexiconSet, default_lexicons
from .segment import segment_words
from .spell import spell_correct
from .stages import StageId, apply_stage, stem_lemmatize

__all__ = [
    "LexiconError",
    "LexiconSet",
    "StageId",
    "apply_stage",
    "default_lexicons",
    "segment_words",
    "spell_correct",
    "stem_lemmatize",
]
