"""Bundled lexicon resources.

Files are UTF-8 ``key<TAB>value`` lines (stopwords: one word per line). The
directory can be replaced wholesale with ``HATESEQ_RESOURCES`` or per file via
``LexiconSet.load(paths=...)``.
"""

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from types import MappingProxyType

DEFAULT_DIR = Path(__file__).parent / "data"
ENV_VAR = "HATESEQ_RESOURCES"

FILES = {
    "emoji_map": "emoji.tsv",
    "slang_map": "slang.tsv",
    "contraction_map": "contractions.tsv",
    "stopwords": "stopwords.txt",
    "unigram_freq": "unigrams.tsv",
    "lemma_exceptions": "lemmas.tsv",
}


class LexiconError(ValueError):
    pass


def resource_dir():
    return Path(os.environ.get(ENV_VAR) or DEFAULT_DIR)


def _read_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if line and not line.startswith("#\t"):
                yield lineno, line


def read_map(path):
    out = {}
    for lineno, line in _read_lines(path):
        if "\t" not in line:
            raise LexiconError(f"{path}:{lineno}: expected key<TAB>value")
        key, value = line.split("\t", 1)
        if not key:
            raise LexiconError(f"{path}:{lineno}: empty key")
        if key in out:
            raise LexiconError(f"{path}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def read_counts(path):
    counts = {}
    for key, value in read_map(path).items():
        try:
            n = int(value)
        except ValueError:
            raise LexiconError(f"{path}: count for {key!r} is not an integer") from None
        if n <= 0:
            raise LexiconError(f"{path}: count for {key!r} must be positive")
        counts[key] = n
    return counts


def read_words(path):
    return frozenset(line.strip() for _, line in _read_lines(path) if line.strip())


@dataclass(frozen=True, eq=False)
class LexiconSet:
    emoji_map: MappingProxyType
    slang_map: MappingProxyType
    contraction_map: MappingProxyType
    stopwords: frozenset
    unigram_freq: MappingProxyType
    lemma_exceptions: MappingProxyType
    total_count: int = field(init=False)

    def __post_init__(self):
        for name in ("emoji_map", "slang_map", "contraction_map", "unigram_freq", "lemma_exceptions"):
            value = getattr(self, name)
            if not isinstance(value, MappingProxyType):
                object.__setattr__(self, name, MappingProxyType(dict(value)))
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))
        object.__setattr__(self, "total_count", sum(self.unigram_freq.values()))

    @classmethod
    def load(cls, directory=None, paths=None):
        directory = Path(directory) if directory else resource_dir()
        paths = dict(paths or {})
        resolved = {name: Path(paths.get(name) or directory / fname) for name, fname in FILES.items()}
        for name, path in resolved.items():
            if not path.exists():
                raise LexiconError(f"lexicon file for {name} not found: {path}")
        return cls(
            emoji_map=read_map(resolved["emoji_map"]),
            slang_map={k.lower(): v for k, v in read_map(resolved["slang_map"]).items()},
            contraction_map={k.lower(): v for k, v in read_map(resolved["contraction_map"]).items()},
            stopwords=read_words(resolved["stopwords"]),
            unigram_freq=read_counts(resolved["unigram_freq"]),
            lemma_exceptions=read_map(resolved["lemma_exceptions"]),
        )

    def known(self, word):
        return word in self.unigram_freq

    def log_prob(self, word):
        """Log unigram probability; unseen words get a length-penalised mass."""
        count = self.unigram_freq.get(word)
        if count is not None:
            return math.log(count / self.total_count)
        return math.log(10.0 / self.total_count) - len(word) * math.log(10.0)


@lru_cache(maxsize=4)
def _default(directory):
    return LexiconSet.load(directory)


def default_lexicons():
    """The bundled lexicons (or those under ``$HATESEQ_RESOURCES``), loaded once."""
    return _default(str(resource_dir()))
