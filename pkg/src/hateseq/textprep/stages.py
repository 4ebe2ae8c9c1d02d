"""The twelve tweet normalisation stages.

Every stage is a total function ``str -> str`` parameterised by a
``LexiconSet``. Token-level stages split on whitespace and rejoin with single
spaces; surrounding punctuation on a token (``"hoes..."``) is kept and only
the core word is rewritten.
"""

import enum
import itertools
import re
import string
import unicodedata
import weakref

from . import porter
from .segment import segment_words, split_camel_case
from .spell import edits1, spell_correct


class StageId(str, enum.Enum):
    I = "strip_urls_noise_hashmarks"  # noqa: E741
    II = "replace_emoji_emoticon"
    III = "segment_hashtag_words"
    IV = "expand_slang_abbrev"
    V = "normalize_elongation"
    VI = "spell_correct"
    VII = "expand_contractions"
    VIII = "strip_punctuation"
    IX = "strip_numerals"
    X = "case_fold"
    XI = "remove_stopwords"
    XII = "stem_lemmatize"

    @property
    def roman(self):
        return self.name

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        text = str(value).strip()
        if text.upper() in cls.__members__:
            return cls[text.upper()]
        try:
            return cls(text)
        except ValueError:
            raise ValueError(f"unknown stage {value!r}") from None


_WS = re.compile(r"\s+")
_EDGE = re.compile(r"^([^\w']*)(.*?)([^\w']*)$", re.S)
_APOSTROPHES = str.maketrans({"’": "'", "‘": "'", "ʼ": "'", "`": "'"})

_URL = re.compile(r"<?(?:https?://|www\.)[^\s>]*>?", re.I)
_MENTION = re.compile(r"(?<!\w)@\w+")
_ENTITY = re.compile(r"&#[xX][0-9A-Fa-f]+;?|&#?\d+;?|&[A-Za-z][A-Za-z0-9]*;")
_RT = re.compile(r"(?<!\S)RT(?!\S)")
_LETTERS = re.compile(r"[^\W\d_]+")
_ALPHA_APOS = re.compile(r"[^\W\d_]+(?:'[^\W\d_]+)*")
_ASCII_WORD = re.compile(r"[A-Za-z]+")
_DIGITS = re.compile(r"\d")
_RUN3 = re.compile(r"(.)\1{2,}")
_PUNCT = frozenset(string.punctuation)

_SKIN_TONES = "".join(chr(c) for c in range(0x1F3FB, 0x1F400))
_EMOJI_STRIP = str.maketrans("", "", "︎️" + _SKIN_TONES)


def _squash(text):
    return _WS.sub(" ", text).strip()


def _split_edges(token):
    return _EDGE.match(token).groups()


def _match_case(original, replacement):
    if original[:1].isupper() and replacement:
        return replacement[0].upper() + replacement[1:]
    return replacement


# --------------------------------------------------------------------------
# per-lexicon compiled patterns

class _Compiled:
    def __init__(self, lex):
        pictos = sorted((k for k in lex.emoji_map if not k.isascii()), key=len, reverse=True)
        emoticons = sorted((k for k in lex.emoji_map if k.isascii()), key=len, reverse=True)
        self.pictograph = re.compile("|".join(map(re.escape, pictos))) if pictos else None
        self.emoticon = (re.compile(r"(?<!\S)(?:" + "|".join(map(re.escape, emoticons)) + r")(?!\S)")
                         if emoticons else None)
        self.no_segment = frozenset(lex.slang_map) | frozenset(lex.unigram_freq)


_compiled = weakref.WeakKeyDictionary()


def _patterns(lex):
    c = _compiled.get(lex)
    if c is None:
        c = _compiled[lex] = _Compiled(lex)
    return c


# --------------------------------------------------------------------------
# stages

def strip_urls_noise(text, lex=None):
    """URLs, @mentions, HTML entities, control characters, RT markers and '#'."""
    prev = None
    while prev != text:
        prev = text
        text = "".join(" " if unicodedata.category(ch) == "Cc" else ch for ch in text)
        text = _URL.sub(" ", text)
        text = text.replace("#", "")
        text = _MENTION.sub(" ", text)
        text = _ENTITY.sub(" ", text)
        text = _RT.sub(" ", text)
        text = _squash(text)
    return text


def _is_pictograph(ch):
    return unicodedata.category(ch) == "So" or ch in "‍⃣" or ch in _SKIN_TONES or ch in "︎️"


def replace_emoji(text, lex):
    """Emoji and emoticons become words; unmapped pictographs are dropped."""
    pats = _patterns(lex)
    if pats.emoticon is not None:
        text = pats.emoticon.sub(lambda m: " " + lex.emoji_map[m.group(0)] + " ", text)
    text = text.translate(_EMOJI_STRIP)
    if pats.pictograph is not None:
        text = pats.pictograph.sub(lambda m: " " + lex.emoji_map[m.group(0)] + " ", text)
    text = "".join(" " if _is_pictograph(ch) else ch for ch in text)
    return _squash(text)


def _is_concatenation(word, lex, known):
    """True when ``word`` reads as run-together words rather than a typo.

    A word one edit away from a known word is taken to be misspelled. Otherwise
    the best split must consist of known words with no stray single letters.
    """
    if any(c in known for c in edits1(word)):
        return False
    pieces = segment_words(word, lex)
    return len(pieces) > 1 and all(p in known and (len(p) > 1 or p in "ai") for p in pieces)


def _segment_token(token, lex, skip):
    lead, core, trail = _split_edges(token.translate(_APOSTROPHES))
    if not core or core.lower() in skip or not _ALPHA_APOS.fullmatch(core):
        return token
    if _RUN3.search(core.lower()):
        # elongated word, not a concatenation
        return token
    out = []
    for piece in core.split("'"):
        for part in split_camel_case(piece):
            if len(part) < 2 or part.lower() in skip:
                out.append(part)
                continue
            if _is_concatenation(part.lower(), lex, skip):
                out.extend(segment_words(part, lex))
            else:
                out.append(part)
    return lead + " ".join(out) + trail


def segment_hashtags(text, lex):
    """Split out-of-vocabulary letter runs into words.

    Tokens that are known words or slang keys are left alone, and so are tokens
    whose best split contains an unknown piece. Apostrophes act
    as token boundaries here, so ``w'll`` falls apart into ``w ll`` if this
    stage runs before contraction expansion.
    """
    skip = _patterns(lex).no_segment
    return " ".join(_segment_token(tok, lex, skip) for tok in text.split())


def expand_slang(text, lex):
    out = []
    for tok in text.split():
        full = lex.slang_map.get(tok.lower())
        if full is not None:
            out.append(full)
            continue
        lead, core, trail = _split_edges(tok)
        full = lex.slang_map.get(core.lower()) if core else None
        out.append(lead + full + trail if full is not None else tok)
    return " ".join(out)


def _elongation_variants(word, runs):
    """Candidate spellings with each long run cut to 2 or 1 letters, doubles first."""
    for lengths in itertools.product((2, 1), repeat=len(runs)):
        pieces, pos = [], 0
        for (start, end), keep in zip(runs, lengths):
            pieces.append(word[pos:start + keep])
            pos = end
        pieces.append(word[pos:])
        yield "".join(pieces)


def _collapse_word(match, lex):
    word = match.group(0)
    lower = word.lower()
    runs = [(m.start(), m.end()) for m in _RUN3.finditer(lower)]
    if not runs:
        return word
    if len(runs) > 8:
        return "".join(next(_elongation_variants(word, runs)))
    best, best_count = None, 0
    for variant in _elongation_variants(word, runs):
        count = lex.unigram_freq.get(variant.lower(), 0)
        if count > best_count:
            best, best_count = variant, count
    return best if best is not None else next(_elongation_variants(word, runs))


def normalize_elongation(text, lex):
    """Cut letter runs of three or more, preferring the spelling in the word list."""
    return _LETTERS.sub(lambda m: _collapse_word(m, lex), text)


def correct_spelling(text, lex):
    skip = _patterns(lex).no_segment
    out = []
    for tok in text.split():
        lead, core, trail = _split_edges(tok)
        if len(core) >= 3 and _ASCII_WORD.fullmatch(core) and core.lower() not in skip:
            fixed = spell_correct(core, lex)
            if fixed != core:
                tok = lead + _match_case(core, fixed) + trail
        out.append(tok)
    return " ".join(out)


_GENERIC_CLITICS = (("n't", " not"), ("'ll", " will"), ("'re", " are"), ("'ve", " have"), ("'m", " am"))


def _expand_one(core, lex):
    norm = core.translate(_APOSTROPHES)
    full = lex.contraction_map.get(norm.lower())
    if full is not None:
        return _match_case(core, full)
    lower = norm.lower()
    for suffix, repl in _GENERIC_CLITICS:
        if lower.endswith(suffix):
            stem = norm[: -len(suffix)]
            if stem.isalpha():
                return stem + repl
    return None


def expand_contractions(text, lex):
    tokens = text.split()
    out = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if i + 1 < len(tokens):
            pair = (tok + " " + tokens[i + 1]).translate(_APOSTROPHES).lower()
            full = lex.contraction_map.get(pair)
            if full is not None:
                out.append(_match_case(tok, full))
                i += 2
                continue
        lead, core, trail = _split_edges(tok)
        full = _expand_one(tok, lex)
        if full is not None:
            out.append(full)
        elif core and (full := _expand_one(core, lex)) is not None:
            out.append(lead + full + trail)
        else:
            out.append(tok)
        i += 1
    return " ".join(out)


def _is_punct(ch):
    return ch in _PUNCT or unicodedata.category(ch).startswith("P")


def strip_punctuation(text, lex=None):
    return _squash("".join(ch for ch in text if not _is_punct(ch)))


def strip_numerals(text, lex=None):
    return _squash(_DIGITS.sub("", text))


def case_fold(text, lex=None):
    return text.lower()


def remove_stopwords(text, lex):
    stop = lex.stopwords
    return " ".join(t for t in text.split()
                    if t.lower() not in stop and t.translate(_APOSTROPHES).lower() not in stop)


def stem_lemmatize(token, lex):
    """Irregular forms from the lemma list, Porter stemming for everything else."""
    lower = token.lower()
    base = lex.lemma_exceptions.get(lower)
    if base is None:
        base = porter.stem(lower)
    return base


def stem_text(text, lex):
    out = []
    for tok in text.split():
        lead, core, trail = _split_edges(tok)
        if core and core.isalpha():
            tok = lead + _match_case(core, stem_lemmatize(core, lex)) + trail
        out.append(tok)
    return " ".join(out)


STAGE_FUNCS = {
    StageId.I: strip_urls_noise,
    StageId.II: replace_emoji,
    StageId.III: segment_hashtags,
    StageId.IV: expand_slang,
    StageId.V: normalize_elongation,
    StageId.VI: correct_spelling,
    StageId.VII: expand_contractions,
    StageId.VIII: strip_punctuation,
    StageId.IX: strip_numerals,
    StageId.X: case_fold,
    StageId.XI: remove_stopwords,
    StageId.XII: stem_text,
}


def apply_stage(stage, text, lex):
    return STAGE_FUNCS[StageId.parse(stage)](text, lex)
