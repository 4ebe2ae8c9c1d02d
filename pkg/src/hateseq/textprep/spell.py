"""Norvig-style spelling correction (edit distance 1, then 2)."""

import weakref
from functools import lru_cache

LETTERS = "abcdefghijklmnopqrstuvwxyz"


def edits1(word):
    splits = [(word[:i], word[i:]) for i in range(len(word) + 1)]
    deletes = [a + b[1:] for a, b in splits if b]
    transposes = [a + b[1] + b[0] + b[2:] for a, b in splits if len(b) > 1]
    replaces = [a + c + b[1:] for a, b in splits if b for c in LETTERS]
    inserts = [a + c + b for a, b in splits for c in LETTERS]
    return set(deletes + transposes + replaces + inserts)


def _pick(candidates, freq):
    # highest count wins, then the alphabetically first word
    return min(candidates, key=lambda w: (-freq[w], w))


def _correct(word, freq):
    if word in freq:
        return word
    first = edits1(word)
    known = {w for w in first if w in freq}
    if known:
        return _pick(known, freq)
    known = {e2 for e1 in first for e2 in edits1(e1) if e2 in freq}
    if known:
        return _pick(known, freq)
    return word


_correctors = weakref.WeakKeyDictionary()


def spell_correct(token, lex):
    """Most frequent known word within one (else two) edits of ``token``.

    Matching is done in lowercase and corrections come back lowercase; known
    words and tokens with no candidate are returned unchanged.
    """
    fn = _correctors.get(lex)
    if fn is None:
        freq = lex.unigram_freq
        fn = _correctors[lex] = lru_cache(maxsize=200_000)(lambda w: _correct(w, freq))
    lower = token.lower()
    fixed = fn(lower)
    return token if fixed == lower else fixed
