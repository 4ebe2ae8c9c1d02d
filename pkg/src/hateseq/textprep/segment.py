"""Maximum-likelihood word segmentation over a unigram model."""

import re

MAX_WORD_LEN = 24

_CAMEL = re.compile(r"[A-Z]+(?![a-z])|[A-Z]?[a-z]+")


def segment_words(token, lex):
    """Split a run of letters into the word sequence with the highest unigram likelihood.

    Dynamic programming over split points; ``best[i]`` is the best score of
    ``token[:i]``. Lookup is case-insensitive, the returned pieces are slices
    of the original token. Unknown fragments are scored by
    ``LexiconSet.log_prob``, which decays by a factor of ten per character so a
    known word always beats an unknown split of it.
    """
    if not token:
        return []
    lower = token.lower()
    n = len(lower)
    best = [0.0] + [float("-inf")] * n
    back = [0] * (n + 1)
    for end in range(1, n + 1):
        for start in range(max(0, end - MAX_WORD_LEN), end):
            score = best[start] + lex.log_prob(lower[start:end])
            if score > best[end]:
                best[end] = score
                back[end] = start
    pieces = []
    end = n
    while end > 0:
        start = back[end]
        pieces.append(token[start:end])
        end = start
    return pieces[::-1]


def segmentation_score(words, lex):
    return sum(lex.log_prob(w.lower()) for w in words)


def split_camel_case(token):
    """``HappyHumpDay`` -> ``[Happy, Hump, Day]``; returns ``[token]`` when there is no hint."""
    parts = _CAMEL.findall(token)
    if len(parts) > 1 and "".join(parts) == token:
        return parts
    return [token]
