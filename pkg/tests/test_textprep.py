import itertools
import math
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hateseq.textprep import LexiconError, LexiconSet, StageId, apply_stage, segment_words, spell_correct
from hateseq.textprep import porter
from hateseq.textprep.lexicon import ENV_VAR, FILES, DEFAULT_DIR, resource_dir
from hateseq.textprep.segment import segmentation_score
from hateseq.textprep.stages import stem_lemmatize


# -- golden stage examples ---------------------------------------------------

@pytest.mark.parametrize("stage, text, expected", [
    ("II", "Sunday is looking pretty good so far 😊", "Sunday is looking pretty good so far happy"),
    ("VII", "we don't pay hoes", "we do not pay hoes"),
    ("V", "Fuccckkkkkk", "Fuck"),
    ("V", "I just want some damn alone time. Fuccckkkkkk!", "I just want some damn alone time. Fuck!"),
    ("IX", "Lol82211", "Lol"),
    ("X", "already lowercase", "already lowercase"),
    ("VIII", "!!!!!!!she look like a tranny", "she look like a tranny"),
    ("III", "usedbytrendypeople", "used by trendy people"),
    ("III", "HappyHumpDay", "Happy Hump Day"),
    ("IV", "2nite", "tonight"),
    ("VI", "Experiencing frst lounge", "Experiencing first lounge"),
    ("XII", "running", "run"),
])
def test_stage_examples(lex, stage, text, expected):
    assert apply_stage(stage, text, lex) == expected


@pytest.mark.parametrize("token, expected", [
    ("goblinsarescum", "goblins are scum"),
    ("speling", "speling"),  # a typo, left for spelling correction
    ("zorblings", "zorblings"),  # no clean split into known words
    ("house", "house"),
])
def test_segmentation_only_splits_concatenations(lex, token, expected):
    assert apply_stage("III", token, lex) == expected


def test_stage_one_removes_noise_keeps_hashtag_body(lex):
    text = "RT @user look &amp; see https://t.co/abc #HappyHumpDay\x07 www.x.com/y"
    assert apply_stage(StageId.I, text, lex) == "look see HappyHumpDay"


def test_unknown_pictograph_deleted(lex):
    assert apply_stage("II", "ok ☈ then", lex) == "ok then"


def test_emoticon_needs_token_boundary(lex):
    out = apply_stage("II", "nice :) but http://x", lex)
    assert out.startswith("nice ") and "http://x" in out


def test_elongation_keeps_doubles(lex):
    assert apply_stage("V", "sweet", lex) == "sweet"
    assert apply_stage("V", "sweeeeet", lex) == "sweet"


def test_contraction_case_and_clitics(lex):
    assert apply_stage("VII", "Don't", lex).lower() == "do not"
    assert apply_stage("VII", "they'll", lex) == "they will"


def test_stage_parse_accepts_both_names():
    assert StageId.parse("iii") is StageId.III
    assert StageId.parse("segment_hashtag_words") is StageId.III
    with pytest.raises(ValueError):
        StageId.parse("XIII")
    assert len(StageId) == 12


# -- segmentation ------------------------------------------------------------

def brute_force_best(token, lex):
    n = len(token)
    best, best_score = None, -math.inf
    for cuts in itertools.product((0, 1), repeat=n - 1):
        pieces, start = [], 0
        for i, c in enumerate(cuts, start=1):
            if c:
                pieces.append(token[start:i])
                start = i
        pieces.append(token[start:])
        if max(map(len, pieces)) > 24:
            continue
        s = segmentation_score(pieces, lex)
        if s > best_score + 1e-12:
            best, best_score = pieces, s
    return best, best_score


def test_segment_examples(lex):
    assert segment_words("usedbytrendypeople", lex) == ["used", "by", "trendy", "people"]
    assert segment_words("hello", lex) == ["hello"]
    assert segment_words("happyhumpday", lex) == brute_force_best("happyhumpday", lex)[0] == ["happy", "hump", "day"]


@given(st.text(alphabet="abcdehilmnoprstuy", min_size=1, max_size=12))
@settings(max_examples=60, deadline=None)
def test_segment_optimal(lex, token):
    got = segment_words(token, lex)
    assert "".join(got) == token
    _, best = brute_force_best(token, lex)
    assert segmentation_score(got, lex) == pytest.approx(best, abs=1e-9)


def test_segment_optimal_long_token(lex):
    token = "loveourcountry"
    assert segmentation_score(segment_words(token, lex), lex) == pytest.approx(brute_force_best(token, lex)[1])


# -- spelling ----------------------------------------------------------------

def osa_distance(a, b):
    d = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        d[i][0] = i
    for j in range(len(b) + 1):
        d[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            cost = a[i - 1] != b[j - 1]
            d[i][j] = min(d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost)
            if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
                d[i][j] = min(d[i][j], d[i - 2][j - 2] + 1)
    return d[-1][-1]


def brute_force_correction(word, lex):
    freq = lex.unigram_freq
    if word in freq:
        return word
    near = [w for w in freq if abs(len(w) - len(word)) <= 1 and osa_distance(word, w) == 1]
    if near:
        return min(near, key=lambda w: (-freq[w], w))
    return None


@pytest.mark.parametrize("word", ["speling", "frst", "helo", "wrld", "becuase"])
def test_spell_matches_brute_force(lex, word):
    assert spell_correct(word, lex) == brute_force_correction(word, lex)


def test_spell_known_and_hopeless(lex):
    assert spell_correct("house", lex) == "house"
    assert spell_correct("qzxqzxqzx", lex) == "qzxqzxqzx"
    assert spell_correct("frst", lex) == "first"


# -- stemming ----------------------------------------------------------------

PORTER_VECTORS = {
    "caresses": "caress", "ponies": "poni", "ties": "ti", "caress": "caress", "cats": "cat",
    "feed": "feed", "agreed": "agre", "plastered": "plaster", "bled": "bled", "motoring": "motor",
    "sing": "sing", "conflated": "conflat", "troubled": "troubl", "sized": "size", "hopping": "hop",
    "tanned": "tan", "falling": "fall", "hissing": "hiss", "fizzed": "fizz", "failing": "fail",
    "filing": "file", "happy": "happi", "sky": "sky", "relational": "relat", "conditional": "condit",
    "rational": "ration", "valenci": "valenc", "hesitanci": "hesit", "digitizer": "digit",
    "conformabli": "conform", "radicalli": "radic", "differentli": "differ", "vileli": "vile",
    "analogousli": "analog", "vietnamization": "vietnam", "predication": "predic", "operator": "oper",
    "feudalism": "feudal", "decisiveness": "decis", "hopefulness": "hope", "callousness": "callous",
    "formaliti": "formal", "sensitiviti": "sensit", "sensibiliti": "sensibl", "triplicate": "triplic",
    "formative": "form", "formalize": "formal", "electriciti": "electr", "electrical": "electr",
    "hopeful": "hope", "goodness": "good", "revival": "reviv", "allowance": "allow", "inference": "infer",
    "airliner": "airlin", "gyroscopic": "gyroscop", "adjustable": "adjust", "defensible": "defens",
    "irritant": "irrit", "replacement": "replac", "adjustment": "adjust", "dependent": "depend",
    "adoption": "adopt", "homologou": "homolog", "communism": "commun", "activate": "activ",
    "angulariti": "angular", "homologous": "homolog", "effective": "effect", "bowdlerize": "bowdler",
    "probate": "probat", "rate": "rate", "cease": "ceas", "controll": "control", "roll": "roll",
}


@pytest.mark.parametrize("word, stem", sorted(PORTER_VECTORS.items()))
def test_porter_reference_vectors(word, stem):
    assert porter.stem(word) == stem


def test_porter_agrees_with_nltk_on_lexicon(lex):
    nltk_porter = pytest.importorskip("nltk.stem.porter")
    ref = nltk_porter.PorterStemmer(nltk_porter.PorterStemmer.ORIGINAL_ALGORITHM)
    words = [w for w in lex.unigram_freq if w.isascii() and w.isalpha() and len(w) > 2]
    mismatches = [w for w in words if porter.stem(w) != ref.stem(w)]
    assert mismatches == []


def test_short_words_untouched():
    assert porter.stem("is") == "is" and porter.stem("as") == "as"


def test_stem_lemmatize(lex):
    assert stem_lemmatize("running", lex) == "run"
    assert stem_lemmatize("use", lex) == "us"
    assert stem_lemmatize("caresses", lex) == "caress"
    assert stem_lemmatize("went", lex) == "go"


# -- properties ----------------------------------------------------------------

tweets = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=40) | st.from_regex(
    r"(#?[A-Za-z]{1,8}|[0-9]{1,3}|https?://x\.co/[a-z]{2}|@[a-z]{2,5}|[!?.,']{1,3}|😊|:\)) ?"
    r"(#?[A-Za-z]{1,8}|don't|2nite|sooo) ?", fullmatch=True)


@given(tweets)
@settings(max_examples=150, deadline=None)
def test_idempotent_stages(lex, text):
    for stage in ("I", "V", "VIII", "IX", "X", "XI"):
        once = apply_stage(stage, text, lex)
        assert apply_stage(stage, once, lex) == once, stage


@given(tweets)
@settings(max_examples=150, deadline=None)
def test_stage_postconditions(lex, text):
    assert not re.search(r"\d", apply_stage("IX", text, lex))
    folded = apply_stage("X", text, lex)
    assert folded == folded.lower()
    assert not set(apply_stage("XI", text, lex).split()) & lex.stopwords


@given(tweets)
@settings(max_examples=80, deadline=None)
def test_all_stages_total(lex, text):
    for stage in StageId:
        assert isinstance(apply_stage(stage, text, lex), str)


# -- lexicons ----------------------------------------------------------------

def test_lexicon_invariants(lex):
    assert all(k for k in lex.emoji_map) and all(c > 0 for c in lex.unigram_freq.values())
    assert len(lex.unigram_freq) >= 40_000
    assert "not" not in lex.stopwords


def test_missing_lexicon_names_path(tmp_path):
    with pytest.raises(LexiconError, match=re.escape(str(tmp_path / "slang.tsv"))):
        LexiconSet.load(DEFAULT_DIR, paths={"slang_map": tmp_path / "slang.tsv"})


def test_duplicate_and_bad_counts(tmp_path):
    for name in FILES.values():
        (tmp_path / name).write_bytes((DEFAULT_DIR / name).read_bytes())
    (tmp_path / "slang.tsv").write_text("u\tyou\nu\tyour\n", encoding="utf-8")
    with pytest.raises(LexiconError, match="duplicate"):
        LexiconSet.load(tmp_path)
    (tmp_path / "slang.tsv").write_text("u\tyou\n", encoding="utf-8")
    (tmp_path / "unigrams.tsv").write_text("the\t0\n", encoding="utf-8")
    with pytest.raises(LexiconError):
        LexiconSet.load(tmp_path)


def test_env_override(monkeypatch, tmp_path):
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    assert resource_dir() == tmp_path
    with pytest.raises(LexiconError, match=str(tmp_path)):
        LexiconSet.load()
