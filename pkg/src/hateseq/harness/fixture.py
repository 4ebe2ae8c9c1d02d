"""Deterministic synthetic tweet corpus used for offline runs and CI.

The generator plants the phenomena the normalisation stages target: URLs,
mentions, hashtags (camel case and run-together), slang, elongations,
emoji, digits and contractions. Targets are made-up groups, not real ones.

A slice of the normal class consists of negated statements ("i don't hate
goblins", "trolls aren't trash"). Whether the negation survives depends on
the stage order: expanding contractions before hashtag segmentation keeps
"not", while segmenting first splits "don't" into "don t", both of which
are stopwords. That gives the corpus a measurable order effect.

Regenerate the bundled copy with ``python -m hateseq.harness.fixture``.
"""

import argparse
from pathlib import Path

from .._rng import Rng
from ..corpus import Document, Label, LabeledCorpus, write_generic_csv

FIXTURE_PATH = Path(__file__).parent / "data" / "fixture.csv"
DEFAULT_SIZE = 2000
DEFAULT_SEED = 20240607

GROUPS = ["goblins", "trolls", "martians", "zorblings", "gnomes", "orcs", "snarks", "wookies"]
GROUP_TAGS = ["Goblins", "Trolls", "Martians", "Zorblings", "Gnomes", "Orcs", "Snarks", "Wookies"]
INSULTS = ["trash", "scum", "stupid", "disgusting", "worthless", "vermin", "idiots", "pathetic", "filthy"]
HATE_VERBS = ["hate", "despise", "loathe"]
ELONGATED = {"stupid": "stuuupid", "trash": "trassshhh", "hate": "haaate", "so": "sooooo",
             "good": "gooood", "love": "loooove", "fun": "funnnn", "nice": "niiice"}
HATE_EMOJI = ["😡", "🤬", "🤮", "👎", ":("]
HAPPY_EMOJI = ["😊", "😂", "❤️", "🎉", ":)", ":D", "🙏"]
TOPICS = ["the game", "this pizza", "my new phone", "the concert", "the weekend", "my dog",
          "coffee", "the beach", "this song", "the movie", "summer", "my garden"]
PRAISE = ["good", "nice", "fun", "great", "amazing", "awesome", "lovely"]
PLACES = ["the park", "the market", "work", "school", "the gym", "the library"]
FILLER = ["lol", "smh", "tbh", "ngl", "fr", "omg", "imo", "idk", "2day", "2nite", "b4", "u know",
          "honestly", "again", "today", "right now", "Lol82211", "!!!", "...", "??"]
HASHTAGS = ["#HappyHumpDay", "#usedbytrendypeople", "#mondaymotivation", "#goodvibes", "#TBT",
            "#weekendfun", "#lovethis", "#NoFilter"]


def _pick(rng, items):
    return items[int(rng.below([len(items)])[0])]


def _chance(rng, p):
    return float(rng.random(1)[0]) < p


def _maybe_elongate(rng, text, p=0.3):
    words = text.split()
    for i, w in enumerate(words):
        if w in ELONGATED and _chance(rng, p):
            words[i] = ELONGATED[w]
    return " ".join(words)


def _decorate(rng, text, emoji):
    if _chance(rng, 0.35):
        text = f"{text} {_pick(rng, FILLER)}"
    if _chance(rng, 0.3):
        text = f"{text} {_pick(rng, emoji)}"
    if _chance(rng, 0.15):
        text = f"@user{int(rng.below([900])[0]) + 100} {text}"
    if _chance(rng, 0.1):
        text = f"RT {text}"
    if _chance(rng, 0.12):
        text = f"{text} https://t.co/{int(rng.below([10 ** 6])[0]):06d}"
    if _chance(rng, 0.1):
        text = text + " &amp; stuff"
    return text


def _hate(rng):
    g = _pick(rng, GROUPS)
    tag = GROUP_TAGS[GROUPS.index(g)]
    ins = _pick(rng, INSULTS)
    templates = [
        lambda: f"i {_pick(rng, HATE_VERBS)} {g}",
        lambda: f"{g} are {ins}",
        lambda: f"{g} r so {ins}",
        lambda: f"all {g} are {ins} and i {_pick(rng, HATE_VERBS)} them",
        lambda: f"get rid of the {g} they are {ins}",
        lambda: f"#{tag}Are{ins.capitalize()}",
        lambda: f"#{g}are{ins}",
        lambda: f"ugh {g} again so {ins}",
        lambda: f"i really {_pick(rng, HATE_VERBS)} those {g}",
        lambda: f"{g} should go away they r {ins}",
    ]
    text = _pick(rng, templates)()
    return _decorate(rng, _maybe_elongate(rng, text), HATE_EMOJI)


def _negated(rng):
    g = _pick(rng, GROUPS)
    ins = _pick(rng, INSULTS)
    verb = _pick(rng, HATE_VERBS)
    templates = [
        lambda: f"i don't {verb} {g}",
        lambda: f"{g} aren't {ins}",
        lambda: f"i didn't say {g} are {ins}",
        lambda: f"we don't {verb} {g} at all",
        lambda: f"{g} aren't {ins} they are cool",
        lambda: f"i won't call {g} {ins}",
        lambda: f"i never said i {verb} {g} and i don't {verb} them",
        lambda: f"people who think {g} are {ins} don't know {g}",
        lambda: f"my friends don't {verb} {g}",
        lambda: f"i can't {verb} {g} they're nice",
    ]
    text = _pick(rng, templates)()
    return _decorate(rng, _maybe_elongate(rng, text, 0.2), HAPPY_EMOJI)


def _benign(rng):
    topic = _pick(rng, TOPICS)
    good = _pick(rng, PRAISE)
    g = _pick(rng, GROUPS)
    templates = [
        lambda: f"{topic} was so {good}",
        lambda: f"loving {topic} right now",
        lambda: f"can't wait for {topic} {_pick(rng, HASHTAGS)}",
        lambda: f"met some {g} at {_pick(rng, PLACES)} they were {good}",
        lambda: f"gonna hit {_pick(rng, PLACES)} b4 {topic}",
        lambda: f"i love {topic} it's {good}",
        lambda: f"{_pick(rng, HASHTAGS)} {topic} is {good}",
        lambda: f"watching a documentary about {g} so {good}",
        lambda: f"we're going to {_pick(rng, PLACES)} with the {g} from next door",
        lambda: f"thx for {topic} u r the best",
        lambda: f"{topic} is trash lol jk it's {good}",
    ]
    text = _pick(rng, templates)()
    return _decorate(rng, _maybe_elongate(rng, text), HAPPY_EMOJI)


def generate(n=DEFAULT_SIZE, seed=DEFAULT_SEED, hate_share=0.4, negated_share=0.3, noise=0.03):
    """``n`` labelled tweets; ``negated_share`` is the fraction of normal tweets that negate hate."""
    rng = Rng(seed, "fixture")
    docs = []
    for i in range(n):
        if _chance(rng, hate_share):
            text, label = _hate(rng), Label.INAPPROPRIATE
        elif _chance(rng, negated_share):
            text, label = _negated(rng), Label.NORMAL
        else:
            text, label = _benign(rng), Label.NORMAL
        if _chance(rng, noise):
            label = Label.NORMAL if label is Label.INAPPROPRIATE else Label.INAPPROPRIATE
        docs.append(Document(f"fx{i:05d}", text, label))
    return LabeledCorpus(docs)


def main(argv=None):
    ap = argparse.ArgumentParser(description="Write the synthetic fixture corpus as a generic CSV.")
    ap.add_argument("--out", type=Path, default=FIXTURE_PATH)
    ap.add_argument("-n", type=int, default=DEFAULT_SIZE)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = ap.parse_args(argv)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_generic_csv(generate(args.n, args.seed), args.out)
    print(f"wrote {args.n} documents to {args.out}")


if __name__ == "__main__":
    main()
