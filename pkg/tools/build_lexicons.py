"""Regenerate the generated lexicon files under src/hateseq/textprep/data/.

Only ``unigrams.tsv`` and ``emoji.tsv`` are generated; the slang, contraction,
stopword and lemma files are hand-maintained.

    pip download --no-deps wordsegment -d /tmp/ws
    python -m zipfile -e /tmp/ws/wordsegment-*.whl /tmp/ws
    pip install emoji
    python tools/build_lexicons.py /tmp/ws/wordsegment/unigrams.txt
"""

import re
import sys
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "hateseq" / "textprep" / "data"

N_UNIGRAMS = 50_000

# Sentiment words for the faces and gestures people actually use in tweets.
# Everything else falls back to a cleaned-up CLDR name.
CURATED = {
    "😀": "happy", "😃": "happy", "😄": "happy", "😁": "happy", "😆": "laugh",
    "😅": "nervous laugh", "🤣": "laugh", "😂": "laugh", "🙂": "happy",
    "🙃": "sarcastic", "😉": "wink", "😊": "happy", "😇": "innocent",
    "🥰": "love", "😍": "love", "🤩": "excited", "😘": "kiss", "😗": "kiss",
    "☺": "happy", "😚": "kiss", "😙": "kiss", "🥲": "sad happy", "😋": "yummy",
    "😛": "playful", "😜": "playful", "🤪": "crazy", "😝": "playful",
    "🤑": "money", "🤗": "hug", "🤭": "giggle", "🤫": "quiet", "🤔": "thinking",
    "🤐": "silent", "🤨": "suspicious", "😐": "neutral", "😑": "annoyed",
    "😶": "speechless", "😏": "smirk", "😒": "unamused", "🙄": "eye roll",
    "😬": "awkward", "🤥": "lie", "😌": "relieved", "😔": "sad", "😪": "sleepy",
    "🤤": "drool", "😴": "sleep", "😷": "sick", "🤒": "sick", "🤕": "hurt",
    "🤢": "disgust", "🤮": "disgust", "🤧": "sick", "🥵": "hot", "🥶": "cold",
    "🥴": "drunk", "😵": "dizzy", "🤯": "shocked", "🤠": "cowboy",
    "🥳": "party", "😎": "cool", "🤓": "nerd", "🧐": "curious", "😕": "confused",
    "😟": "worried", "🙁": "sad", "☹": "sad", "😮": "surprised", "😯": "surprised",
    "😲": "astonished", "😳": "embarrassed", "🥺": "pleading", "😦": "frown",
    "😧": "anguish", "😨": "fear", "😰": "anxious", "😥": "sad", "😢": "cry",
    "😭": "cry", "😱": "scream", "😖": "confounded", "😣": "persevere",
    "😞": "disappointed", "😓": "sweat", "😩": "weary", "😫": "tired",
    "🥱": "bored", "😤": "angry", "😡": "angry", "😠": "angry", "🤬": "cursing",
    "😈": "evil", "👿": "evil", "💀": "dead", "☠": "dead", "💩": "shit",
    "🤡": "clown", "👹": "monster", "👺": "goblin", "👻": "ghost", "👽": "alien",
    "🤖": "robot", "😺": "happy", "😸": "happy", "😹": "laugh", "😻": "love",
    "😼": "smirk", "😽": "kiss", "🙀": "weary", "😿": "cry", "😾": "angry",
    "🙈": "embarrassed", "🙉": "not listening", "🙊": "oops", "💋": "kiss",
    "💌": "love letter", "💘": "love", "💝": "love", "💖": "love", "💗": "love",
    "💓": "love", "💞": "love", "💕": "love", "💟": "love", "❣": "love",
    "💔": "heartbroken", "❤": "love", "🧡": "love", "💛": "love", "💚": "love",
    "💙": "love", "💜": "love", "🤎": "love", "🖤": "love", "🤍": "love",
    "💯": "hundred", "💢": "anger", "💥": "boom", "💦": "sweat", "💨": "dash",
    "💤": "sleep", "👋": "wave", "👌": "ok", "✌": "peace", "🤞": "luck",
    "🤟": "love", "🤘": "rock", "🤙": "call", "👈": "left", "👉": "right",
    "👆": "up", "🖕": "middle finger", "👇": "down", "☝": "up", "👍": "like",
    "👎": "dislike", "✊": "fist", "👊": "punch", "🤛": "fist", "🤜": "fist",
    "👏": "clap", "🙌": "celebrate", "👐": "open hands", "🤲": "palms",
    "🤝": "handshake", "🙏": "pray", "💪": "strong", "🔥": "fire", "✨": "sparkle",
    "🎉": "party", "🖐": "hand", "✋": "hand", "🤦": "facepalm", "🤷": "shrug",
    "🙅": "no", "🙆": "ok", "💅": "sassy", "👀": "eyes", "🍑": "peach",
    "🍆": "eggplant", "🐍": "snake", "🐷": "pig", "🐖": "pig", "🐒": "monkey",
    "🐵": "monkey", "🦍": "gorilla", "🐀": "rat", "🐶": "dog", "🐕": "dog",
}

# Emoticons are matched only when surrounded by whitespace.
EMOTICONS = {
    ":)": "happy", ":-)": "happy", ":]": "happy", "=)": "happy", ":D": "laugh",
    ":-D": "laugh", "xD": "laugh", "XD": "laugh", ";)": "wink", ";-)": "wink",
    ":(": "sad", ":-(": "sad", ":[": "sad", "=(": "sad", ":'(": "cry",
    ":’(": "cry", ":P": "playful", ":-P": "playful", ":p": "playful",
    ":O": "surprised", ":o": "surprised", ":-O": "surprised", ":/": "skeptical",
    ":-/": "skeptical", ":|": "neutral", ":-|": "neutral", ":*": "kiss",
    ":-*": "kiss", "<3": "love", "</3": "heartbroken", ">:(": "angry",
    ">:-(": "angry", "D:": "horrified", "-_-": "annoyed", "^_^": "happy",
    "o_O": "confused", "O_o": "confused", ":@": "angry",
}

FILLER = {
    "face", "with", "button", "symbol", "sign", "mark", "of", "the", "and",
    "a", "in", "on", "selector", "variation", "emoji", "small", "medium",
    "large", "light", "dark", "skin", "tone",
}


def build_unigrams(src):
    rows = []
    with open(src, encoding="utf-8") as fh:
        for line in fh:
            word, count = line.split("\t")
            if not re.fullmatch(r"[a-z]+", word):
                continue
            rows.append((word, int(count)))
            if len(rows) == N_UNIGRAMS:
                break
    with open(DATA / "unigrams.tsv", "w", encoding="utf-8") as out:
        for word, count in rows:
            out.write(f"{word}\t{count}\n")
    return len(rows)


def _name_to_words(name):
    words = [w for w in name.strip(":").lower().split("_") if w not in FILLER]
    words = [re.sub(r"[^a-z]", "", w) for w in words]
    return " ".join(w for w in words if w)


def build_emoji():
    import emoji

    table = {}
    for key, value in CURATED.items():
        table[key.replace("️", "")] = value
    for char, meta in emoji.EMOJI_DATA.items():
        if meta.get("status") != emoji.STATUS["fully_qualified"]:
            continue
        if any(0x1F3FB <= ord(c) <= 0x1F3FF for c in char):
            continue
        key = char.replace("️", "")
        if key in table:
            continue
        words = _name_to_words(meta["en"])
        if words:
            table[key] = words
    for key, value in EMOTICONS.items():
        table[key] = value
    with open(DATA / "emoji.tsv", "w", encoding="utf-8") as out:
        for key in sorted(table):
            out.write(f"{key}\t{table[key]}\n")
    return len(table)


if __name__ == "__main__":
    print("unigrams:", build_unigrams(sys.argv[1]))
    print("emoji:", build_emoji())
