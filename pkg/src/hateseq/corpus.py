"""Dataset adapters, binary label unification, dedup and stratified splits."""

import csv
import enum
import io
import itertools
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from ._rng import Rng


class CorpusError(ValueError):
    pass


class Label(str, enum.Enum):
    INAPPROPRIATE = "inappropriate"
    NORMAL = "normal"

    @property
    def sign(self):
        return 1 if self is Label.INAPPROPRIATE else -1

    @classmethod
    def from_sign(cls, value):
        return cls.INAPPROPRIATE if value > 0 else cls.NORMAL


class Source(str, enum.Enum):
    WZ_LS = "WZ_LS"
    DT = "DT"
    FOUNTA = "FOUNTA"
    GENERIC = "GENERIC"


FORMATS = {
    "dt_csv": Source.DT,
    "founta_tsv": Source.FOUNTA,
    "wzls_csv": Source.WZ_LS,
    "generic_csv": Source.GENERIC,
}

NATIVE_LABELS = {
    "dt_csv": ("hate", "offensive", "neither"),
    "founta_tsv": ("normal", "abusive", "hate", "spam"),
    "wzls_csv": ("racism", "sexism", "both", "neither"),
    "generic_csv": ("inappropriate", "normal", "hate", "nonhate"),
}

# None means the row is dropped (FOUNTA spam).
BINARY_MAP = {
    "dt_csv": {"hate": Label.INAPPROPRIATE, "offensive": Label.INAPPROPRIATE,
               "neither": Label.NORMAL},
    "founta_tsv": {"abusive": Label.INAPPROPRIATE, "hate": Label.INAPPROPRIATE,
                   "normal": Label.NORMAL, "spam": None},
    "wzls_csv": {"racism": Label.INAPPROPRIATE, "sexism": Label.INAPPROPRIATE,
                 "both": Label.INAPPROPRIATE, "neither": Label.NORMAL},
    "generic_csv": {"inappropriate": Label.INAPPROPRIATE, "hate": Label.INAPPROPRIATE,
                    "normal": Label.NORMAL, "nonhate": Label.NORMAL},
}

DT_CLASSES = {"0": "hate", "1": "offensive", "2": "neither"}


@dataclass(frozen=True)
class RawRecord:
    id: str
    text: str
    label: str
    line: int


@dataclass(frozen=True)
class RawCorpus:
    format: str
    records: tuple

    def __len__(self):
        return len(self.records)

    @property
    def label_counts(self):
        return Counter(r.label for r in self.records)


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    label: Label
    source: Source = Source.GENERIC

    def with_text(self, text):
        return Document(self.id, text, self.label, self.source)


@dataclass(frozen=True)
class LabeledCorpus:
    documents: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "documents", tuple(self.documents))

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def class_counts(self):
        counts = Counter(d.label for d in self.documents)
        return {label: counts.get(label, 0) for label in Label}

    @property
    def texts(self):
        return [d.text for d in self.documents]

    @property
    def labels(self):
        return [d.label for d in self.documents]

    @property
    def signs(self):
        return [d.label.sign for d in self.documents]

    @property
    def ids(self):
        return [d.id for d in self.documents]


@dataclass(frozen=True)
class SplitCorpus:
    train: LabeledCorpus
    validation: LabeledCorpus
    test: LabeledCorpus
    seed: int
    ratios: tuple = field(default=(0.8, 0.1, 0.1))

    @property
    def parts(self):
        return (self.train, self.validation, self.test)


# --------------------------------------------------------------------------
# loading

def _read_text(path):
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"dataset not found: {path}")
    data = path.read_bytes().decode("utf-8-sig")
    return data.replace("\r\n", "\n").replace("\r", "\n")


def _check_label(fmt, label, line):
    if label not in NATIVE_LABELS[fmt]:
        allowed = ", ".join(NATIVE_LABELS[fmt])
        raise CorpusError(f"line {line}: unknown label {label!r} for {fmt} (expected one of: {allowed})")


def _check_text(text, line):
    if not text or not text.strip():
        raise CorpusError(f"line {line}: empty text")


def _csv_rows(data):
    reader = csv.reader(io.StringIO(data))
    try:
        header = next(reader)
    except StopIteration:
        return None, []
    rows = []
    try:
        for row in reader:
            # reader.line_num is the line the record ends on
            rows.append((reader.line_num, row))
    except csv.Error as exc:
        raise CorpusError(f"line {reader.line_num}: {exc}") from exc
    return [h.strip() for h in header], rows


def _load_id_text_label(data, fmt):
    header, rows = _csv_rows(data)
    if header is None:
        return []
    if header[:3] != ["id", "text", "label"]:
        raise CorpusError(f"line 1: expected header id,text,label, got {','.join(header)}")
    records, seen = [], set()
    for line, row in rows:
        if not row:
            continue
        if len(row) != 3:
            raise CorpusError(f"line {line}: expected 3 fields, got {len(row)}")
        rid, text, label = row[0].strip(), row[1], row[2].strip().lower()
        _check_text(text, line)
        _check_label(fmt, label, line)
        if rid in seen:
            raise CorpusError(f"line {line}: duplicate id {rid!r}")
        seen.add(rid)
        records.append(RawRecord(rid, text, label, line))
    return records


def _load_dt(data):
    header, rows = _csv_rows(data)
    if header is None:
        return []
    if "class" not in header or "tweet" not in header:
        raise CorpusError("line 1: dt_csv header needs 'class' and 'tweet' columns")
    ci, ti = header.index("class"), header.index("tweet")
    ii = 0 if header[0] in ("", "id") else None
    records = []
    for line, row in rows:
        if not row:
            continue
        if len(row) != len(header):
            raise CorpusError(f"line {line}: expected {len(header)} fields, got {len(row)}")
        code = row[ci].strip()
        if code not in DT_CLASSES:
            raise CorpusError(f"line {line}: unknown label {code!r} for dt_csv "
                              f"(expected one of: 0=hate, 1=offensive, 2=neither)")
        _check_text(row[ti], line)
        rid = row[ii].strip() if ii is not None else str(len(records))
        records.append(RawRecord(rid, row[ti], DT_CLASSES[code], line))
    return records


def _load_founta(data):
    records = []
    for line, raw in enumerate(data.split("\n"), start=1):
        if not raw.strip():
            continue
        fields = raw.split("\t")
        if line == 1 and len(fields) >= 2 and fields[1].strip().lower() == "label":
            continue
        if len(fields) not in (2, 3):
            raise CorpusError(f"line {line}: expected tweet<TAB>label[<TAB>count], got {len(fields)} fields")
        text, label = fields[0], fields[1].strip().lower()
        _check_text(text, line)
        _check_label("founta_tsv", label, line)
        if len(fields) == 3 and fields[2].strip() and not fields[2].strip().isdigit():
            raise CorpusError(f"line {line}: count field is not an integer: {fields[2]!r}")
        records.append(RawRecord(str(line), text, label, line))
    return records


_LOADERS = {
    "dt_csv": _load_dt,
    "founta_tsv": _load_founta,
    "wzls_csv": lambda data: _load_id_text_label(data, "wzls_csv"),
    "generic_csv": lambda data: _load_id_text_label(data, "generic_csv"),
}


def load_dataset(path, format):
    """Read one dataset file, keeping its native labels and row order."""
    if format not in _LOADERS:
        raise CorpusError(f"unknown format {format!r} (expected one of: {', '.join(_LOADERS)})")
    return RawCorpus(format, tuple(_LOADERS[format](_read_text(path))))


def binarize(raw, format=None):
    """Collapse native labels to inappropriate/normal; FOUNTA spam rows are dropped."""
    fmt = format or raw.format
    mapping = BINARY_MAP[fmt]
    source = FORMATS[fmt]
    prefix = "" if source is Source.GENERIC else source.value.lower() + ":"
    docs = []
    for rec in raw.records:
        if rec.label not in mapping:
            raise CorpusError(f"line {rec.line}: label {rec.label!r} has no binary mapping for {fmt}")
        label = mapping[rec.label]
        if label is None:
            continue
        docs.append(Document(prefix + rec.id, rec.text, label, source))
    return LabeledCorpus(docs)


def dedup_key(text):
    return " ".join(text.casefold().split())


def combine(corpora):
    """Concatenate corpora and drop repeated texts; the first occurrence wins."""
    seen, docs = set(), []
    for corpus in corpora:
        for doc in corpus:
            key = dedup_key(doc.text)
            if key in seen:
                continue
            seen.add(key)
            docs.append(doc)
    return LabeledCorpus(docs)


def write_generic_csv(corpus, path):
    path = Path(path)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "text", "label"])
    for doc in corpus:
        writer.writerow([doc.id, doc.text, doc.label.value])
    path.write_text(buf.getvalue(), encoding="utf-8")


def read_generic_csv(path):
    """Load a generic CSV straight into a LabeledCorpus (empty texts allowed)."""
    header, rows = _csv_rows(_read_text(path))
    if header is None:
        return LabeledCorpus()
    docs = []
    for line, row in rows:
        if not row:
            continue
        if len(row) != 3:
            raise CorpusError(f"line {line}: expected 3 fields, got {len(row)}")
        label = row[2].strip().lower()
        _check_label("generic_csv", label, line)
        docs.append(Document(row[0], row[1], BINARY_MAP["generic_csv"][label]))
    return LabeledCorpus(docs)


# --------------------------------------------------------------------------
# splitting

def _largest_remainder(n, ratios):
    exact = [n * r for r in ratios]
    sizes = [int(x) for x in exact]
    order = sorted(range(len(ratios)), key=lambda p: (-(exact[p] - sizes[p]), p))
    for p in order[: n - sum(sizes)]:
        sizes[p] += 1
    return sizes


def _allocate(class_sizes, ratios):
    """Per-class part sizes whose column sums hit the global largest-remainder targets.

    Every class gets the floor or ceiling of its share in each part. Among the
    placements of the leftover units that hit the targets exactly, the one with
    the largest total fractional share wins (first found on ties). If none
    exists a greedy placement is used.
    """
    n_parts = len(ratios)
    targets = _largest_remainder(sum(class_sizes), ratios)
    base = [[int(n * r) for r in ratios] for n in class_sizes]
    need = [targets[p] - sum(row[p] for row in base) for p in range(n_parts)]
    rems = [n - sum(row) for n, row in zip(class_sizes, base)]
    frac = [[n * r - int(n * r) for r in ratios] for n in class_sizes]

    choices = [list(itertools.combinations(range(n_parts), k)) for k in rems]
    best, best_score = None, -1.0
    for pick in itertools.product(*choices):
        counts = [0] * n_parts
        for parts in pick:
            for p in parts:
                counts[p] += 1
        if counts != need:
            continue
        score = sum(frac[c][p] for c, parts in enumerate(pick) for p in parts)
        if score > best_score + 1e-12:
            best, best_score = pick, score
    if best is not None:
        for c, parts in enumerate(best):
            for p in parts:
                base[c][p] += 1
        return base

    for c in sorted(range(len(class_sizes)), key=lambda c: (-rems[c], c)):
        for _ in range(rems[c]):
            open_parts = [p for p in range(n_parts) if need[p] > 0] or list(range(n_parts))
            p = min(open_parts, key=lambda p: (-frac[c][p], p))
            base[c][p] += 1
            need[p] -= 1
    return base


def split(corpus, ratios=(0.8, 0.1, 0.1), seed=0):
    """Stratified, seeded train/validation/test split.

    Each class is shuffled with its own SplitMix64 stream and cut into
    contiguous blocks; inside each part documents keep their corpus order.
    """
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3:
        raise CorpusError(f"expected three ratios, got {len(ratios)}")
    if any(r <= 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise CorpusError(f"ratios must be positive and sum to 1, got {ratios}")
    by_class = {label: [] for label in Label}
    for pos, doc in enumerate(corpus):
        by_class[doc.label].append(pos)
    present = [label for label in Label if by_class[label]]
    for label in present:
        if len(by_class[label]) < len(ratios):
            raise CorpusError(f"class {label.value} has {len(by_class[label])} documents, "
                              f"fewer than {len(ratios)} partitions")
    sizes = _allocate([len(by_class[label]) for label in present], ratios)
    parts = [[] for _ in ratios]
    for label, row in zip(present, sizes):
        order = Rng(seed, "split", label.value).shuffle(by_class[label])
        start = 0
        for p, size in enumerate(row):
            parts[p].extend(order[start:start + size])
            start += size
    docs = corpus.documents
    built = [LabeledCorpus(docs[i] for i in sorted(part)) for part in parts]
    return SplitCorpus(*built, seed=seed, ratios=ratios)

