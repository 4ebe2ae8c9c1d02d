"""Bag-of-words vocabulary, count vectors and TF-IDF.

IDF is the smoothed form ``ln((1 + n) / (1 + df)) + 1`` and TF-IDF vectors are
L2-normalised, so terms present in every document keep a weight of one
instead of vanishing.
"""

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp


class FeatureError(ValueError):
    pass


def tokenize(text):
    return text.split()


@dataclass(frozen=True)
class SparseVector:
    indices: tuple
    values: tuple
    dimension: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        vals = tuple(float(v) for v in self.values)
        if len(idx) != len(vals):
            raise FeatureError("indices and values differ in length")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise FeatureError("indices must be strictly increasing")
        if idx and (idx[0] < 0 or idx[-1] >= self.dimension):
            raise FeatureError("index out of range")
        if any(v == 0.0 for v in vals):
            raise FeatureError("explicit zeros are not stored")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", vals)

    @property
    def entries(self):
        return list(zip(self.indices, self.values))

    def norm(self):
        return math.sqrt(sum(v * v for v in self.values))

    def to_dense(self):
        out = np.zeros(self.dimension)
        out[list(self.indices)] = self.values
        return out

    @classmethod
    def from_row(cls, row):
        row = sp.csr_matrix(row)
        row.sort_indices()
        keep = row.data != 0
        return cls(tuple(row.indices[keep]), tuple(row.data[keep]), row.shape[1])


def to_matrix(vectors, dimension=None):
    """Stack SparseVectors into a CSR matrix (matrices pass through)."""
    if sp.issparse(vectors):
        return sp.csr_matrix(vectors, dtype=np.float64)
    if isinstance(vectors, SparseVector):
        vectors = [vectors]
    vectors = list(vectors)
    if dimension is None:
        if not vectors:
            raise FeatureError("cannot infer the dimension of an empty list")
        dimension = vectors[0].dimension
    indptr = [0]
    indices, data = [], []
    for v in vectors:
        if v.dimension != dimension:
            raise FeatureError(f"dimension mismatch: {v.dimension} != {dimension}")
        indices.extend(v.indices)
        data.extend(v.values)
        indptr.append(len(indices))
    return sp.csr_matrix((np.asarray(data, dtype=np.float64), np.asarray(indices, dtype=np.int64),
                          np.asarray(indptr, dtype=np.int64)), shape=(len(vectors), dimension))


def to_vectors(matrix):
    matrix = sp.csr_matrix(matrix)
    return [SparseVector.from_row(matrix[i]) for i in range(matrix.shape[0])]


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple
    document_frequency: tuple
    n_documents: int

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "document_frequency", tuple(int(d) for d in self.document_frequency))
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.terms)})
        df = np.asarray(self.document_frequency, dtype=np.float64)
        object.__setattr__(self, "_idf", np.log((1.0 + self.n_documents) / (1.0 + df)) + 1.0)

    def __len__(self):
        return len(self.terms)

    @property
    def term_to_index(self):
        return dict(self._index)

    def index(self, term):
        return self._index.get(term)

    def idf(self, term=None):
        if term is None:
            return self._idf.copy()
        return float(self._idf[self._index[term]])

    def save(self, path):
        lines = [f"n_documents\t{self.n_documents}"]
        lines += [f"{t}\t{i}\t{d}" for i, (t, d) in enumerate(zip(self.terms, self.document_frequency))]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().rstrip("\n").split("\t")
            if len(header) != 2 or header[0] != "n_documents":
                raise FeatureError(f"{path}: missing n_documents header")
            rows = [line.rstrip("\n").split("\t") for line in fh if line.strip()]
        rows.sort(key=lambda r: int(r[1]))
        if [int(r[1]) for r in rows] != list(range(len(rows))):
            raise FeatureError(f"{path}: indices are not 0..V-1")
        return cls(tuple(r[0] for r in rows), tuple(int(r[2]) for r in rows), int(header[1]))


def _documents(corpus):
    texts = corpus.texts if hasattr(corpus, "texts") else corpus
    return [tokenize(t) if isinstance(t, str) else list(t) for t in texts]


def fit_vocabulary(corpus, min_df=2, max_features=None):
    """Terms with document frequency >= ``min_df``; optionally only the ``max_features`` most frequent.

    "Most frequent" is by document frequency, ties broken alphabetically.
    Indices follow alphabetical order of the kept terms.
    """
    if min_df < 1:
        raise FeatureError("min_df must be >= 1")
    docs = _documents(corpus)
    df = Counter()
    for tokens in docs:
        df.update(set(tokens))
    kept = [(t, c) for t, c in df.items() if c >= min_df]
    if max_features is not None and len(kept) > max_features:
        kept = sorted(kept, key=lambda tc: (-tc[1], tc[0]))[:max_features]
    if not kept:
        raise FeatureError(f"empty vocabulary (min_df={min_df}, {len(docs)} documents)")
    kept.sort()
    return Vocabulary(tuple(t for t, _ in kept), tuple(c for _, c in kept), len(docs))


def count_vectorize(tokens, vocab):
    if isinstance(tokens, str):
        tokens = tokenize(tokens)
    counts = Counter(i for i in map(vocab.index, tokens) if i is not None)
    idx = sorted(counts)
    return SparseVector(tuple(idx), tuple(float(counts[i]) for i in idx), len(vocab))


def tfidf_transform(vector, vocab):
    idf = vocab.idf()
    values = [v * idf[i] for i, v in zip(vector.indices, vector.values)]
    norm = math.sqrt(sum(v * v for v in values))
    if norm > 0:
        values = [v / norm for v in values]
    return SparseVector(vector.indices, tuple(values), vector.dimension)


def count_matrix(corpus, vocab):
    """Count vectors for a whole corpus as one CSR matrix."""
    docs = _documents(corpus)
    rows, cols = [], []
    for r, tokens in enumerate(docs):
        for t in tokens:
            i = vocab.index(t)
            if i is not None:
                rows.append(r)
                cols.append(i)
    m = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(docs), len(vocab)))
    m.sum_duplicates()
    m.sort_indices()
    return m


def tfidf_matrix(counts, vocab):
    m = sp.csr_matrix(counts, dtype=np.float64) @ sp.diags(vocab.idf())
    m = sp.csr_matrix(m)
    norms = np.sqrt(np.asarray(m.multiply(m).sum(axis=1)).ravel())
    norms[norms == 0] = 1.0
    m = sp.csr_matrix(sp.diags(1.0 / norms) @ m)
    m.sort_indices()
    return m


class Vectorizer:
    """Fit-on-train, transform-anything wrapper around the functions above."""

    def __init__(self, kind="tfidf", min_df=2, max_features=50_000):
        if kind not in ("count", "tfidf"):
            raise FeatureError(f"unknown vectorizer {kind!r} (expected count or tfidf)")
        self.kind = kind
        self.min_df = min_df
        self.max_features = max_features
        self.vocabulary = None

    def fit(self, corpus):
        self.vocabulary = fit_vocabulary(corpus, self.min_df, self.max_features)
        return self

    def transform(self, corpus):
        if self.vocabulary is None:
            raise FeatureError("vectorizer is not fitted")
        counts = count_matrix(corpus, self.vocabulary)
        return counts if self.kind == "count" else tfidf_matrix(counts, self.vocabulary)

    def fit_transform(self, corpus):
        return self.fit(corpus).transform(corpus)
