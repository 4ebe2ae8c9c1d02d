"""CART-style decision tree with weighted Gini impurity over sparse features.

A node split is ``x[f] > threshold`` (right) versus ``<=`` (left). Implicit
zeros of the sparse matrix take part in the search as one block per feature,
so the tree sees exactly the values a dense matrix would hold.
"""

import numpy as np
import scipy.sparse as sp

from .base import Model

_EPS = 1e-12


def weighted_gini(pos, neg):
    """Total weight times Gini impurity: ``W - (p^2 + n^2) / W`` (0 for an empty side)."""
    pos = np.asarray(pos, dtype=np.float64)
    neg = np.asarray(neg, dtype=np.float64)
    total = pos + neg
    with np.errstate(invalid="ignore", divide="ignore"):
        out = total - (pos * pos + neg * neg) / total
    return np.where(total > 0, out, 0.0)


def best_split(sub, wpos, wneg, count, min_leaf, features=None):
    """Best ``(feature, threshold, impurity)`` for the rows of ``sub`` or None.

    ``sub`` holds the node's rows (CSR); ``wpos``/``wneg`` are the per-row class
    weights and ``count`` the per-row multiplicities used by ``min_leaf``.
    ``features`` restricts the search to the given columns. Ties go to the
    lowest (feature, value) position.
    """
    coo = sp.csr_matrix(sub).tocoo()
    return split_entries(coo.row, coo.col, coo.data, wpos, wneg, count, min_leaf, features)


def split_entries(rows, cols, vals, wpos, wneg, count, min_leaf, features=None):
    """``best_split`` over COO triplets (row numbers local to the node)."""
    keep = vals != 0
    rows, cols, vals = rows[keep], cols[keep], vals[keep]
    if features is not None:
        mask = np.isin(cols, features)
        rows, cols, vals = rows[mask], cols[mask], vals[mask]
    if len(cols) == 0:
        return None
    P, N, C = wpos.sum(), wneg.sum(), count.sum()

    present, inverse = np.unique(cols, return_inverse=True)
    nz_pos = np.bincount(inverse, weights=wpos[rows], minlength=len(present))
    nz_neg = np.bincount(inverse, weights=wneg[rows], minlength=len(present))
    nz_cnt = np.bincount(inverse, weights=count[rows], minlength=len(present))
    zero_cnt = C - nz_cnt
    has_zero = zero_cnt > 0.5

    e_col = np.concatenate([cols, present[has_zero]])
    e_val = np.concatenate([vals, np.zeros(has_zero.sum())])
    e_pos = np.concatenate([wpos[rows], np.maximum(P - nz_pos, 0.0)[has_zero]])
    e_neg = np.concatenate([wneg[rows], np.maximum(N - nz_neg, 0.0)[has_zero]])
    e_cnt = np.concatenate([count[rows], zero_cnt[has_zero]])

    order = np.lexsort((e_val, e_col))
    e_col, e_val = e_col[order], e_val[order]
    cpos, cneg, ccnt = (np.cumsum(a[order]) for a in (e_pos, e_neg, e_cnt))

    # cumulative sums restart at every feature
    first = np.empty(len(e_col), dtype=bool)
    first[0] = True
    np.not_equal(e_col[1:], e_col[:-1], out=first[1:])
    starts = np.flatnonzero(first)
    group = np.cumsum(first) - 1

    def within(c):
        before = np.concatenate(([0.0], c))[starts]
        return c - before[group]

    lpos, lneg, lcnt = within(cpos), within(cneg), within(ccnt)

    cand = np.flatnonzero((e_col[:-1] == e_col[1:]) & (e_val[:-1] != e_val[1:]))
    if len(cand) == 0:
        return None
    lp, ln, lc = lpos[cand], lneg[cand], lcnt[cand]
    ok = (lc >= min_leaf - 1e-9) & (C - lc >= min_leaf - 1e-9)
    if not ok.any():
        return None
    imp = weighted_gini(lp, ln) + weighted_gini(P - lp, N - ln)
    imp = np.where(ok, imp, np.inf)
    i = int(np.argmin(imp))
    parent = float(weighted_gini(P, N))
    if not imp[i] < parent - _EPS * max(P + N, 1.0):
        return None
    j = cand[i]
    return int(e_col[j]), float((e_val[j] + e_val[j + 1]) / 2.0), float(imp[i])


def _gather(indptr, indices, data, rows):
    """COO triplets of the given CSR rows, row numbers renumbered 0..len(rows)-1."""
    starts = indptr[rows]
    lens = indptr[rows + 1] - starts
    total = int(lens.sum())
    local = np.repeat(np.arange(len(rows)), lens)
    offsets = np.repeat(starts - (np.cumsum(lens) - lens), lens)
    pos = offsets + np.arange(total)
    return local, indices[pos], data[pos]


def grow_tree(X, y, ew, max_depth, min_leaf, count=None, feature_sampler=None):
    """Grow a tree in depth-first preorder; returns the node arrays.

    Rows with zero weight are ignored. ``feature_sampler(present_columns)``
    returns the candidate features for a node (random forests).
    """
    X = sp.csr_matrix(X)
    X.sum_duplicates()
    indptr, indices, data = X.indptr.astype(np.int64), X.indices.astype(np.int64), X.data
    count = np.ones(len(y)) if count is None else np.asarray(count, dtype=np.float64)
    live = np.flatnonzero(ew > 0)
    wpos = np.where(y == 1, ew, 0.0)
    wneg = np.where(y == 1, 0.0, ew)

    feature, threshold, left, right, value = [], [], [], [], []

    def new_node(rows):
        p, n = wpos[rows].sum(), wneg[rows].sum()
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(p / (p + n) if p + n > 0 else 0.0)
        return len(feature) - 1

    root = new_node(live)
    stack = [(root, live, 0)]
    while stack:
        node, rows, depth = stack.pop()
        p, n = wpos[rows].sum(), wneg[rows].sum()
        if depth >= max_depth or p == 0 or n == 0 or count[rows].sum() < 2 * min_leaf:
            continue
        local, cols, vals = _gather(indptr, indices, data, rows)
        nz = vals != 0
        local, cols, vals = local[nz], cols[nz], vals[nz]
        features = None
        if feature_sampler is not None:
            present = np.unique(cols)
            if len(present) == 0:
                continue
            features = np.asarray(feature_sampler(present), dtype=np.int64)
        found = split_entries(local, cols, vals, wpos[rows], wneg[rows], count[rows], min_leaf, features)
        if found is None:
            continue
        f, thr, _ = found
        go_right = np.full(len(rows), 0.0 > thr)
        hit = cols == f
        go_right[local[hit]] = vals[hit] > thr
        lrows, rrows = rows[~go_right], rows[go_right]
        feature[node], threshold[node] = f, thr
        left[node] = new_node(lrows)
        right[node] = new_node(rrows)
        # push right first so the left subtree is expanded first
        stack.append((right[node], rrows, depth + 1))
        stack.append((left[node], lrows, depth + 1))
    return {
        "feature": np.asarray(feature, dtype=np.int64),
        "threshold": np.asarray(threshold, dtype=np.float64),
        "left": np.asarray(left, dtype=np.int64),
        "right": np.asarray(right, dtype=np.int64),
        "value": np.asarray(value, dtype=np.float64),
    }


def tree_leaf_values(nodes, X):
    X = sp.csr_matrix(X)
    n = X.shape[0]
    at = np.zeros(n, dtype=np.int64)
    active = np.flatnonzero(nodes["feature"][at] >= 0)
    while len(active):
        f = nodes["feature"][at[active]]
        vals = np.asarray(X[active, f]).ravel()
        nxt = np.where(vals > nodes["threshold"][at[active]], nodes["right"][at[active]], nodes["left"][at[active]])
        at[active] = nxt
        active = active[nodes["feature"][nxt] >= 0]
    return nodes["value"][at]


class DecisionTree(Model):
    kind = "DT"

    def __init__(self, spec, dimension, nodes):
        super().__init__(spec, dimension)
        self.nodes = nodes

    @classmethod
    def fit(cls, spec, X, y, ew, count=None, feature_sampler=None):
        nodes = grow_tree(X, y, ew, spec.params["max_depth"], spec.params["min_leaf"], count, feature_sampler)
        return cls(spec, X.shape[1], nodes)

    @property
    def n_nodes(self):
        return len(self.nodes["feature"])

    def depth(self):
        depth = {0: 0}
        for i in range(self.n_nodes):
            if self.nodes["feature"][i] >= 0:
                depth[self.nodes["left"][i]] = depth[self.nodes["right"][i]] = depth[i] + 1
        return max(depth.values())

    def predict_proba(self, X):
        return tree_leaf_values(self.nodes, self._matrix(X))

    def parameters(self):
        return {k: v.tolist() for k, v in self.nodes.items()}

    @classmethod
    def from_parameters(cls, spec, dimension, params):
        nodes = {k: np.asarray(v, dtype=np.float64 if k in ("threshold", "value") else np.int64)
                 for k, v in params.items()}
        return cls(spec, dimension, nodes)
