"""SplitMix64 streams.

Every random decision in the package (split shuffles, bootstrap draws, LR
mini-batch order, forest feature subsets) goes through this generator so that
results depend only on the run seed and not on numpy's or CPython's generator
internals.

SplitMix64 is a counter-based generator: output ``i`` of a stream with state
``s`` is ``mix(s + (i + 1) * GOLDEN)``, which is what lets ``u64_array`` draw a
block of outputs in one vectorised step.
"""

import hashlib

import numpy as np

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV_2_53 = 1.0 / (1 << 53)


def mix64(z):
    z = (z ^ (z >> 30)) * _M1 & MASK
    z = (z ^ (z >> 27)) * _M2 & MASK
    return z ^ (z >> 31)


def key_of(value):
    """Map an int or string stream key to a 64-bit integer."""
    if isinstance(value, int):
        return value & MASK
    digest = hashlib.sha256(str(value).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def derive_seed(seed, *keys):
    """Seed of the sub-stream named by ``keys`` under the root ``seed``."""
    state = key_of(seed)
    for key in keys:
        state = mix64((state + GOLDEN * (key_of(key) + 1)) & MASK)
    return state


class Rng:
    def __init__(self, seed, *keys):
        self.state = derive_seed(seed, *keys) if keys else key_of(seed)

    def next_u64(self):
        self.state = (self.state + GOLDEN) & MASK
        return mix64(self.state)

    def u64_array(self, n):
        steps = np.arange(1, n + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self.state) + steps * np.uint64(GOLDEN)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
            z = z ^ (z >> np.uint64(31))
        self.state = (self.state + n * GOLDEN) & MASK
        return z

    def random(self, n):
        """``n`` uniform floats in [0, 1) from the top 53 bits of each draw."""
        return (self.u64_array(n) >> np.uint64(11)).astype(np.float64) * _INV_2_53

    def below(self, bounds):
        """One integer in ``[0, b)`` per entry of ``bounds``."""
        bounds = np.asarray(bounds, dtype=np.float64)
        out = np.floor(self.random(len(bounds)) * bounds).astype(np.int64)
        return np.minimum(out, bounds.astype(np.int64) - 1)

    def shuffle(self, items):
        """Fisher-Yates (Durstenfeld) shuffle; returns a new list."""
        items = list(items)
        n = len(items)
        if n < 2:
            return items
        js = self.below(np.arange(n, 1, -1)).tolist()
        for i, j in zip(range(n - 1, 0, -1), js):
            items[i], items[j] = items[j], items[i]
        return items

    def permutation(self, n):
        return np.asarray(self.shuffle(range(n)), dtype=np.int64)

    def sample(self, population, k):
        """``k`` distinct items via a partial Fisher-Yates pass."""
        items = list(population)
        n = len(items)
        k = min(k, n)
        js = self.below(np.arange(n, n - k, -1)).tolist()
        for i, j in enumerate(js):
            j += i
            items[i], items[j] = items[j], items[i]
        return items[:k]

    def bootstrap(self, n, size=None):
        return self.below(np.full(n if size is None else size, n))

    def weighted_bootstrap(self, weights, size=None):
        weights = np.asarray(weights, dtype=np.float64)
        cdf = np.cumsum(weights)
        u = self.random(len(weights) if size is None else size) * cdf[-1]
        idx = np.searchsorted(cdf, u, side="right")
        return np.minimum(idx, len(weights) - 1)
