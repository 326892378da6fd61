"""Hashed sparse features for sentence pairs.

Word unigrams/bigrams and character trigrams of each sentence live in
disjoint namespaces, plus a capped set of cross-sentence word pairs.
A first sentence equal to the ``[S_1]`` placeholder contributes exactly
one dedicated feature.  Buckets come from a keyed blake2b hash, so
vectors are stable across processes and platforms.
"""

import hashlib
import re
from dataclasses import dataclass

import numpy as np

from .lexicon import PLACEHOLDER

DEFAULT_DIM = 1 << 20
MAX_CROSS_TOKENS = 8  # caps s1 x s2 word-pair features at 64 per example

_TOKEN_RE = re.compile(r"[a-z0-9']+")


@dataclass
class FeatureVector:
    indices: np.ndarray  # strictly increasing int64 ids in [0, dim)
    values: np.ndarray   # float64 counts, same length
    dim: int

    def __post_init__(self):
        if len(self.indices) != len(self.values):
            raise ValueError("indices/values length mismatch")

    def nnz(self) -> int:
        return len(self.indices)


def feature_bucket(key: str, dim: int = DEFAULT_DIM) -> int:
    """Stable bucket id for one pre-hash feature key."""
    digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little") % dim


def _tokens(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def featurize(s1: str, s2: str, dim: int = DEFAULT_DIM) -> FeatureVector:
    if not s2:
        raise ValueError("s2 must be non-empty")
    counts: dict[int, float] = {}

    def add(key):
        b = feature_bucket(key, dim)
        counts[b] = counts.get(b, 0.0) + 1.0

    sides = (("1", s1), ("2", s2))
    for tag, text in sides:
        if tag == "1" and text == PLACEHOLDER:
            add("p:[S_1]")
            continue
        toks = _tokens(text)
        for t in toks:
            add(f"u{tag}:{t}")
        for a, b in zip(toks, toks[1:]):
            add(f"b{tag}:{a} {b}")
        low = text.lower()
        for k in range(len(low) - 2):
            add(f"c{tag}:{low[k:k + 3]}")
    if s1 != PLACEHOLDER:
        for a in _tokens(s1)[:MAX_CROSS_TOKENS]:
            for b in _tokens(s2)[:MAX_CROSS_TOKENS]:
                add(f"x:{a}|{b}")
    items = sorted(counts.items())
    return FeatureVector(
        np.fromiter((i for i, _ in items), dtype=np.int64, count=len(items)),
        np.fromiter((v for _, v in items), dtype=np.float64, count=len(items)),
        dim,
    )


def placeholder_bucket(dim: int = DEFAULT_DIM) -> int:
    """Bucket of the dedicated [S_1] feature (exposed for tests)."""
    return feature_bucket("p:[S_1]", dim)
