"""Shared fixtures: the default lexicon and synthetic corpus builders."""

import numpy as np
import pytest

from discmark import Document, default_lexicon


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


def plant_marker_docs(markers, pairs_per_marker, pairs_per_doc=6, tag="plant"):
    """Deterministic corpus with each marker planted a known number of
    times: documents alternate a filler sentence and a marker-initial
    sentence, so the set of adjacent marker pairs is exactly the set of
    planted pairs.  Returns (docs, expected) where expected is a list of
    (doc_id, s1_index, s2_index, marker, stripped_s2) tuples.
    """
    docs = []
    expected = []
    uid = 0
    for m_no, marker in enumerate(markers):
        remaining = pairs_per_marker
        d_no = 0
        while remaining > 0:
            take = min(pairs_per_doc, remaining)
            remaining -= take
            doc_id = f"{tag}-{m_no:03d}-{d_no:03d}"
            sentences = []
            for k in range(take):
                s1 = f"Filler sentence {uid} for slot {k}."
                tail = f"the planted clause {uid} follows here."
                s2 = marker.capitalize() + " " + tail
                expected.append((doc_id, 2 * k, 2 * k + 1, marker, tail))
                sentences += [s1, s2]
                uid += 1
            sentences.append(f"Closing filler {uid} ends the document.")
            uid += 1
            docs.append(Document(doc_id, sentences))
            d_no += 1
    return docs, expected


def signal_corpus(markers, pairs_per_marker, seed=0, pairs_per_doc=12,
                  shared_words=400, sig_words=25):
    """Corpus whose sentence content is statistically tied to the marker
    of each pair, so a content-based classifier has real signal: tokens
    mix a shared pool with a per-marker signature pool."""
    rng = np.random.default_rng(seed)
    shared = [f"w{i:03d}" for i in range(shared_words)]
    sig = {
        m: [f"{''.join(ch for ch in m if ch.isalpha())}{i:02d}" for i in range(sig_words)]
        for m in markers
    }

    def sentence(marker, capital=True):
        n = int(rng.integers(4, 9))
        words = [
            sig[marker][int(rng.integers(sig_words))] if rng.random() < 0.4
            else shared[int(rng.integers(shared_words))]
            for _ in range(n)
        ]
        text = " ".join(words) + "."
        return text.capitalize() if capital else text

    docs = []
    uid = 0
    for m_no, marker in enumerate(markers):
        remaining = pairs_per_marker
        d_no = 0
        while remaining > 0:
            take = min(pairs_per_doc, remaining)
            remaining -= take
            sentences = []
            for _ in range(take):
                sentences.append(f"T{uid} " + sentence(marker, capital=False))
                sentences.append(marker.capitalize() + " " + sentence(marker, capital=False))
                uid += 1
            docs.append(Document(f"sig-{m_no:03d}-{d_no:03d}", sentences))
            d_no += 1
    return docs
