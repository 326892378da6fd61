"""Build marker-prediction datasets from segmented documents.

The recipe: every adjacent sentence pair whose second sentence starts
with a lexicon marker becomes a training example labelled with that
marker (the marker prefix is stripped from the second sentence).
Non-adjacent pairs separated by 2..100 sentences are added under the
synthetic NONE class.  First sentences are replaced by the literal
``[S_1]`` placeholder in a configurable fraction of examples, then the
dataset is deduplicated and per-class balanced.

Everything is deterministic: per-document RNG streams are derived from
(root seed, doc id), and the combined output is canonically sorted, so
parallel and serial extraction produce identical files.
"""

import hashlib
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .corpus import Document
from .errors import ConfigError, FileFormatError, UnknownLabelError
from .lexicon import NONE_CLASS, PLACEHOLDER, MarkerLexicon, match_marker

logger = logging.getLogger(__name__)


@dataclass
class MarkerPairExample:
    s1: str
    s2: str
    label: str
    source: tuple[str, int, int]  # (doc_id, s1_index, s2_index)

    def sort_key(self):
        return (self.label, self.source[0], self.source[1], self.source[2])


@dataclass(frozen=True)
class ExtractionConfig:
    gap_min: int = 2
    gap_max: int = 100
    mask_probability: float = 0.10
    per_class_cap: int = 20000
    rng_seed: int = 0

    def __post_init__(self):
        if not 2 <= self.gap_min <= self.gap_max:
            raise ConfigError(f"need 2 <= gap_min <= gap_max, got [{self.gap_min}, {self.gap_max}]")
        if not 0.0 <= self.mask_probability <= 1.0:
            raise ConfigError(f"mask_probability outside [0, 1]: {self.mask_probability}")
        if self.per_class_cap < 1:
            raise ConfigError(f"per_class_cap must be >= 1, got {self.per_class_cap}")


def derive_rng(seed: int, *scope: str) -> np.random.Generator:
    """Deterministic sub-stream for (seed, scope...), independent of the
    order in which other streams are drawn."""
    material = str(seed).encode() + b"".join(b"\x00" + s.encode("utf-8") for s in scope)
    digest = hashlib.sha256(material).digest()
    return np.random.default_rng(int.from_bytes(digest[:16], "little"))


def extract_adjacent_pairs(doc: Document, lexicon: MarkerLexicon) -> list[MarkerPairExample]:
    """One example per adjacent pair whose second sentence starts with a
    marker; the marker prefix is stripped from s2."""
    out = []
    sents = doc.sentences
    for i in range(len(sents) - 1):
        hit = match_marker(sents[i + 1], lexicon)
        if hit is not None:
            marker, stripped = hit
            out.append(MarkerPairExample(sents[i], stripped, marker, (doc.doc_id, i, i + 1)))
    return out


def sample_nonadjacent_pairs(
    doc: Document, count: int, cfg: ExtractionConfig, rng: np.random.Generator
) -> list[MarkerPairExample]:
    """Sample NONE-class pairs (i, j) with gap_min <= j - i <= gap_max.

    Each draw picks a gap uniformly over the feasible gaps, then a start
    position uniformly over the feasible positions for that gap.
    Duplicate (i, j) picks are rejected and redrawn; when ``count``
    meets or exceeds the number of distinct feasible pairs, all of them
    are returned instead.
    """
    n = len(doc.sentences)
    if n < cfg.gap_min + 1:
        raise ValueError(f"document {doc.doc_id!r} too short for gap_min={cfg.gap_min}")
    if count <= 0:
        return []
    gap_hi = min(cfg.gap_max, n - 1)
    total = sum(n - g for g in range(cfg.gap_min, gap_hi + 1))

    def make(i, j):
        return MarkerPairExample(doc.sentences[i], doc.sentences[j], NONE_CLASS, (doc.doc_id, i, j))

    if count >= total:
        return [make(i, i + g) for g in range(cfg.gap_min, gap_hi + 1) for i in range(n - g)]
    seen = set()
    out = []
    while len(out) < count:
        g = int(rng.integers(cfg.gap_min, gap_hi + 1))
        i = int(rng.integers(0, n - g))
        if (i, i + g) in seen:
            continue
        seen.add((i, i + g))
        out.append(make(i, i + g))
    return out


def apply_s1_masking(
    examples: list[MarkerPairExample], p: float, rng: np.random.Generator
) -> list[MarkerPairExample]:
    """Replace s1 by the literal placeholder with probability ``p``,
    independently per example.  Mutates and returns the same list."""
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"mask probability outside [0, 1]: {p}")
    for ex in examples:
        if rng.random() < p:
            ex.s1 = PLACEHOLDER
    return examples


def dedup_examples(examples: list[MarkerPairExample]) -> tuple[list[MarkerPairExample], int]:
    """Drop repeated (s1, s2) text pairs, keeping the occurrence that
    comes first in corpus order.  Returns (kept, removed_count)."""
    ordered = sorted(examples, key=lambda e: (e.source[0], e.source[1], e.source[2], e.label))
    kept = []
    seen = set()
    for ex in ordered:
        key = (ex.s1, ex.s2)
        if key in seen:
            continue
        seen.add(key)
        kept.append(ex)
    return kept, len(examples) - len(kept)


def balance_dataset(
    examples: list[MarkerPairExample], cap: int, rng: np.random.Generator
) -> list[MarkerPairExample]:
    """Uniformly subsample each class down to ``cap`` examples.

    Classes already at or under the cap pass through (with a warning);
    no class is ever dropped.  Output is sorted by (class, source).
    """
    if cap < 1:
        raise ConfigError(f"cap must be >= 1, got {cap}")
    groups: dict[str, list[MarkerPairExample]] = {}
    for ex in sorted(examples, key=MarkerPairExample.sort_key):
        groups.setdefault(ex.label, []).append(ex)
    under = [label for label, exs in groups.items() if len(exs) < cap]
    if under:
        shown = ", ".join(sorted(under)[:8])
        more = "" if len(under) <= 8 else f" (+{len(under) - 8} more)"
        logger.warning("%d classes below cap %d: %s%s", len(under), cap, shown, more)
    out = []
    for label in sorted(groups):
        exs = groups[label]
        if len(exs) > cap:
            idx = rng.choice(len(exs), size=cap, replace=False)
            exs = [exs[i] for i in sorted(idx)]
        out.extend(exs)
    return out


def split_by_document(examples, fractions=(0.9, 0.05, 0.05), seed: int = 0):
    """Split into (train, valid, test) by hashing doc ids, so that no
    document contributes to more than one split."""
    if len(fractions) != 3 or abs(sum(fractions) - 1.0) > 1e-9:
        raise ConfigError(f"split fractions must be 3 values summing to 1, got {fractions}")
    cut1, cut2 = fractions[0], fractions[0] + fractions[1]
    parts = ([], [], [])
    for ex in examples:
        digest = hashlib.sha256(f"{seed}:{ex.source[0]}".encode("utf-8")).digest()
        u = int.from_bytes(digest[:8], "little") / 2**64
        parts[0 if u < cut1 else 1 if u < cut2 else 2].append(ex)
    return parts


@dataclass
class ExtractionReport:
    documents: int = 0
    skipped_short_docs: int = 0
    raw_marker_pairs: int = 0
    raw_none_pairs: int = 0
    dedup_removed: int = 0
    masked: int = 0
    class_counts: dict[str, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.class_counts.values())

    @property
    def mask_rate(self) -> float:
        return self.masked / self.total if self.total else 0.0

    def render(self) -> str:
        lines = [
            f"documents\t{self.documents}",
            f"skipped_short_docs\t{self.skipped_short_docs}",
            f"raw_marker_pairs\t{self.raw_marker_pairs}",
            f"raw_none_pairs\t{self.raw_none_pairs}",
            f"dedup_removed\t{self.dedup_removed}",
            f"examples\t{self.total}",
            f"masked\t{self.masked}",
            f"mask_rate\t{self.mask_rate:.4f}",
            f"classes\t{len(self.class_counts)}",
            "",
            "class\tcount",
        ]
        lines += [f"{label}\t{n}" for label, n in sorted(self.class_counts.items())]
        return "\n".join(lines) + "\n"


def _extract_one(doc: Document, lexicon, cfg, include_none):
    adjacent = extract_adjacent_pairs(doc, lexicon)
    nones = []
    feasible = len(doc.sentences) >= cfg.gap_min + 1
    if include_none and feasible and adjacent:
        rng = derive_rng(cfg.rng_seed, "none", doc.doc_id)
        nones = sample_nonadjacent_pairs(doc, len(adjacent), cfg, rng)
    return adjacent, nones, feasible


def extract_corpus(
    docs: list[Document],
    lexicon: MarkerLexicon,
    cfg: ExtractionConfig,
    include_none: bool = True,
    workers: int = 1,
) -> tuple[list[MarkerPairExample], ExtractionReport]:
    """Run the full extraction over ``docs``: adjacent marker pairs,
    NONE sampling (as many per document as marker pairs found there),
    dedup, per-class balancing, then placeholder masking.

    ``workers`` only controls parallelism; results are identical for
    any value because per-document work is pure and the combined list
    is canonically sorted before every randomized stage.
    """
    report = ExtractionReport(documents=len(docs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_doc = list(pool.map(lambda d: _extract_one(d, lexicon, cfg, include_none), docs))
    else:
        per_doc = [_extract_one(d, lexicon, cfg, include_none) for d in docs]

    collected: list[MarkerPairExample] = []
    for adjacent, nones, feasible in per_doc:
        report.raw_marker_pairs += len(adjacent)
        report.raw_none_pairs += len(nones)
        if not feasible:
            report.skipped_short_docs += 1
        collected.extend(adjacent)
        collected.extend(nones)

    collected, report.dedup_removed = dedup_examples(collected)
    balanced = balance_dataset(collected, cfg.per_class_cap, derive_rng(cfg.rng_seed, "balance"))
    apply_s1_masking(balanced, cfg.mask_probability, derive_rng(cfg.rng_seed, "mask"))
    report.masked = sum(1 for ex in balanced if ex.s1 == PLACEHOLDER)
    for ex in balanced:
        report.class_counts[ex.label] = report.class_counts.get(ex.label, 0) + 1
    return balanced, report


DATASET_HEADER = "label\ts1\ts2\tsource"


def _sanitize(text: str) -> str:
    return text.replace("\t", " ").replace("\r", " ").replace("\n", " ")


def write_dataset(examples: list[MarkerPairExample], path) -> int:
    """Write the tab-separated dataset file; returns the example count."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(DATASET_HEADER + "\n")
        for ex in examples:
            doc_id, i, j = ex.source
            f.write(f"{_sanitize(ex.label)}\t{_sanitize(ex.s1)}\t{_sanitize(ex.s2)}"
                    f"\t{_sanitize(doc_id)}:{i}:{j}\n")
    return len(examples)


def read_dataset(path, lexicon: MarkerLexicon | None = None) -> list[MarkerPairExample]:
    """Read a dataset file back.  With a lexicon, labels are validated
    against lexicon ∪ {NONE}."""
    known = set(lexicon.class_names()) if lexicon is not None else None
    out = []
    with open(path, encoding="utf-8") as f:
        header = f.readline().rstrip("\n")
        if header != DATASET_HEADER:
            raise FileFormatError(path, 1, f"bad header {header!r}")
        for line_no, line in enumerate(f, 2):
            line = line.rstrip("\n")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 4:
                raise FileFormatError(path, line_no, f"expected 4 columns, found {len(cols)}")
            label, s1, s2, source = cols
            if known is not None and label not in known:
                raise UnknownLabelError(f"{path}:{line_no}: unknown label {label!r}")
            try:
                doc_id, i, j = source.rsplit(":", 2)
                src = (doc_id, int(i), int(j))
            except ValueError:
                raise FileFormatError(path, line_no, f"bad source field {source!r}") from None
            out.append(MarkerPairExample(s1, s2, label, src))
    return out
