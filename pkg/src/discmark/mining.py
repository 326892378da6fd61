"""Marker-to-category association rules.

Gold categories are joined with predicted markers per example, then
every surviving (marker, category) pair becomes one rule carrying its
support count, confidence P(category | marker) and the category's prior
P(category).  Examples whose prediction is the NONE class are dropped,
as are markers predicted fewer than ``min_marker_count`` times within a
dataset.  Percentages stay at full precision internally; rendering
rounds to one decimal, half away from zero.
"""

import math
from collections import Counter
from dataclasses import dataclass

from .errors import DiscmarkError, FileFormatError
from .lexicon import NONE_CLASS


@dataclass(frozen=True)
class PredictionJoin:
    dataset_id: str
    example_id: str
    y: str  # gold category
    m: str  # predicted marker, possibly NONE


@dataclass(frozen=True)
class AssociationRule:
    marker: str
    category: str        # qualified as "<dataset_id>.<label>"
    dataset_id: str
    support: int         # examples with this (marker, category)
    marker_total: int    # confidence denominator (antecedent count)
    confidence: float    # percentage, full precision
    prior: float         # percentage, full precision


@dataclass(frozen=True)
class MiningConfig:
    min_marker_count: int = 20
    drop_none: bool = True
    direction: str = "m_to_y"  # or "y_to_m" for P(marker | category)

    def __post_init__(self):
        if self.min_marker_count < 1:
            raise DiscmarkError(f"min_marker_count must be >= 1, got {self.min_marker_count}")
        if self.direction not in ("m_to_y", "y_to_m"):
            raise DiscmarkError(f"unknown rule direction {self.direction!r}")


def join_predictions(labeled, preds) -> list[PredictionJoin]:
    """Inner-join predictions with their labeled examples on
    (dataset_id, example_id); one join per prediction."""
    gold = {(ex.dataset_id, ex.example_id): ex.label for ex in labeled}
    seen = set()
    missing = []
    joins = []
    for p in preds:
        key = (p.dataset_id, p.example_id)
        if key in seen:
            raise DiscmarkError(f"duplicate prediction for {key[0]}/{key[1]}")
        seen.add(key)
        if key not in gold:
            missing.append(key)
            continue
        joins.append(PredictionJoin(p.dataset_id, p.example_id, gold[key], p.predicted_marker))
    if missing:
        shown = ", ".join(f"{d}/{e}" for d, e in missing[:10])
        more = "" if len(missing) <= 10 else f" (+{len(missing) - 10} more)"
        raise DiscmarkError(f"{len(missing)} predictions without matching examples: {shown}{more}")
    return joins


def compute_priors(labeled) -> dict[str, dict[str, float]]:
    """Per-dataset category base rates, as percentages over all labeled
    examples of that dataset (independent of any prediction)."""
    counts: dict[str, Counter] = {}
    for ex in labeled:
        counts.setdefault(ex.dataset_id, Counter())[ex.label] += 1
    priors = {}
    for dataset, per in counts.items():
        total = sum(per.values())
        priors[dataset] = {label: 100.0 * n / total for label, n in per.items()}
    return priors


def mine_rules(joins, priors, cfg: MiningConfig = MiningConfig()) -> list[AssociationRule]:
    """Mine ranked association rules from (category, marker) joins.

    Output is sorted by (dataset, confidence desc, support desc) with a
    name tiebreak, and is invariant under permutation of the input.
    """
    by_dataset: dict[str, list[PredictionJoin]] = {}
    for j in joins:
        by_dataset.setdefault(j.dataset_id, []).append(j)

    rules = []
    for dataset in sorted(by_dataset):
        batch = by_dataset[dataset]
        if cfg.drop_none:
            batch = [j for j in batch if j.m != NONE_CLASS]
        marker_totals = Counter(j.m for j in batch)
        kept_markers = {m for m, n in marker_totals.items() if n >= cfg.min_marker_count}
        batch = [j for j in batch if j.m in kept_markers]
        pair_counts = Counter((j.m, j.y) for j in batch)
        if cfg.direction == "m_to_y":
            denom = marker_totals
            anteced = lambda m, y: m
            prior_of = lambda m, y: priors[dataset][y]
        else:
            category_totals = Counter(j.y for j in batch)
            total = len(batch)
            denom = category_totals
            anteced = lambda m, y: y
            prior_of = lambda m, y: 100.0 * marker_totals[m] / total
        for (m, y), support in pair_counts.items():
            d = denom[anteced(m, y)]
            rules.append(AssociationRule(
                marker=m,
                category=f"{dataset}.{y}",
                dataset_id=dataset,
                support=support,
                marker_total=d,
                confidence=100.0 * support / d,
                prior=prior_of(m, y),
            ))
    rules.sort(key=lambda r: (r.dataset_id, -r.confidence, -r.support, r.marker, r.category))
    return rules


def round_half_away(x: float, ndigits: int = 1) -> float:
    scale = 10 ** ndigits
    return math.copysign(math.floor(abs(x) * scale + 0.5), x) / scale


def fmt_pct(x: float) -> str:
    return f"{round_half_away(x, 1):.1f}"


RULES_TSV_HEADER = "marker\tcategory\tsupport\tconfidence\tprior\tmarker_total"


def render_table(rules, fmt: str = "text") -> str:
    """Render rules as ``text`` (aligned, publication-style columns),
    ``markdown``, or machine-precision ``tsv``."""
    if fmt == "tsv":
        lines = [RULES_TSV_HEADER]
        lines += [
            f"{r.marker}\t{r.category}\t{r.support}\t{r.confidence!r}\t{r.prior!r}\t{r.marker_total}"
            for r in rules
        ]
        return "\n".join(lines) + "\n"
    rows = [
        (r.marker, r.category, str(r.support), f"{fmt_pct(r.confidence)} ({fmt_pct(r.prior)})")
        for r in rules
    ]
    header = ("marker", "category", "support", "confidence (prior)")
    if fmt == "markdown":
        lines = ["| " + " | ".join(header) + " |",
                 "|" + "|".join("---" for _ in header) + "|"]
        lines += ["| " + " | ".join(row) + " |" for row in rows]
        return "\n".join(lines) + "\n"
    if fmt != "text":
        raise DiscmarkError(f"unknown render format {fmt!r}")
    widths = [max(len(header[c]), *(len(r[c]) for r in rows)) if rows else len(header[c])
              for c in range(4)]
    lines = ["  ".join(h.ljust(widths[c]) for c, h in enumerate(header)).rstrip()]
    for row in rows:
        lines.append("  ".join(
            row[c].ljust(widths[c]) if c < 2 else row[c].rjust(widths[c])
            for c in range(4)
        ).rstrip())
    return "\n".join(lines) + "\n"


def parse_rules_tsv(text: str) -> list[AssociationRule]:
    """Inverse of the tsv rendering."""
    lines = text.splitlines()
    if not lines or lines[0] != RULES_TSV_HEADER:
        raise FileFormatError("<rules-tsv>", 1, "bad rules header")
    rules = []
    for line_no, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 6:
            raise FileFormatError("<rules-tsv>", line_no, f"expected 6 columns, found {len(cols)}")
        marker, category, support, confidence, prior, marker_total = cols
        dataset_id = category.split(".", 1)[0]
        rules.append(AssociationRule(marker, category, dataset_id, int(support),
                                     int(marker_total), float(confidence), float(prior)))
    return rules
