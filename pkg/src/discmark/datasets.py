"""Adapters that load classification datasets into sentence-pair form.

Three task shapes are supported:

* ``single_sentence`` - (sentence, label); the pair is completed with
  the ``[S_1]`` placeholder so the marker model can run on it;
* ``sentence_pair``   - (s1, s2, label) used as-is;
* ``scored_pair``     - (s1, s2, rating); ratings are binned to
  dissimilar / similar by keeping the bottom and top thirds.
"""

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, DiscmarkError, FileFormatError, UnknownLabelError
from .lexicon import PLACEHOLDER

logger = logging.getLogger(__name__)

TASK_SHAPES = ("single_sentence", "sentence_pair", "scored_pair")
BIN_LABELS = ("dissimilar", "similar")

_ROLES = {
    "single_sentence": ("sentence", "label"),
    "sentence_pair": ("s1", "s2", "label"),
    "scored_pair": ("s1", "s2", "score"),
}


@dataclass
class DatasetManifest:
    dataset_id: str
    task_shape: str
    file_format: str = "tsv"              # tsv | csv | jsonl
    columns: dict = field(default_factory=dict)  # role -> column name or index
    label_set: list[str] = field(default_factory=list)
    has_header: bool = False
    data_file: str | None = None

    def __post_init__(self):
        if self.task_shape not in TASK_SHAPES:
            raise ConfigError(f"unknown task_shape {self.task_shape!r}")
        if self.file_format not in ("tsv", "csv", "jsonl"):
            raise ConfigError(f"unknown format {self.file_format!r}")
        missing = [r for r in _ROLES[self.task_shape] if r not in self.columns]
        if missing:
            raise ConfigError(f"manifest {self.dataset_id}: missing column roles {missing}")
        if self.task_shape != "scored_pair" and not self.label_set:
            raise ConfigError(f"manifest {self.dataset_id}: empty label set")


@dataclass
class LabeledExample:
    dataset_id: str
    example_id: str
    s1: str
    s2: str
    label: str
    rating: float | None = None  # only set for scored_pair rows before binning


def read_manifest(path) -> DatasetManifest:
    """Parse a key-value manifest file."""
    path = Path(path)
    values = {}
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise FileFormatError(path, line_no, "expected 'key = value'")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    try:
        columns = {}
        for piece in values.get("columns", "").split(","):
            piece = piece.strip()
            if not piece:
                continue
            role, _, ref = piece.partition("=")
            ref = ref.strip()
            columns[role.strip()] = int(ref) if ref.lstrip("-").isdigit() else ref
        labels = [x.strip() for x in values.get("labels", "").split(",") if x.strip()]
        return DatasetManifest(
            dataset_id=values["dataset_id"],
            task_shape=values["task_shape"],
            file_format=values.get("format", "tsv"),
            columns=columns,
            label_set=labels,
            has_header=values.get("has_header", "false").lower() in ("true", "1", "yes"),
            data_file=values.get("data_file"),
        )
    except KeyError as e:
        raise ConfigError(f"{path}: manifest missing required key {e}") from None


def _iter_rows(path, manifest):
    """Yield (row_number, cell_lookup) pairs; lookup returns None on a
    missing/short column so the caller can count the row as malformed."""
    if manifest.file_format == "jsonl":
        with open(path, encoding="utf-8") as f:
            for row_no, line in enumerate(f):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError:
                    yield row_no, None
                    continue
                yield row_no, (lambda ref, o=obj: o.get(ref) if isinstance(ref, str) else None)
        return
    delim = "\t" if manifest.file_format == "tsv" else ","
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f, delimiter=delim)
        header = None
        for row_no, row in enumerate(reader):
            if manifest.has_header and header is None:
                header = {name: i for i, name in enumerate(row)}
                continue
            if not row:
                continue

            def lookup(ref, row=row, header=header):
                if isinstance(ref, str):
                    if header is None or ref not in header:
                        return None
                    ref = header[ref]
                return row[ref] if 0 <= ref < len(row) else None

            yield row_no, lookup


def singleton_to_pair(example: LabeledExample) -> LabeledExample:
    """Complete a single-sentence example into a pair via the
    placeholder first sentence."""
    example.s1 = PLACEHOLDER
    return example


def load_dataset(path, manifest: DatasetManifest) -> list[LabeledExample]:
    """Load one dataset file.

    Malformed rows (wrong arity, empty text, unparseable rating) are
    skipped and counted in a warning; a label outside the manifest's
    label set is an error.  For ``scored_pair`` the returned examples
    carry ratings and an empty label: run :func:`bin_scored_pairs` next.
    """
    shape = manifest.task_shape
    out = []
    skipped = 0
    for row_no, lookup in _iter_rows(path, manifest):
        example_id = f"{row_no:06d}"
        if lookup is None:
            skipped += 1
            continue
        if shape == "single_sentence":
            sent, label = lookup(manifest.columns["sentence"]), lookup(manifest.columns["label"])
            if not sent or label is None:
                skipped += 1
                continue
            if label not in manifest.label_set:
                raise UnknownLabelError(f"{path}: row {row_no}: unknown label {label!r}")
            out.append(singleton_to_pair(
                LabeledExample(manifest.dataset_id, example_id, "", str(sent).strip(), label)))
        elif shape == "sentence_pair":
            s1, s2 = lookup(manifest.columns["s1"]), lookup(manifest.columns["s2"])
            label = lookup(manifest.columns["label"])
            if not s1 or not s2 or label is None:
                skipped += 1
                continue
            if label not in manifest.label_set:
                raise UnknownLabelError(f"{path}: row {row_no}: unknown label {label!r}")
            out.append(LabeledExample(manifest.dataset_id, example_id,
                                      str(s1).strip(), str(s2).strip(), label))
        else:
            s1, s2 = lookup(manifest.columns["s1"]), lookup(manifest.columns["s2"])
            raw = lookup(manifest.columns["score"])
            try:
                rating = float(raw)
            except (TypeError, ValueError):
                skipped += 1
                continue
            if not s1 or not s2 or not math.isfinite(rating):
                skipped += 1
                continue
            out.append(LabeledExample(manifest.dataset_id, example_id,
                                      str(s1).strip(), str(s2).strip(), "", rating))
    if skipped:
        logger.warning("%s: skipped %d malformed rows", path, skipped)
    return out


def bin_scored_pairs(examples: list[LabeledExample], n_bins: int = 3) -> list[LabeledExample]:
    """Relabel rating-carrying examples by empirical thirds.

    Ratings at or below the bottom-third nearest-rank cutoff become
    ``dissimilar``; ratings at or above the symmetric top cutoff become
    ``similar``; the middle is discarded.  Boundary ties are retained.
    An all-equal rating distribution (both cutoffs coincide) is an error.
    """
    if n_bins != 3:
        raise ConfigError(f"only 3-bin splitting is supported, got {n_bins}")
    if len(examples) < 3:
        raise DiscmarkError(f"need at least 3 rated examples, got {len(examples)}")
    ratings = []
    for ex in examples:
        if ex.rating is None:
            raise DiscmarkError(f"example {ex.example_id} has no rating")
        ratings.append(ex.rating)
    ordered = sorted(ratings)
    k = math.ceil(len(ordered) / 3)
    low_cut = ordered[k - 1]           # nearest-rank 1/3 quantile
    high_cut = ordered[len(ordered) - k]  # symmetric cutoff from the top
    if low_cut == high_cut:
        raise DiscmarkError("degenerate rating distribution: quantile cutoffs coincide")
    out = []
    for ex in examples:
        if ex.rating <= low_cut:
            label = BIN_LABELS[0]
        elif ex.rating >= high_cut:
            label = BIN_LABELS[1]
        else:
            continue
        out.append(LabeledExample(ex.dataset_id, ex.example_id, ex.s1, ex.s2, label))
    return out


def adapt_dataset(manifest: DatasetManifest, base_dir=None) -> list[LabeledExample]:
    """Load + fully adapt the dataset named by ``manifest`` (resolving
    its data file relative to ``base_dir``), ready for prediction."""
    if manifest.data_file is None:
        raise ConfigError(f"manifest {manifest.dataset_id} has no data_file")
    path = Path(manifest.data_file)
    if base_dir is not None and not path.is_absolute():
        path = Path(base_dir) / path
    examples = load_dataset(path, manifest)
    if manifest.task_shape == "scored_pair":
        examples = bin_scored_pairs(examples)
        manifest.label_set = list(BIN_LABELS)
    return examples


ADAPTED_HEADER = "dataset_id\texample_id\tlabel\ts1\ts2"


def _sanitize(text: str) -> str:
    return text.replace("\t", " ").replace("\r", " ").replace("\n", " ")


def write_labeled(examples: list[LabeledExample], path) -> int:
    """Write adapted examples in the extractor-style TSV schema with
    dataset/example id columns."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(ADAPTED_HEADER + "\n")
        for ex in examples:
            f.write(f"{_sanitize(ex.dataset_id)}\t{_sanitize(ex.example_id)}"
                    f"\t{_sanitize(ex.label)}\t{_sanitize(ex.s1)}\t{_sanitize(ex.s2)}\n")
    return len(examples)


def read_labeled(path) -> list[LabeledExample]:
    out = []
    with open(path, encoding="utf-8") as f:
        header = f.readline().rstrip("\n")
        if header != ADAPTED_HEADER:
            raise FileFormatError(path, 1, f"bad header {header!r}")
        for line_no, line in enumerate(f, 2):
            line = line.rstrip("\n")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 5:
                raise FileFormatError(path, line_no, f"expected 5 columns, found {len(cols)}")
            out.append(LabeledExample(cols[0], cols[1], cols[3], cols[4], cols[2]))
    return out
