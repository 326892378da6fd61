"""Readers and writers for the pipeline's tab-separated file contracts.

The bridge talks to the main pipeline only through files: it consumes
the extractor dataset schema and the adapted dataset schema, and emits
the prediction interchange schema.  The format definitions are
duplicated here on purpose; files are the contract.
"""

from dataclasses import dataclass

DATASET_HEADER = "label\ts1\ts2\tsource"
ADAPTED_HEADER = "dataset_id\texample_id\tlabel\ts1\ts2"
PREDICTIONS_HEADER = "dataset_id\texample_id\tpredicted_marker\tprobability\tmodel_id"


class SchemaError(ValueError):
    pass


@dataclass
class PairRow:
    s1: str
    s2: str
    label: str


@dataclass
class AdaptedRow:
    dataset_id: str
    example_id: str
    s1: str
    s2: str
    label: str


def _read_rows(path, header, arity):
    with open(path, encoding="utf-8") as f:
        first = f.readline().rstrip("\n")
        if first != header:
            raise SchemaError(f"{path}:1: expected header {header!r}, found {first!r}")
        for line_no, line in enumerate(f, 2):
            line = line.rstrip("\n")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != arity:
                raise SchemaError(f"{path}:{line_no}: expected {arity} columns, "
                                  f"found {len(cols)}")
            yield cols


def read_dataset_file(path) -> list[PairRow]:
    """Extractor-schema training file: label, s1, s2, source."""
    return [PairRow(s1, s2, label) for label, s1, s2, _ in
            _read_rows(path, DATASET_HEADER, 4)]


def read_adapted_file(path) -> list[AdaptedRow]:
    """Adapted classification dataset: dataset_id, example_id, label, s1, s2."""
    return [AdaptedRow(d, e, s1, s2, label) for d, e, label, s1, s2 in
            _read_rows(path, ADAPTED_HEADER, 5)]


def write_predictions(rows, path) -> int:
    """rows: iterable of (dataset_id, example_id, marker, probability, model_id)."""
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(PREDICTIONS_HEADER + "\n")
        for dataset_id, example_id, marker, probability, model_id in rows:
            f.write(f"{dataset_id}\t{example_id}\t{marker}"
                    f"\t{probability:.6f}\t{model_id}\n")
            count += 1
    return count


def read_lexicon_markers(path) -> set[str]:
    """Canonical markers of a lexicon file (variants ignored)."""
    markers = set()
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            markers.add(line.split("\t")[0].strip())
    return markers
