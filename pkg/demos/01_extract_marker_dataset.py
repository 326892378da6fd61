#!/usr/bin/env python3
"""Build a marker-prediction dataset from the bundled toy corpus.

Walks the core extraction steps one by one: read documents, pull
adjacent marker pairs, add non-adjacent NONE pairs, then let
extract_corpus run the whole recipe (dedup, balancing, placeholder
masking) and write the train/valid/test files.
"""

import shutil
import tempfile
from importlib import resources
from pathlib import Path

from discmark import (ExtractionConfig, default_lexicon,
                      extract_adjacent_pairs, extract_corpus, read_corpus,
                      split_by_document, write_dataset)

OUT = Path("demo-output")
OUT.mkdir(exist_ok=True)

lexicon = default_lexicon()
print(f"lexicon: {len(lexicon)} markers, class vocabulary "
      f"{len(lexicon.class_names())} (markers + NONE)")

with tempfile.TemporaryDirectory() as tmp:
    corpus_path = Path(tmp) / "corpus.txt"
    shutil.copy(str(resources.files("discmark.data").joinpath("toy/corpus.txt")),
                corpus_path)
    docs = read_corpus(corpus_path)
print(f"corpus: {len(docs)} documents, "
      f"{sum(len(d.sentences) for d in docs)} sentences")

first = docs[0]
pairs = extract_adjacent_pairs(first, lexicon)
print(f"\nadjacent marker pairs in {first.doc_id}: {len(pairs)}")
e = pairs[0]
print(f"  s1    = {e.s1}")
print(f"  s2    = {e.s2}")
print(f"  label = {e.label}   source = {e.source}")

cfg = ExtractionConfig(per_class_cap=30, rng_seed=20260810)
examples, report = extract_corpus(docs, lexicon, cfg, workers=4)
print(f"\nfull extraction: {report.raw_marker_pairs} marker pairs, "
      f"{report.raw_none_pairs} NONE pairs, {report.dedup_removed} duplicates removed")
print(f"balanced dataset: {report.total} examples over "
      f"{len(report.class_counts)} classes, mask rate {report.mask_rate:.3f}")

train, valid, test = split_by_document(examples, (0.9, 0.05, 0.05), cfg.rng_seed)
for name, part in (("train", train), ("valid", valid), ("test", test)):
    path = OUT / f"dataset-{name}.tsv"
    write_dataset(part, path)
    print(f"wrote {path} ({len(part)} examples)")
