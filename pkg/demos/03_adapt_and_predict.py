#!/usr/bin/env python3
"""Adapt the bundled classification fixtures into sentence pairs and
predict a discourse marker for every example.

Single sentences are paired with the [S_1] placeholder; scored pairs
are binned into dissimilar/similar by rating thirds.  Predictions land
in the tab-separated interchange file that the association miner (and
any external model) speaks.

Run demos/02_train_and_evaluate.py first.
"""

import shutil
import tempfile
from importlib import resources
from pathlib import Path

from discmark import adapt_dataset, export_predictions, read_manifest
from discmark.datasets import write_labeled
from discmark.model import load_model

OUT = Path("demo-output")
params = load_model(OUT / "model.bin")

with tempfile.TemporaryDirectory() as tmp:
    toy = resources.files("discmark.data").joinpath("toy")
    for name in ["cr_reviews.tsv", "cr_reviews.manifest", "nli_pairs.csv",
                 "nli_pairs.manifest", "sts_scores.jsonl", "sts_scores.manifest"]:
        shutil.copy(str(toy.joinpath(name)), Path(tmp) / name)

    all_examples = []
    for manifest_name in ["cr_reviews.manifest", "nli_pairs.manifest",
                          "sts_scores.manifest"]:
        manifest = read_manifest(Path(tmp) / manifest_name)
        examples = adapt_dataset(manifest, base_dir=tmp)
        print(f"{manifest.dataset_id}: {len(examples)} adapted examples "
              f"({manifest.task_shape}), labels {manifest.label_set}")
        write_labeled(examples, OUT / f"adapted-{manifest.dataset_id}.tsv")
        all_examples.extend(examples)

sample = all_examples[0]
print(f"\nsample pair: ({sample.s1!r}, {sample.s2!r}) gold = {sample.label}")

count = export_predictions(params, all_examples, OUT / "predictions.tsv")
print(f"wrote {OUT / 'predictions.tsv'} ({count} records)")
