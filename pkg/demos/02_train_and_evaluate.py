#!/usr/bin/env python3
"""Train the linear marker predictor on the files from demo 01 and
compare its accuracy against the majority-class baseline.

Run demos/01_extract_marker_dataset.py first.
"""

from pathlib import Path

from discmark import (TrainConfig, default_lexicon, evaluate_accuracy,
                      majority_baseline, predict, read_dataset, train)
from discmark.model import save_model

OUT = Path("demo-output")
lexicon = default_lexicon()

train_set = read_dataset(OUT / "dataset-train.tsv", lexicon)
valid_set = read_dataset(OUT / "dataset-valid.tsv", lexicon)
test_set = read_dataset(OUT / "dataset-test.tsv", lexicon)
print(f"examples: {len(train_set)} train / {len(valid_set)} valid / {len(test_set)} test")

top, freq = majority_baseline(test_set, lexicon.class_names())
print(f"majority baseline on test: always '{top}' -> {100 * freq:.1f}%")

cfg = TrainConfig(learning_rate=0.4, epochs=2, batch_size=32,
                  rng_seed=20260810, hash_dimension=1 << 14)
result = train(train_set, cfg, class_names=lexicon.class_names(),
               val_examples=valid_set)
for st in result.history:
    print(f"epoch {st.epoch}: loss {st.train_loss:.3f}, "
          f"train acc {st.train_accuracy:.3f}, valid acc {st.val_accuracy:.3f}")

accuracy = evaluate_accuracy(result.params, test_set)
print(f"test accuracy: {100 * accuracy:.1f}% "
      f"({accuracy / freq:.1f}x the majority baseline)")

probs, marker = predict(result.params, "The crew inspected the turbine.",
                        "the gauge showed a leak near the valve.")
print(f"\nsample prediction: '{marker}' (p = {probs.max():.3f})")

save_model(result.params, OUT / "model.bin")
print(f"wrote {OUT / 'model.bin'}")
