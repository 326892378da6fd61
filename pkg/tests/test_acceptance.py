"""Acceptance suite: one test per gate criterion, each printing a
PASS/FAIL line with its runtime.  Tolerances are pinned here."""

import hashlib
import json
import shutil
import sys
import time
from importlib import resources
from pathlib import Path

import numpy as np
import pytest

import discmark
from discmark import (ExtractionConfig, MiningConfig, TrainConfig,
                      apply_s1_masking, bin_scored_pairs, compute_priors,
                      evaluate_accuracy, extract_corpus, join_predictions,
                      majority_baseline, mine_rules, split_by_document, train,
                      write_dataset)
from discmark.cli import main as cli_main
from discmark.datasets import BIN_LABELS, LabeledExample
from discmark.extract import derive_rng
from discmark.lexicon import NONE_CLASS, PLACEHOLDER, MarkerLexicon
from discmark.mining import fmt_pct
from discmark.model import PredictionRecord

from conftest import plant_marker_docs, signal_corpus
from test_mining import brute_force_rules
from test_model import finite_difference_check, random_batch, random_params

GOLDEN = json.loads((Path(__file__).parent / "golden_hashes.json").read_text())


@pytest.fixture(autouse=True)
def announce(request, capsys):
    started = time.time()
    failed = True
    try:
        yield
        failed = False
    finally:
        verdict = "FAIL" if failed else "PASS"
        name = request.node.name.replace("test_criterion_", "")
        with capsys.disabled():
            print(f"ACCEPTANCE {verdict} {name} ({time.time() - started:.1f}s)",
                  file=sys.stderr)


def test_criterion_majority_baseline_parity(lexicon):
    deadline = time.time() + 1.0
    # 175-class: every marker planted 6 times, NONE sampled to match, cap 6
    docs, _ = plant_marker_docs(lexicon.markers, 6)
    examples, report = extract_corpus(docs, lexicon,
                                      ExtractionConfig(per_class_cap=6, rng_seed=3))
    assert len(report.class_counts) == 175
    assert set(report.class_counts.values()) == {6}
    top, freq = majority_baseline(examples, lexicon.class_names())
    assert freq == pytest.approx(1 / 175)
    assert fmt_pct(100 * freq) in ("0.5", "0.6")

    # 20-class balanced set without the NONE augmentation: exactly 5.0
    markers20 = lexicon.markers[:20]
    lex20 = MarkerLexicon([(m, [m]) for m in markers20])
    docs20, _ = plant_marker_docs(markers20, 5)
    examples20, _ = extract_corpus(docs20, lex20,
                                   ExtractionConfig(per_class_cap=5, rng_seed=3),
                                   include_none=False)
    _, freq20 = majority_baseline(examples20, lex20.class_names())
    assert freq20 == 1 / 20
    assert fmt_pct(100 * freq20) == "5.0"
    assert time.time() < deadline, "runtime budget exceeded (1 s)"


def test_criterion_published_row_arithmetic():
    deadline = time.time() + 1.0
    gold = [LabeledExample("CR", f"{k:06d}", PLACEHOLDER, f"t {k}.",
                           "negative" if k < 109 else "positive")
            for k in range(500)]
    markers = (["unfortunately,"] * 66 + ["sadly,"] * 20
               + [NONE_CLASS] * 23 + ["sadly,"] + [NONE_CLASS] * 390)
    preds = [PredictionRecord("CR", f"{k:06d}", m, 0.9, "m")
             for k, m in enumerate(markers)]
    joins = join_predictions(gold, preds)
    rules = mine_rules(joins, compute_priors(gold), MiningConfig())
    by_key = {(r.marker, r.category): r for r in rules}

    unf = by_key[("unfortunately,", "CR.negative")]
    assert (unf.support, unf.marker_total) == (66, 66)
    assert (fmt_pct(unf.confidence), fmt_pct(unf.prior)) == ("100.0", "21.8")

    sad = by_key[("sadly,", "CR.negative")]
    assert (sad.support, sad.marker_total) == (20, 21)
    assert (fmt_pct(sad.confidence), fmt_pct(sad.prior)) == ("95.2", "21.8")

    rendered = discmark.render_table([unf, sad], "text").splitlines()
    assert rendered[1].endswith("100.0 (21.8)")
    assert rendered[2].endswith("95.2 (21.8)")
    assert time.time() < deadline, "runtime budget exceeded (1 s)"


def test_criterion_miner_matches_brute_force_oracle():
    deadline = time.time() + 30.0
    rng = np.random.default_rng(2024)
    from test_mining import random_instance
    for trial in range(100):
        rows, joins = random_instance(rng)
        cfg = MiningConfig(min_marker_count=int(rng.integers(1, 40)))
        priors = compute_priors(rows)
        assert mine_rules(joins, priors, cfg) == brute_force_rules(joins, priors, cfg), \
            f"divergence on trial {trial}"
    assert time.time() < deadline, "runtime budget exceeded (30 s)"


def test_criterion_gradient_check():
    deadline = time.time() + 10.0
    worst = 0.0
    for trial in range(20):
        rng = np.random.default_rng(1000 + trial)
        params = random_params(rng, k=5, d=50)
        batch = random_batch(rng, k=5, d=50, size=6)
        worst = max(worst, finite_difference_check(params, batch, l2=1e-3))
    assert worst < 1e-4, f"max relative error {worst:.3e}"
    assert time.time() < deadline, "runtime budget exceeded (10 s)"


def test_criterion_desk_scale_learning(lexicon):
    deadline = time.time() + 600.0
    markers = lexicon.markers[:20]
    lex20 = MarkerLexicon([(m, [m]) for m in markers])
    docs = signal_corpus(markers, 2000, seed=123)
    examples, _ = extract_corpus(docs, lex20,
                                 ExtractionConfig(per_class_cap=2000, rng_seed=5),
                                 include_none=False, workers=4)
    assert len(examples) == 20 * 2000
    _, freq = majority_baseline(examples, lex20.class_names())
    assert freq == 1 / 20
    train_set, valid_set, test_set = split_by_document(examples, (0.9, 0.05, 0.05), seed=5)
    cfg = TrainConfig(learning_rate=0.5, epochs=2, batch_size=64, rng_seed=5,
                      hash_dimension=1 << 18)
    result = train(train_set, cfg, class_names=lex20.class_names(),
                   val_examples=valid_set)
    accuracy = evaluate_accuracy(result.params, test_set)
    assert accuracy >= 0.25, f"test accuracy {accuracy:.3f} below 5x majority"
    assert time.time() < deadline, "runtime budget exceeded (10 min)"


def test_criterion_extraction_property_suite(tmp_path, lexicon):
    deadline = time.time() + 120.0
    docs, _ = plant_marker_docs(lexicon.markers[:40], 60)
    doc_index = {d.doc_id: d for d in docs}
    cfg = ExtractionConfig(per_class_cap=50, rng_seed=11)
    examples, report = extract_corpus(docs, lexicon, cfg)

    for e in examples:
        doc_id, i, j = e.source
        if e.label == NONE_CLASS:
            assert 2 <= j - i <= 100
        else:
            assert j == i + 1
        if e.s1 != PLACEHOLDER:
            assert e.s1 == doc_index[doc_id].sentences[i]
    assert all(n <= cfg.per_class_cap for n in report.class_counts.values())

    # mask rate over 1e5 fresh examples at p = 0.10
    from discmark.extract import MarkerPairExample
    big = [MarkerPairExample(f"first {k}.", f"second {k}.", NONE_CLASS, ("d", 0, 2))
           for k in range(100_000)]
    apply_s1_masking(big, 0.10, derive_rng(99, "mask"))
    rate = sum(e.s1 == PLACEHOLDER for e in big) / len(big)
    assert abs(rate - 0.10) <= 0.01, f"mask rate {rate:.4f}"

    # byte-identical outputs across reruns and parallelism degrees 1/4/8
    blobs = {}
    for run, workers in (("a", 1), ("b", 4), ("c", 8), ("d", 1)):
        got, _ = extract_corpus(docs, lexicon, cfg, workers=workers)
        path = tmp_path / f"run-{run}.tsv"
        write_dataset(got, path)
        blobs[run] = path.read_bytes()
    assert blobs["a"] == blobs["b"] == blobs["c"] == blobs["d"]

    # a different seed moves the NONE sample
    other, _ = extract_corpus(docs, lexicon,
                              ExtractionConfig(per_class_cap=50, rng_seed=12))
    path = tmp_path / "other-seed.tsv"
    write_dataset(other, path)
    assert path.read_bytes() != blobs["a"]
    assert time.time() < deadline, "runtime budget exceeded (2 min)"


def test_criterion_sts_binning():
    deadline = time.time() + 1.0
    rng = np.random.default_rng(7)
    ratings = rng.uniform(0, 5, size=3000).tolist()
    examples = [LabeledExample("STS", f"{k:05d}", f"a {k}.", f"b {k}.", "", r)
                for k, r in enumerate(ratings)]
    binned = bin_scored_pairs(examples)
    lo = [e for e in binned if e.label == BIN_LABELS[0]]
    hi = [e for e in binned if e.label == BIN_LABELS[1]]
    assert abs(len(lo) - 1000) <= 1 and abs(len(hi) - 1000) <= 1
    assert len(binned) == len(lo) + len(hi) <= 3000
    rating_of = {e.example_id: r for e, r in zip(examples, ratings)}
    assert max(rating_of[e.example_id] for e in lo) < \
        min(rating_of[e.example_id] for e in hi)
    assert time.time() < deadline, "runtime budget exceeded (1 s)"


def test_criterion_end_to_end_golden_run(tmp_path):
    deadline = time.time() + 60.0
    toy = resources.files("discmark.data").joinpath("toy")
    for name in ["corpus.txt", "cr_reviews.tsv", "cr_reviews.manifest",
                 "nli_pairs.csv", "nli_pairs.manifest", "sts_scores.jsonl",
                 "sts_scores.manifest", "pipeline.cfg"]:
        shutil.copy(str(toy.joinpath(name)), tmp_path / name)
    code = cli_main(["pipeline", "--config", str(tmp_path / "pipeline.cfg")])
    assert code == 0
    out = tmp_path / "toy-output"
    for name, expected in GOLDEN.items():
        digest = hashlib.sha256((out / name).read_bytes()).hexdigest()
        assert digest == expected, f"{name}: {digest} != committed {expected}"
    assert time.time() < deadline, "runtime budget exceeded (1 min)"
