"""Fine-tune a pretrained sentence-pair encoder for marker prediction.

The bridge stands in for the heavy model slot of the pipeline: it
trains on the extractor's dataset files and writes predictions in the
interchange format the association miner consumes.  Restricting
inference to a subset of markers is done by masking logits, not by
retraining.

Defaults (documented, not tuned to any reference): AdamW, learning rate
5e-5, batch size 16, 2 epochs, max sequence length 128.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
from torch.optim import AdamW
from transformers import AutoModelForSequenceClassification, AutoTokenizer

from .data import (SchemaError, read_adapted_file, read_dataset_file,
                   read_lexicon_markers, write_predictions)

logger = logging.getLogger(__name__)

PLACEHOLDER = "[S_1]"
NONE_CLASS = "NONE"
LABELS_FILE = "bridge_labels.json"


@dataclass
class BridgeConfig:
    model: str                        # pretrained model path or identifier
    artifact_dir: str
    train_file: str | None = None
    eval_file: str | None = None
    output_path: str | None = None
    epochs: int = 2
    learning_rate: float = 5e-5
    batch_size: int = 16
    max_length: int = 128
    seed: int = 0
    class_mask: list[str] | None = None   # inference-time marker subset
    lexicon_file: str | None = None       # optional vocabulary check
    model_id: str = "encoder-bridge"

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1 or self.learning_rate <= 0 or self.max_length < 8:
            raise ValueError("batch_size, learning_rate and max_length must be positive")


@dataclass
class TrainOutcome:
    artifact_dir: str
    class_names: list[str]
    dev_accuracy: float | None = None
    epoch_losses: list[float] = field(default_factory=list)


def _device():
    return torch.device("cuda" if torch.cuda.is_available() else "cpu")


def _load_tokenizer(source):
    tokenizer = AutoTokenizer.from_pretrained(source)
    if PLACEHOLDER not in tokenizer.get_vocab():
        tokenizer.add_special_tokens({"additional_special_tokens": [PLACEHOLDER]})
    return tokenizer


def _encode(tokenizer, pairs, max_length):
    s1 = [a for a, _ in pairs]
    s2 = [b for _, b in pairs]
    return tokenizer(s1, s2, truncation=True, max_length=max_length,
                     padding=True, return_tensors="pt")


def _batches(n, batch_size, order=None):
    idx = order if order is not None else range(n)
    for start in range(0, n, batch_size):
        yield [int(i) for i in idx[start:start + batch_size]]


def bridge_train(cfg: BridgeConfig) -> TrainOutcome:
    """Fine-tune on an extractor dataset file and save the artifact."""
    if not cfg.train_file:
        raise ValueError("train_file is required")
    rows = read_dataset_file(cfg.train_file)
    if not rows:
        raise SchemaError(f"{cfg.train_file}: no training rows")
    class_names = sorted({r.label for r in rows})
    if len(class_names) < 2:
        raise SchemaError("need at least 2 classes to fine-tune")
    if cfg.lexicon_file:
        known = read_lexicon_markers(cfg.lexicon_file) | {NONE_CLASS}
        alien = sorted(set(class_names) - known)
        if alien:
            raise SchemaError(f"labels not in lexicon: {', '.join(alien[:8])}")
    index = {name: i for i, name in enumerate(class_names)}

    torch.manual_seed(cfg.seed)
    device = _device()
    tokenizer = _load_tokenizer(cfg.model)
    model = AutoModelForSequenceClassification.from_pretrained(
        cfg.model, num_labels=len(class_names), ignore_mismatched_sizes=True)
    model.resize_token_embeddings(len(tokenizer))
    model.to(device)
    optimizer = AdamW(model.parameters(), lr=cfg.learning_rate)

    labels = torch.tensor([index[r.label] for r in rows])
    generator = np.random.default_rng(cfg.seed)
    outcome = TrainOutcome(cfg.artifact_dir, class_names)
    model.train()
    for epoch in range(1, cfg.epochs + 1):
        order = generator.permutation(len(rows))
        total = 0.0
        steps = 0
        for batch_idx in _batches(len(rows), cfg.batch_size, order):
            enc = _encode(tokenizer, [(rows[i].s1, rows[i].s2) for i in batch_idx],
                          cfg.max_length).to(device)
            out = model(**enc, labels=labels[batch_idx].to(device))
            optimizer.zero_grad()
            out.loss.backward()
            optimizer.step()
            total += float(out.loss.detach())
            steps += 1
        outcome.epoch_losses.append(total / steps)
        logger.info("epoch %d: mean loss %.4f", epoch, total / steps)

    artifact = Path(cfg.artifact_dir)
    artifact.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(artifact)
    tokenizer.save_pretrained(artifact)
    (artifact / LABELS_FILE).write_text(json.dumps(
        {"class_names": class_names, "source_model": str(cfg.model),
         "model_id": cfg.model_id}, indent=2) + "\n", encoding="utf-8")

    eval_file = cfg.eval_file or cfg.train_file
    outcome.dev_accuracy = _evaluate(model, tokenizer, index, eval_file,
                                     cfg.batch_size, cfg.max_length, device)
    logger.info("dev accuracy on %s: %.4f", eval_file, outcome.dev_accuracy)
    return outcome


@torch.no_grad()
def _evaluate(model, tokenizer, index, path, batch_size, max_length, device):
    rows = read_dataset_file(path)
    model.eval()
    hits = 0
    for batch_idx in _batches(len(rows), batch_size):
        enc = _encode(tokenizer, [(rows[i].s1, rows[i].s2) for i in batch_idx],
                      max_length).to(device)
        pred = model(**enc).logits.argmax(dim=-1).tolist()
        hits += sum(pred[k] == index.get(rows[i].label, -1)
                    for k, i in enumerate(batch_idx))
    model.train()
    return hits / len(rows) if rows else 0.0


@torch.no_grad()
def bridge_predict(cfg: BridgeConfig, input_path) -> int:
    """Predict one marker per adapted example; write interchange records
    in input order.  ``cfg.class_mask`` restricts the candidate markers
    by setting all other logits to negative infinity."""
    if not cfg.output_path:
        raise ValueError("output_path is required")
    artifact = Path(cfg.artifact_dir)
    meta = json.loads((artifact / LABELS_FILE).read_text(encoding="utf-8"))
    class_names = meta["class_names"]
    rows = read_adapted_file(input_path)
    if not rows:
        raise SchemaError(f"{input_path}: no examples to predict on")

    mask_vector = None
    if cfg.class_mask is not None:
        alien = sorted(set(cfg.class_mask) - set(class_names))
        if alien:
            raise SchemaError(f"mask names outside class vocabulary: {', '.join(alien)}")
        keep = torch.tensor([name in cfg.class_mask for name in class_names])
        mask_vector = torch.where(keep, 0.0, float("-inf"))

    device = _device()
    tokenizer = AutoTokenizer.from_pretrained(artifact)
    model = AutoModelForSequenceClassification.from_pretrained(artifact)
    model.to(device)
    model.eval()

    records = []
    for batch_idx in _batches(len(rows), cfg.batch_size):
        enc = _encode(tokenizer, [(rows[i].s1, rows[i].s2) for i in batch_idx],
                      cfg.max_length).to(device)
        logits = model(**enc).logits.cpu()
        if mask_vector is not None:
            logits = logits + mask_vector
        probs = torch.softmax(logits, dim=-1)
        top = probs.argmax(dim=-1)
        for k, i in enumerate(batch_idx):
            records.append((rows[i].dataset_id, rows[i].example_id,
                            class_names[int(top[k])], float(probs[k, top[k]]),
                            meta.get("model_id", cfg.model_id)))
    return write_predictions(records, cfg.output_path)
