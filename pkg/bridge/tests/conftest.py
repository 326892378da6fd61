"""Offline fixtures: a tiny randomly-initialized encoder saved in HF
format (no network), plus dataset files in the pipeline's schemas."""

import numpy as np
import pytest
from tokenizers import Tokenizer
from tokenizers.models import WordPiece
from tokenizers.normalizers import BertNormalizer
from tokenizers.pre_tokenizers import BertPreTokenizer
from tokenizers.processors import TemplateProcessing
from transformers import (BertConfig, BertForSequenceClassification,
                          PreTrainedTokenizerFast)

CLASSES = ["luckily,", "sadly,", "NONE"]
POOLS = {
    "luckily,": [f"bright{k}" for k in range(12)],
    "sadly,": [f"gloom{k}" for k in range(12)],
    "NONE": [f"plain{k}" for k in range(12)],
}
SHARED = [f"word{k}" for k in range(12)]


def build_tiny_encoder(target_dir):
    """Random-weight 2-layer encoder + wordpiece tokenizer covering the
    fixture vocabulary, saved in standard pretrained format."""
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "[S_1]", "."]
    for pool in POOLS.values():
        vocab += pool
    vocab += SHARED
    mapping = {w: i for i, w in enumerate(vocab)}
    tk = Tokenizer(WordPiece(mapping, unk_token="[UNK]"))
    tk.normalizer = BertNormalizer(lowercase=True)
    tk.pre_tokenizer = BertPreTokenizer()
    tk.post_processor = TemplateProcessing(
        single="[CLS] $A [SEP]", pair="[CLS] $A [SEP] $B:1 [SEP]:1",
        special_tokens=[("[CLS]", mapping["[CLS]"]), ("[SEP]", mapping["[SEP]"])])
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=tk, unk_token="[UNK]", pad_token="[PAD]",
        cls_token="[CLS]", sep_token="[SEP]", mask_token="[MASK]",
        additional_special_tokens=["[S_1]"],
        model_input_names=["input_ids", "token_type_ids", "attention_mask"])
    config = BertConfig(vocab_size=len(vocab), hidden_size=32,
                        num_hidden_layers=2, num_attention_heads=2,
                        intermediate_size=64, max_position_embeddings=64)
    model = BertForSequenceClassification(config)
    model.save_pretrained(target_dir)
    tokenizer.save_pretrained(target_dir)
    return target_dir


def make_sentence(rng, label, n=5):
    pool = POOLS[label]
    words = [pool[int(rng.integers(len(pool)))] if rng.random() < 0.7
             else SHARED[int(rng.integers(len(SHARED)))]
             for _ in range(n)]
    return " ".join(words) + " ."


def write_dataset_file(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        f.write("label\ts1\ts2\tsource\n")
        for k, (label, s1, s2) in enumerate(rows):
            f.write(f"{label}\t{s1}\t{s2}\ttoy:{k}:{k + 1}\n")


def make_pair_rows(rng, per_class):
    rows = []
    for label in CLASSES:
        for _ in range(per_class):
            rows.append((label, make_sentence(rng, label),
                         make_sentence(rng, label)))
    order = rng.permutation(len(rows))
    return [rows[int(i)] for i in order]


@pytest.fixture(scope="session")
def tiny_encoder(tmp_path_factory):
    return str(build_tiny_encoder(tmp_path_factory.mktemp("tiny-encoder")))


@pytest.fixture(scope="session")
def train_eval_files(tmp_path_factory):
    rng = np.random.default_rng(7)
    base = tmp_path_factory.mktemp("bridge-data")
    train = base / "train.tsv"
    dev = base / "dev.tsv"
    write_dataset_file(train, make_pair_rows(rng, 60))
    write_dataset_file(dev, make_pair_rows(rng, 20))
    return str(train), str(dev)


@pytest.fixture(scope="session")
def adapted_file(tmp_path_factory):
    rng = np.random.default_rng(11)
    path = tmp_path_factory.mktemp("bridge-data") / "adapted.tsv"
    with open(path, "w", encoding="utf-8") as f:
        f.write("dataset_id\texample_id\tlabel\ts1\ts2\n")
        for k in range(100):
            label = CLASSES[k % 2]
            s1 = "[S_1]" if k % 2 else make_sentence(rng, label)
            f.write(f"BRfix\t{k:06d}\tgold{k % 3}\t{s1}\t{make_sentence(rng, label)}\n")
    return str(path)
