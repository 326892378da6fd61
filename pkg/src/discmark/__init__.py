"""Discourse-marker pipeline: corpus extraction, marker prediction,
and marker-to-category association mining."""

__version__ = "0.1.0"

from .corpus import Document, read_corpora, read_corpus
from .datasets import (DatasetManifest, LabeledExample, adapt_dataset,
                       bin_scored_pairs, load_dataset, read_manifest,
                       singleton_to_pair)
from .extract import (ExtractionConfig, MarkerPairExample, apply_s1_masking,
                      balance_dataset, extract_adjacent_pairs, extract_corpus,
                      read_dataset, sample_nonadjacent_pairs,
                      split_by_document, write_dataset)
from .features import FeatureVector, featurize
from .lexicon import (NONE_CLASS, PLACEHOLDER, MarkerLexicon, default_lexicon,
                      load_lexicon, match_marker)
from .mining import (AssociationRule, MiningConfig, PredictionJoin,
                     compute_priors, join_predictions, mine_rules,
                     render_table)
from .model import (ModelParams, PredictionRecord, TrainConfig,
                    evaluate_accuracy, export_predictions, import_predictions,
                    load_model, loss_and_grad, majority_baseline, predict,
                    save_model, train)
from .segment import segment_sentences

__all__ = [
    "AssociationRule", "DatasetManifest", "Document", "ExtractionConfig",
    "FeatureVector", "LabeledExample", "MarkerLexicon", "MarkerPairExample",
    "MiningConfig", "ModelParams", "NONE_CLASS", "PLACEHOLDER",
    "PredictionJoin", "PredictionRecord", "TrainConfig", "adapt_dataset",
    "apply_s1_masking", "balance_dataset", "bin_scored_pairs",
    "compute_priors", "default_lexicon", "evaluate_accuracy",
    "export_predictions", "extract_adjacent_pairs", "extract_corpus",
    "featurize", "import_predictions", "join_predictions", "load_dataset",
    "load_lexicon", "load_model", "loss_and_grad", "majority_baseline",
    "match_marker", "mine_rules", "predict", "read_corpora", "read_corpus",
    "read_dataset", "read_manifest", "render_table",
    "sample_nonadjacent_pairs", "save_model", "segment_sentences",
    "singleton_to_pair", "split_by_document", "train", "write_dataset",
]
