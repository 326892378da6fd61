"""Encoder fine-tuning bridge for the discourse-marker pipeline."""

__version__ = "0.1.0"

from .bridge import BridgeConfig, TrainOutcome, bridge_predict, bridge_train
from .data import (read_adapted_file, read_dataset_file, write_predictions,
                   SchemaError)

__all__ = ["BridgeConfig", "TrainOutcome", "bridge_predict", "bridge_train",
           "read_adapted_file", "read_dataset_file", "write_predictions",
           "SchemaError"]
