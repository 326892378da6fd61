"""Standalone command line for the encoder bridge.

    markerbridge train --model <pretrained> --train-file data.tsv \
        --artifact-dir artifact/ [--eval-file dev.tsv] [--epochs 2] ...
    markerbridge predict --artifact-dir artifact/ --input adapted.tsv \
        --output predictions.tsv [--mask "sadly,,luckily,"]
"""

import argparse
import logging
import sys

from .bridge import BridgeConfig, bridge_predict, bridge_train
from .data import SchemaError


def build_parser():
    parser = argparse.ArgumentParser(prog="markerbridge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    tr = sub.add_parser("train", help="fine-tune a pretrained encoder")
    tr.add_argument("--model", required=True, help="pretrained model path or name")
    tr.add_argument("--train-file", required=True)
    tr.add_argument("--eval-file")
    tr.add_argument("--artifact-dir", required=True)
    tr.add_argument("--lexicon-file")
    tr.add_argument("--epochs", type=int, default=2)
    tr.add_argument("--learning-rate", type=float, default=5e-5)
    tr.add_argument("--batch-size", type=int, default=16)
    tr.add_argument("--max-length", type=int, default=128)
    tr.add_argument("--seed", type=int, default=0)

    pr = sub.add_parser("predict", help="predict markers for adapted examples")
    pr.add_argument("--artifact-dir", required=True)
    pr.add_argument("--input", required=True, help="adapted dataset TSV")
    pr.add_argument("--output", required=True, help="prediction interchange TSV")
    pr.add_argument("--batch-size", type=int, default=16)
    pr.add_argument("--max-length", type=int, default=128)
    pr.add_argument("--mask", action="append", metavar="MARKER",
                    help="restrict inference to this marker (repeatable); "
                         "markers may end in a comma, quote accordingly")
    pr.add_argument("--model-id", default="encoder-bridge")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "train":
            cfg = BridgeConfig(
                model=args.model, artifact_dir=args.artifact_dir,
                train_file=args.train_file, eval_file=args.eval_file,
                lexicon_file=args.lexicon_file, epochs=args.epochs,
                learning_rate=args.learning_rate, batch_size=args.batch_size,
                max_length=args.max_length, seed=args.seed)
            outcome = bridge_train(cfg)
            print(f"dev_accuracy\t{outcome.dev_accuracy:.6f}", file=sys.stderr)
        else:
            cfg = BridgeConfig(
                model="unused", artifact_dir=args.artifact_dir,
                output_path=args.output, batch_size=args.batch_size,
                max_length=args.max_length, class_mask=args.mask,
                model_id=args.model_id)
            count = bridge_predict(cfg, args.input)
            print(f"records\t{count}", file=sys.stderr)
        return 0
    except (SchemaError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
