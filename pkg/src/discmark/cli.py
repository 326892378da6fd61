"""Command-line pipeline driver.

Subcommands: extract, train, eval, predict, mine, report, pipeline.
All result-affecting settings come from the config file; diagnostics go
to stderr, data goes to files under the configured output directory.
Exit codes: 0 success, 1 validation error, 2 runtime error.
"""

import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .config import PipelineConfig, read_config, validate_config
from .corpus import read_corpora
from .datasets import adapt_dataset, read_manifest, write_labeled
from .errors import ConfigError, DiscmarkError
from .extract import extract_corpus, read_dataset, split_by_document, write_dataset
from .lexicon import default_lexicon, load_lexicon
from .mining import compute_priors, join_predictions, mine_rules, render_table
from .model import (evaluate_accuracy, export_predictions, import_predictions,
                    load_model, majority_baseline, save_model, train,
                    write_predictions)

logger = logging.getLogger("discmark")

CONFIG_ENV_VAR = "DISCMARK_CONFIG"


class _UsageError(ConfigError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _lexicon_for(cfg: PipelineConfig):
    if cfg.lexicon_path is None:
        return default_lexicon()
    return load_lexicon(cfg.lexicon_path)


def _out(cfg: PipelineConfig, name: str) -> Path:
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    return cfg.output_dir / name


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def cmd_extract(cfg: PipelineConfig, workers: int = 1) -> None:
    docs = read_corpora(cfg.corpus_paths)
    if not docs:
        raise ConfigError("corpus contains no documents")
    lexicon = _lexicon_for(cfg)
    examples, report = extract_corpus(docs, lexicon, cfg.extraction,
                                      include_none=cfg.include_none, workers=workers)
    if not examples:
        raise DiscmarkError("extraction produced no examples")
    parts = split_by_document(examples, cfg.split_fractions, cfg.seed)
    for name, part in zip(("train", "valid", "test"), parts):
        n = write_dataset(part, _out(cfg, f"dataset-{name}.tsv"))
        logger.info("wrote dataset-%s.tsv (%d examples)", name, n)
    _write_text(_out(cfg, "extraction-report.txt"), report.render())


def cmd_train(cfg: PipelineConfig) -> None:
    lexicon = _lexicon_for(cfg)
    train_set = read_dataset(cfg.output_dir / "dataset-train.tsv", lexicon)
    valid_path = cfg.output_dir / "dataset-valid.tsv"
    valid_set = read_dataset(valid_path, lexicon) if valid_path.is_file() else None
    result = train(train_set, cfg.train, class_names=lexicon.class_names(),
                   val_examples=valid_set or None)
    save_model(result.params, _out(cfg, "model.bin"))
    lines = ["epoch\ttrain_loss\ttrain_accuracy\tval_accuracy"]
    for st in result.history:
        val = "" if st.val_accuracy is None else f"{st.val_accuracy:.6f}"
        lines.append(f"{st.epoch}\t{st.train_loss:.6f}\t{st.train_accuracy:.6f}\t{val}")
    _write_text(_out(cfg, "train-metrics.tsv"), "\n".join(lines) + "\n")


def cmd_eval(cfg: PipelineConfig) -> None:
    lexicon = _lexicon_for(cfg)
    test_set = read_dataset(cfg.output_dir / "dataset-test.tsv", lexicon)
    if not test_set:
        raise DiscmarkError("test split is empty")
    params = load_model(cfg.output_dir / "model.bin")
    accuracy = evaluate_accuracy(params, test_set)
    top, freq = majority_baseline(test_set, params.class_names)
    _write_text(_out(cfg, "eval-report.txt"), "\n".join([
        f"test_examples\t{len(test_set)}",
        f"accuracy\t{accuracy:.6f}",
        f"majority_class\t{top}",
        f"majority_baseline\t{freq:.6f}",
    ]) + "\n")


def _adapted_examples(cfg: PipelineConfig):
    all_examples = []
    for manifest_path in cfg.manifest_paths:
        manifest = read_manifest(manifest_path)
        examples = adapt_dataset(manifest, base_dir=Path(manifest_path).parent)
        write_labeled(examples, _out(cfg, f"adapted-{manifest.dataset_id}.tsv"))
        all_examples.extend(examples)
    return all_examples


def cmd_predict(cfg: PipelineConfig) -> None:
    if not cfg.manifest_paths:
        raise ConfigError("no datasets configured")
    lexicon = _lexicon_for(cfg)
    examples = _adapted_examples(cfg)
    out_path = _out(cfg, "predictions.tsv")
    if cfg.model_source.startswith("imported:"):
        src = cfg.model_source[len("imported:"):]
        records = import_predictions(src, lexicon.class_names())
        n = write_predictions(records, out_path)
    else:
        params = load_model(cfg.output_dir / "model.bin")
        n = export_predictions(params, examples, out_path)
    logger.info("wrote predictions.tsv (%d records)", n)


def cmd_mine(cfg: PipelineConfig) -> None:
    lexicon = _lexicon_for(cfg)
    labeled = _adapted_examples(cfg)
    preds = import_predictions(cfg.output_dir / "predictions.tsv", lexicon.class_names())
    joins = join_predictions(labeled, preds)
    rules = mine_rules(joins, compute_priors(labeled), cfg.mining)
    if not rules:
        logger.warning("no rules survived filtering (min_marker_count=%d)",
                       cfg.mining.min_marker_count)
    _write_text(_out(cfg, "rules.tsv"), render_table(rules, "tsv"))
    _write_text(_out(cfg, "rules.txt"), render_table(rules, "text"))
    _write_text(_out(cfg, "rules.md"), render_table(rules, "markdown"))


def cmd_report(cfg: PipelineConfig) -> None:
    from .mining import parse_rules_tsv

    lines = [f"discmark {__version__} run report", ""]
    lines.append("configuration:")
    lines.append(f"  seed = {cfg.seed}")
    lines.append(f"  corpus = {', '.join(p.name for p in cfg.corpus_paths)}")
    lines.append(f"  datasets = {', '.join(p.name for p in cfg.manifest_paths)}")
    lines.append(f"  model = {cfg.model_source}")
    ex = cfg.extraction
    lines.append(f"  extraction: gap [{ex.gap_min}, {ex.gap_max}], mask {ex.mask_probability},"
                 f" cap {ex.per_class_cap}")
    tr = cfg.train
    lines.append(f"  training: lr {tr.learning_rate}, epochs {tr.epochs}, l2 {tr.l2},"
                 f" batch {tr.batch_size}, dim {tr.hash_dimension}")
    lines.append(f"  mining: min count {cfg.mining.min_marker_count},"
                 f" drop NONE {cfg.mining.drop_none}")
    lines.append("")
    report_path = cfg.output_dir / "extraction-report.txt"
    if report_path.is_file():
        lines.append("extraction:")
        lines += ["  " + ln for ln in report_path.read_text(encoding="utf-8").splitlines()[:9]]
        lines.append("")
    rules_path = cfg.output_dir / "rules.tsv"
    if rules_path.is_file():
        rules = parse_rules_tsv(rules_path.read_text(encoding="utf-8"))
        lines.append(f"rules: {len(rules)} total")
        by_dataset: dict[str, list] = {}
        for r in rules:
            by_dataset.setdefault(r.dataset_id, []).append(r)
        for dataset in sorted(by_dataset):
            lines.append(f"  top rules for {dataset}:")
            lines += ["    " + ln for ln in
                      render_table(by_dataset[dataset][:3], "text").splitlines()]
    _write_text(_out(cfg, "report.txt"), "\n".join(lines) + "\n")


def cmd_pipeline(cfg: PipelineConfig, workers: int = 1) -> None:
    cmd_extract(cfg, workers)
    cmd_train(cfg)
    cmd_eval(cfg)
    cmd_predict(cfg)
    cmd_mine(cfg)
    cmd_report(cfg)


def build_parser() -> _Parser:
    parser = _Parser(prog="discmark", description=__doc__)
    parser.add_argument("command",
                        choices=["extract", "train", "eval", "predict", "mine",
                                 "report", "pipeline"])
    parser.add_argument("--config", "-c", default=os.environ.get(CONFIG_ENV_VAR),
                        help=f"config file (default: ${CONFIG_ENV_VAR})")
    parser.add_argument("--workers", "-j", type=int, default=1,
                        help="extraction parallelism; never changes results")
    parser.add_argument("--verbose", "-v", action="store_true")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        logging.getLogger().setLevel(logging.INFO if args.verbose else logging.WARNING)
        if args.config is None:
            raise _UsageError("no config file given (use --config or set "
                              f"${CONFIG_ENV_VAR})")
        if args.workers < 1:
            raise _UsageError("--workers must be >= 1")
        cfg = read_config(args.config)
        validate_config(cfg)
        if args.command == "extract":
            cmd_extract(cfg, args.workers)
        elif args.command == "train":
            cmd_train(cfg)
        elif args.command == "eval":
            cmd_eval(cfg)
        elif args.command == "predict":
            cmd_predict(cfg)
        elif args.command == "mine":
            cmd_mine(cfg)
        elif args.command == "report":
            cmd_report(cfg)
        else:
            cmd_pipeline(cfg, args.workers)
        return 0
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (DiscmarkError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
