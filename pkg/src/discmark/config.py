"""Flat key-value pipeline configuration.

Everything that affects results lives in the config file; command-line
flags only choose the config path, verbosity and parallelism degree.
Relative paths resolve against the config file's directory.
"""

from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .extract import ExtractionConfig
from .mining import MiningConfig
from .model import TrainConfig

_KNOWN_KEYS = {
    "corpus", "lexicon", "datasets", "output_dir", "seed", "include_none",
    "split", "model",
    "extract.gap_min", "extract.gap_max", "extract.mask_probability",
    "extract.per_class_cap",
    "train.learning_rate", "train.epochs", "train.l2", "train.batch_size",
    "train.hash_dimension",
    "mine.min_marker_count", "mine.drop_none", "mine.direction",
}


@dataclass
class PipelineConfig:
    corpus_paths: list[Path]
    output_dir: Path
    seed: int = 0
    lexicon_path: Path | None = None  # None = bundled default lexicon
    manifest_paths: list[Path] = field(default_factory=list)
    include_none: bool = True
    split_fractions: tuple = (0.9, 0.05, 0.05)
    model_source: str = "internal"    # "internal" or "imported:<path>"
    extraction: ExtractionConfig = field(default_factory=ExtractionConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    mining: MiningConfig = field(default_factory=MiningConfig)


def _parse_bool(value, key):
    v = value.lower()
    if v in ("true", "1", "yes"):
        return True
    if v in ("false", "0", "no"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {value!r}")


def _parse_paths(value, base):
    return [(base / p.strip()).resolve() if not Path(p.strip()).is_absolute()
            else Path(p.strip())
            for p in value.split(",") if p.strip()]


def read_config(path) -> PipelineConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    base = path.parent
    raw = {}
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{line_no}: expected 'key = value'")
            key, _, value = stripped.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _KNOWN_KEYS:
                raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
            raw[key] = value

    if "corpus" not in raw:
        raise ConfigError(f"{path}: missing required key 'corpus'")
    if "output_dir" not in raw:
        raise ConfigError(f"{path}: missing required key 'output_dir'")

    seed = int(raw.get("seed", "0"))
    try:
        extraction = ExtractionConfig(
            gap_min=int(raw.get("extract.gap_min", "2")),
            gap_max=int(raw.get("extract.gap_max", "100")),
            mask_probability=float(raw.get("extract.mask_probability", "0.10")),
            per_class_cap=int(raw.get("extract.per_class_cap", "20000")),
            rng_seed=seed,
        )
        train = TrainConfig(
            learning_rate=float(raw.get("train.learning_rate", "0.1")),
            epochs=int(raw.get("train.epochs", "2")),
            l2=float(raw.get("train.l2", "1e-6")),
            batch_size=int(raw.get("train.batch_size", "64")),
            rng_seed=seed,
            hash_dimension=int(raw.get("train.hash_dimension", str(1 << 20))),
        )
        mining = MiningConfig(
            min_marker_count=int(raw.get("mine.min_marker_count", "20")),
            drop_none=_parse_bool(raw.get("mine.drop_none", "true"), "mine.drop_none"),
            direction=raw.get("mine.direction", "m_to_y"),
        )
    except ValueError as e:
        raise ConfigError(f"{path}: bad numeric value ({e})") from None

    split = tuple(float(x) for x in raw.get("split", "0.9,0.05,0.05").split(","))
    lexicon_value = raw.get("lexicon", "default")
    lexicon_path = None
    if lexicon_value != "default":
        lexicon_path = _parse_paths(lexicon_value, base)[0]

    model_source = raw.get("model", "internal")
    if model_source != "internal":
        if not model_source.startswith("imported:"):
            raise ConfigError(f"model must be 'internal' or 'imported:<path>', got {model_source!r}")
        imported = model_source[len("imported:"):].strip()
        p = Path(imported)
        if not p.is_absolute():
            p = (base / p).resolve()
        model_source = f"imported:{p}"

    out_dir = Path(raw["output_dir"])
    if not out_dir.is_absolute():
        out_dir = (base / out_dir).resolve()

    return PipelineConfig(
        corpus_paths=_parse_paths(raw["corpus"], base),
        output_dir=out_dir,
        seed=seed,
        lexicon_path=lexicon_path,
        manifest_paths=_parse_paths(raw.get("datasets", ""), base),
        include_none=_parse_bool(raw.get("include_none", "true"), "include_none"),
        split_fractions=split,
        model_source=model_source,
        extraction=extraction,
        train=train,
        mining=mining,
    )


def validate_config(cfg: PipelineConfig) -> None:
    for p in cfg.corpus_paths:
        if not Path(p).is_file():
            raise ConfigError(f"corpus file not found: {p}")
    for p in cfg.manifest_paths:
        if not Path(p).is_file():
            raise ConfigError(f"manifest file not found: {p}")
    if cfg.lexicon_path is not None and not Path(cfg.lexicon_path).is_file():
        raise ConfigError(f"lexicon file not found: {cfg.lexicon_path}")
    if cfg.model_source.startswith("imported:"):
        p = Path(cfg.model_source[len("imported:"):])
        if not p.is_file():
            raise ConfigError(f"imported predictions file not found: {p}")
