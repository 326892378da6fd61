"""Linear marker-prediction model over hashed sentence-pair features.

Multinomial logistic regression trained with plain mini-batch gradient
descent (fixed learning rate, per-epoch shuffling, optional L2).  The
module also owns the tab-separated prediction interchange format that
lets any external model feed the association miner.
"""

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DiscmarkError, FileFormatError, UnknownLabelError
from .features import DEFAULT_DIM, FeatureVector, featurize

logger = logging.getLogger(__name__)


@dataclass
class ModelParams:
    W: np.ndarray             # (K, D) float64
    b: np.ndarray             # (K,) float64
    class_names: list[str]

    def __post_init__(self):
        if self.W.shape[0] != len(self.class_names) or self.b.shape != (self.W.shape[0],):
            raise ConfigError("parameter shapes disagree with class_names")

    @property
    def K(self) -> int:
        return self.W.shape[0]

    @property
    def D(self) -> int:
        return self.W.shape[1]

    @classmethod
    def zeros(cls, class_names, dim=DEFAULT_DIM):
        k = len(class_names)
        return cls(np.zeros((k, dim)), np.zeros(k), list(class_names))


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    epochs: int = 2
    l2: float = 1e-6
    batch_size: int = 64
    rng_seed: int = 0
    hash_dimension: int = DEFAULT_DIM

    def __post_init__(self):
        if self.learning_rate <= 0 or self.epochs < 1 or self.batch_size < 1:
            raise ConfigError("learning_rate, epochs and batch_size must be positive")
        if self.l2 < 0 or self.hash_dimension < 1:
            raise ConfigError("l2 must be >= 0 and hash_dimension >= 1")


@dataclass
class PredictionRecord:
    dataset_id: str
    example_id: str
    predicted_marker: str
    probability: float
    model_id: str


def softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max()
    e = np.exp(shifted)
    return e / e.sum()


def _scores(params: ModelParams, fv: FeatureVector) -> np.ndarray:
    if fv.dim != params.D:
        raise ConfigError(f"feature dim {fv.dim} != model dim {params.D}")
    if fv.nnz() == 0:
        return params.b.copy()
    return (params.W[:, fv.indices] * fv.values).sum(axis=1) + params.b


def loss_and_grad(params: ModelParams, batch, l2: float = 0.0):
    """Mean cross-entropy over ``batch`` plus ``l2 * ||W||^2 / 2``, with
    its exact gradient (dense, same shapes as the parameters).

    ``batch`` is a list of (FeatureVector, class_index) pairs.
    """
    if not batch:
        raise ValueError("empty batch")
    k = params.K
    gW = np.zeros_like(params.W)
    gb = np.zeros_like(params.b)
    total = 0.0
    inv = 1.0 / len(batch)
    for pos, (fv, y) in enumerate(batch):
        if not 0 <= y < k:
            raise UnknownLabelError(f"class index {y} outside [0, {k}) at batch position {pos}")
        scores = _scores(params, fv)
        if not np.all(np.isfinite(scores)):
            raise DiscmarkError(f"non-finite scores at batch position {pos}")
        probs = softmax(scores)
        total -= np.log(max(probs[y], 1e-300))
        dscores = probs
        dscores[y] -= 1.0
        if fv.nnz():
            gW[:, fv.indices] += np.outer(dscores, fv.values) * inv
        gb += dscores * inv
    loss = total * inv + 0.5 * l2 * float((params.W ** 2).sum())
    if l2:
        gW += l2 * params.W
    return loss, (gW, gb)


@dataclass
class EpochStats:
    epoch: int
    train_loss: float
    train_accuracy: float
    val_accuracy: float | None = None


@dataclass
class TrainResult:
    params: ModelParams
    history: list[EpochStats] = field(default_factory=list)


def _featurize_all(examples, dim):
    return [featurize(ex.s1, ex.s2, dim) for ex in examples]


def train(examples, cfg: TrainConfig, class_names=None, val_examples=None) -> TrainResult:
    """Train on MarkerPairExample-like records (fields s1, s2, label).

    Deterministic given ``cfg.rng_seed``.  Per-batch updates equal one
    gradient-descent step on the batch loss of :func:`loss_and_grad`:
    the L2 term is applied as an exact weight-decay factor and the
    cross-entropy part as sparse column updates.
    """
    if not examples:
        raise ValueError("empty training set")
    if class_names is None:
        class_names = sorted({ex.label for ex in examples})
    if len(class_names) < 2:
        raise ConfigError("need at least 2 classes")
    index = {name: i for i, name in enumerate(class_names)}
    for ex in examples:
        if ex.label not in index:
            raise UnknownLabelError(f"training label {ex.label!r} not in class vocabulary")

    dim = cfg.hash_dimension
    feats = _featurize_all(examples, dim)
    labels = np.array([index[ex.label] for ex in examples])
    val_feats = val_labels = None
    if val_examples:
        val_feats = _featurize_all(val_examples, dim)
        val_labels = np.array([index[ex.label] for ex in val_examples])

    params = ModelParams.zeros(class_names, dim)
    rng = np.random.default_rng(cfg.rng_seed)
    n = len(examples)
    lr = cfg.learning_rate
    history = []
    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(n)
        epoch_loss = 0.0
        epoch_hits = 0
        for start in range(0, n, cfg.batch_size):
            chunk = order[start:start + cfg.batch_size]
            inv = 1.0 / len(chunk)
            updates = []
            for row in chunk:
                fv = feats[row]
                y = labels[row]
                scores = _scores(params, fv)
                probs = softmax(scores)
                epoch_loss -= float(np.log(max(probs[y], 1e-300)))
                if int(np.argmax(scores)) == y:
                    epoch_hits += 1
                dscores = probs
                dscores[y] -= 1.0
                updates.append((fv, dscores))
            if cfg.l2:
                params.W *= 1.0 - lr * cfg.l2
            for fv, dscores in updates:
                if fv.nnz():
                    params.W[:, fv.indices] -= (lr * inv) * np.outer(dscores, fv.values)
                params.b -= (lr * inv) * dscores
        if not np.all(np.isfinite(params.W)) or not np.all(np.isfinite(params.b)):
            raise DiscmarkError(
                f"non-finite parameters after epoch {epoch}; "
                f"lr={lr}, l2={cfg.l2}, batch_size={cfg.batch_size}"
            )
        stats = EpochStats(epoch, epoch_loss / n, epoch_hits / n)
        if val_feats is not None:
            hits = sum(
                1 for fv, y in zip(val_feats, val_labels)
                if int(np.argmax(_scores(params, fv))) == y
            )
            stats.val_accuracy = hits / len(val_feats)
        history.append(stats)
        logger.info(
            "epoch %d: train_loss=%.4f train_acc=%.4f val_acc=%s",
            epoch, stats.train_loss, stats.train_accuracy,
            "n/a" if stats.val_accuracy is None else f"{stats.val_accuracy:.4f}",
        )
    return TrainResult(params, history)


def predict(params: ModelParams, s1: str, s2: str):
    """Class distribution and argmax class for one sentence pair.
    Ties break toward the lowest class index."""
    fv = featurize(s1, s2, params.D)
    probs = softmax(_scores(params, fv))
    return probs, params.class_names[int(np.argmax(probs))]


def evaluate_accuracy(params: ModelParams, examples) -> float:
    if not examples:
        raise ValueError("empty evaluation set")
    known = set(params.class_names)
    hits = 0
    for ex in examples:
        if ex.label not in known:
            raise UnknownLabelError(f"gold label {ex.label!r} not in model vocabulary")
        _, top = predict(params, ex.s1, ex.s2)
        hits += top == ex.label
    return hits / len(examples)


def majority_baseline(examples, class_names=None):
    """Most frequent gold class and its frequency; ties break toward the
    lowest index in ``class_names`` (or sorted order when omitted)."""
    if not examples:
        raise ValueError("empty dataset")
    counts: dict[str, int] = {}
    for ex in examples:
        counts[ex.label] = counts.get(ex.label, 0) + 1
    if class_names is None:
        class_names = sorted(counts)
    rank = {name: i for i, name in enumerate(class_names)}
    for label in counts:
        if label not in rank:
            raise UnknownLabelError(f"label {label!r} not in class vocabulary")
    best = min(counts, key=lambda label: (-counts[label], rank[label]))
    return best, counts[best] / len(examples)


MODEL_MAGIC = b"DMMODEL1\n"


def save_model(params: ModelParams, path) -> None:
    """Versioned binary container; float64-lossless and byte-stable."""
    header = json.dumps(
        {"version": 1, "K": params.K, "D": params.D, "class_names": params.class_names},
        ensure_ascii=False, sort_keys=True,
    ).encode("utf-8")
    with open(path, "wb") as f:
        f.write(MODEL_MAGIC)
        f.write(len(header).to_bytes(8, "little"))
        f.write(header)
        f.write(np.ascontiguousarray(params.W, dtype="<f8").tobytes())
        f.write(np.ascontiguousarray(params.b, dtype="<f8").tobytes())


def load_model(path) -> ModelParams:
    with open(path, "rb") as f:
        if f.read(len(MODEL_MAGIC)) != MODEL_MAGIC:
            raise FileFormatError(path, 0, "not a model file")
        hlen = int.from_bytes(f.read(8), "little")
        header = json.loads(f.read(hlen).decode("utf-8"))
        k, d = header["K"], header["D"]
        w = np.frombuffer(f.read(k * d * 8), dtype="<f8").reshape(k, d).copy()
        b = np.frombuffer(f.read(k * 8), dtype="<f8").copy()
    return ModelParams(w, b, list(header["class_names"]))


PREDICTIONS_HEADER = "dataset_id\texample_id\tpredicted_marker\tprobability\tmodel_id"


def export_predictions(params: ModelParams, labeled_examples, path, model_id="linear-ngram") -> int:
    """Predict a marker for every labeled example and write interchange
    records in input order; returns the number written."""
    records = []
    for ex in labeled_examples:
        probs, top = predict(params, ex.s1, ex.s2)
        records.append(PredictionRecord(ex.dataset_id, ex.example_id, top,
                                        float(probs.max()), model_id))
    return write_predictions(records, path)


def write_predictions(records, path) -> int:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(PREDICTIONS_HEADER + "\n")
        for r in records:
            f.write(f"{r.dataset_id}\t{r.example_id}\t{r.predicted_marker}"
                    f"\t{r.probability:.6f}\t{r.model_id}\n")
    return len(records)


def import_predictions(path, known_vocabulary) -> list[PredictionRecord]:
    """Read an interchange file, validating markers against
    ``known_vocabulary`` (a collection of class names)."""
    known = set(known_vocabulary)
    out = []
    with open(path, encoding="utf-8") as f:
        header = f.readline().rstrip("\n")
        if header != PREDICTIONS_HEADER:
            raise FileFormatError(path, 1, f"bad header {header!r}")
        for line_no, line in enumerate(f, 2):
            line = line.rstrip("\n")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 5:
                raise FileFormatError(path, line_no, f"expected 5 columns, found {len(cols)}")
            dataset_id, example_id, marker, prob_text, model_id = cols
            if marker not in known:
                raise UnknownLabelError(f"{path}:{line_no}: unknown marker {marker!r}")
            try:
                prob = float(prob_text)
            except ValueError:
                raise FileFormatError(path, line_no, f"bad probability {prob_text!r}") from None
            if not 0.0 < prob <= 1.0:
                raise FileFormatError(path, line_no, f"probability outside (0, 1]: {prob}")
            out.append(PredictionRecord(dataset_id, example_id, marker, prob, model_id))
    return out
