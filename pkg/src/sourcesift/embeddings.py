"""Skip-gram word vectors with negative sampling, one model per partition.

Training is plain SGD over (center, contexts) positions: for each center
word the surrounding window supplies positive pairs and the unigram^0.75
distribution supplies negatives. The update order, the sampling sequence,
and the initialization are all fixed by the config seed, so identical
inputs give identical models.

Model files: little-endian binary, layout documented in
docs/embedding_format.md and enforced by save_model/load_model below.
"""

from __future__ import annotations

import json
import struct
from collections import Counter
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

MAGIC = b"SSEM"
FORMAT_VERSION = 1


class VocabularyError(ValueError):
    pass


class TrainingError(ValueError):
    pass


class OutOfVocabulary(KeyError):
    """Query token absent from a partition's vocabulary."""

    def __init__(self, token: str, partition: str):
        super().__init__(token)
        self.token = token
        self.partition = partition

    def __str__(self) -> str:
        return f"no data for {self.token!r} in partition {self.partition!r}"


@dataclass(frozen=True)
class Vocabulary:
    tokens: tuple[str, ...]  # id -> token, ordered by (frequency desc, token asc)
    frequencies: tuple[int, ...]
    min_count: int

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {t: i for i, t in enumerate(self.tokens)}
        )

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def id_of(self, token: str) -> int:
        return self._index[token]


def build_vocab(sentences: list[list[str]], min_count: int) -> Vocabulary:
    counts: Counter[str] = Counter()
    for sentence in sentences:
        counts.update(sentence)
    if not counts:
        raise VocabularyError("empty token stream")
    kept = sorted(
        ((t, c) for t, c in counts.items() if c >= min_count),
        key=lambda item: (-item[1], item[0]),
    )
    if not kept:
        raise VocabularyError(
            f"no token reaches min_count={min_count} (max frequency "
            f"{max(counts.values())})"
        )
    return Vocabulary(
        tokens=tuple(t for t, _ in kept),
        frequencies=tuple(c for _, c in kept),
        min_count=min_count,
    )


@dataclass(frozen=True)
class TrainingConfig:
    dimension: int = 100
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_lr_fraction: float = 1e-4
    seed: int = 1
    min_count: int = 5

    def validate(self) -> None:
        if self.dimension < 2:
            raise TrainingError("dimension must be >= 2")
        if self.window < 1:
            raise TrainingError("window must be >= 1")
        if self.negatives < 1:
            raise TrainingError("negatives must be >= 1")
        if self.epochs < 1:
            raise TrainingError("epochs must be >= 1")
        if self.learning_rate < 0:
            raise TrainingError("learning_rate must be >= 0")


@dataclass
class EmbeddingModel:
    partition: str
    vocab: Vocabulary
    vectors_in: np.ndarray  # (V, d) float32
    vectors_out: np.ndarray
    config: TrainingConfig
    epoch_losses: list[float] = field(default_factory=list)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmbeddingModel):
            return NotImplemented
        return (
            self.partition == other.partition
            and self.vocab == other.vocab
            and self.config == other.config
            and np.array_equal(self.vectors_in, other.vectors_in)
            and np.array_equal(self.vectors_out, other.vectors_out)
        )


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def position_loss(
    vectors_in: np.ndarray,
    vectors_out: np.ndarray,
    center: int,
    context_ids: np.ndarray,
    negative_ids: np.ndarray,
) -> float:
    """Negative log-likelihood of one (center, contexts, negatives) batch."""
    v = vectors_in[center]
    pos_scores = vectors_out[context_ids] @ v
    neg_scores = vectors_out[negative_ids] @ v
    loss = np.logaddexp(0.0, -pos_scores).sum() + np.logaddexp(0.0, neg_scores).sum()
    return float(loss)


def position_gradients(
    vectors_in: np.ndarray,
    vectors_out: np.ndarray,
    center: int,
    context_ids: np.ndarray,
    negative_ids: np.ndarray,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Loss and dense gradients w.r.t. both parameter matrices.

    Gradient matrices come back in the full (V, d) shape with zeros for
    untouched rows; duplicate context/negative rows accumulate. This is
    the exact math the SGD step applies, and what the finite-difference
    tests probe.
    """
    v = vectors_in[center]
    rows = np.concatenate([context_ids, negative_ids])
    labels = np.concatenate(
        [np.ones(len(context_ids)), np.zeros(len(negative_ids))]
    ).astype(vectors_in.dtype)
    u = vectors_out[rows]
    scores = u @ v
    errors = _sigmoid(scores) - labels  # dL/dscore
    grad_in = np.zeros_like(vectors_in)
    grad_in[center] = errors @ u
    grad_out = np.zeros_like(vectors_out)
    np.add.at(grad_out, rows, errors[:, None] * v[None, :])
    loss = position_loss(vectors_in, vectors_out, center, context_ids, negative_ids)
    return loss, grad_in, grad_out


def initial_vectors(
    config: TrainingConfig, vocab_size: int
) -> tuple[np.ndarray, np.ndarray, np.random.Generator]:
    """Seeded initialization; the returned generator continues the stream."""
    rng = np.random.default_rng(config.seed)
    vectors_in = (
        (rng.random((vocab_size, config.dimension)) - 0.5) / config.dimension
    ).astype(np.float32)
    vectors_out = np.zeros((vocab_size, config.dimension), dtype=np.float32)
    return vectors_in, vectors_out, rng


def _sampling_table(vocab: Vocabulary) -> np.ndarray:
    weights = np.asarray(vocab.frequencies, dtype=np.float64) ** 0.75
    return np.cumsum(weights / weights.sum())


def train_skipgram(
    sentences: list[list[str]],
    config: TrainingConfig,
    partition: str = "",
    vocab: Vocabulary | None = None,
) -> EmbeddingModel:
    """Train SGNS vectors over tokenized sentences.

    Tokens below min_count are dropped and sentences compacted before
    windowing, the usual skip-gram convention.
    """
    config.validate()
    if vocab is None:
        vocab = build_vocab(sentences, config.min_count)
    encoded = []
    for sentence in sentences:
        ids = [vocab.id_of(t) for t in sentence if t in vocab]
        if len(ids) >= 2:
            encoded.append(np.asarray(ids, dtype=np.int64))
    vectors_in, vectors_out, rng = initial_vectors(config, len(vocab))
    cumulative = _sampling_table(vocab)

    positions_per_epoch = sum(len(s) for s in encoded)
    total_positions = max(1, positions_per_epoch * config.epochs)
    lr0 = config.learning_rate
    lr_floor = lr0 * config.min_lr_fraction
    processed = 0
    epoch_losses: list[float] = []

    for _ in range(config.epochs):
        epoch_loss = 0.0
        epoch_pairs = 0
        for sentence in encoded:
            n = len(sentence)
            for t in range(n):
                center = int(sentence[t])
                lo = max(0, t - config.window)
                hi = min(n, t + config.window + 1)
                context_ids = np.concatenate(
                    [sentence[lo:t], sentence[t + 1 : hi]]
                )
                processed += 1
                if len(context_ids) == 0:
                    continue
                draws = rng.random(len(context_ids) * config.negatives)
                negative_ids = np.searchsorted(cumulative, draws, side="right")
                # word2vec convention: drop negatives that hit a true context
                # word of this position.
                repeated = np.repeat(context_ids, config.negatives)
                negative_ids = negative_ids[negative_ids != repeated]

                lr = max(lr_floor, lr0 * (1.0 - processed / total_positions))
                v = vectors_in[center].copy()
                rows = np.concatenate([context_ids, negative_ids])
                labels = np.concatenate(
                    [np.ones(len(context_ids)), np.zeros(len(negative_ids))]
                ).astype(np.float32)
                u = vectors_out[rows]
                scores = (u @ v).astype(np.float32)
                errors = _sigmoid(scores) - labels
                epoch_loss += float(
                    np.logaddexp(0.0, -scores[: len(context_ids)]).sum()
                    + np.logaddexp(0.0, scores[len(context_ids) :]).sum()
                )
                epoch_pairs += len(rows)
                vectors_in[center] -= lr * (errors @ u)
                np.subtract.at(
                    vectors_out, rows, (lr * errors)[:, None] * v[None, :]
                )
        epoch_losses.append(epoch_loss / max(1, epoch_pairs))
    return EmbeddingModel(
        partition=partition,
        vocab=vocab,
        vectors_in=vectors_in,
        vectors_out=vectors_out,
        config=config,
        epoch_losses=epoch_losses,
    )


def cosine_matrix_scores(vectors: np.ndarray, query_vector: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(vectors, axis=1)
    norms = np.where(norms == 0.0, 1.0, norms)
    q_norm = np.linalg.norm(query_vector)
    if q_norm == 0.0:
        q_norm = 1.0
    return (vectors @ query_vector) / (norms * q_norm)


def nearest_words(
    model: EmbeddingModel, query: str, k: int = 10
) -> list[tuple[str, float]]:
    """Top-k vocabulary tokens by cosine to the query's input vector.

    The query itself is excluded; ties break by token ascending. Raises
    OutOfVocabulary when the partition never saw the token.
    """
    if query not in model.vocab:
        raise OutOfVocabulary(query, model.partition)
    qid = model.vocab.id_of(query)
    scores = cosine_matrix_scores(
        model.vectors_in.astype(np.float64), model.vectors_in[qid].astype(np.float64)
    )
    order = sorted(
        (i for i in range(len(model.vocab)) if i != qid),
        key=lambda i: (-scores[i], model.vocab.tokens[i]),
    )
    return [(model.vocab.tokens[i], float(scores[i])) for i in order[:k]]


@dataclass
class PartitionNeighbors:
    partition: str
    neighbors: list[tuple[str, float]]
    missing_reason: str | None = None


def compare_entity_words(
    models: dict[str, EmbeddingModel], query: str, k: int = 10
) -> dict[str, PartitionNeighbors]:
    """Side-by-side nearest words from every partition model.

    Multi-word queries are joined the same way training streams join
    entity phrases ("north korea" -> "north_korea"). A partition missing
    the query yields an explicit empty result with a reason; only a query
    missing from every partition raises.
    """
    token = "_".join(query.lower().split())
    results = {}
    hits = 0
    for partition in sorted(models):
        model = models[partition]
        try:
            neighbors = nearest_words(model, token, k=k)
            results[partition] = PartitionNeighbors(partition, neighbors)
            hits += 1
        except OutOfVocabulary as exc:
            results[partition] = PartitionNeighbors(
                partition, [], missing_reason=str(exc)
            )
    if hits == 0:
        raise OutOfVocabulary(token, ",".join(sorted(models)))
    return results


def save_model(model: EmbeddingModel, path: str | Path) -> None:
    header = {
        "partition": model.partition,
        "dimension": model.config.dimension,
        "vocab_size": len(model.vocab),
        "config": asdict(model.config),
        "epoch_losses": model.epoch_losses,
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", FORMAT_VERSION))
        fh.write(struct.pack("<I", len(header_bytes)))
        fh.write(header_bytes)
        for token, freq in zip(model.vocab.tokens, model.vocab.frequencies):
            raw = token.encode("utf-8")
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)
            fh.write(struct.pack("<Q", freq))
        fh.write(np.ascontiguousarray(model.vectors_in, dtype="<f4").tobytes())
        fh.write(np.ascontiguousarray(model.vectors_out, dtype="<f4").tobytes())


def load_model(path: str | Path) -> EmbeddingModel:
    with open(path, "rb") as fh:
        if fh.read(4) != MAGIC:
            raise TrainingError(f"{path}: not an embedding model file")
        (version,) = struct.unpack("<I", fh.read(4))
        if version != FORMAT_VERSION:
            raise TrainingError(
                f"{path}: unsupported model format version {version}"
            )
        (header_len,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(header_len).decode("utf-8"))
        tokens = []
        freqs = []
        for _ in range(header["vocab_size"]):
            (token_len,) = struct.unpack("<I", fh.read(4))
            tokens.append(fh.read(token_len).decode("utf-8"))
            (freq,) = struct.unpack("<Q", fh.read(8))
            freqs.append(freq)
        config = TrainingConfig(**header["config"])
        vocab = Vocabulary(tuple(tokens), tuple(freqs), config.min_count)
        count = header["vocab_size"] * header["dimension"]
        vectors_in = np.frombuffer(fh.read(count * 4), dtype="<f4").reshape(
            header["vocab_size"], header["dimension"]
        ).copy()
        vectors_out = np.frombuffer(fh.read(count * 4), dtype="<f4").reshape(
            header["vocab_size"], header["dimension"]
        ).copy()
    return EmbeddingModel(
        partition=header["partition"],
        vocab=vocab,
        vectors_in=vectors_in,
        vectors_out=vectors_out,
        config=config,
        epoch_losses=list(header.get("epoch_losses", [])),
    )
