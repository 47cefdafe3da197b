"""Index of precomputed image feature vectors with comparative queries.

Vectors arrive as data (CSV with header image_id,account,tweet_id,v0..v511);
the convolutional extractor that produced them is outside this package —
docs/image_vectors.md describes the expected preprocessing. Queries return
the top-k cosine matches per source partition (real vs suspicious).
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import AccountRegistry, LABELS

logger = logging.getLogger(__name__)

VECTOR_DIM = 512


class ImageIndexError(ValueError):
    pass


@dataclass(frozen=True)
class ImageFeature:
    image_id: str
    tweet_id: str
    account_id: str
    label: str
    vector: np.ndarray

    def __eq__(self, other) -> bool:
        if not isinstance(other, ImageFeature):
            return NotImplemented
        return (
            self.image_id == other.image_id
            and self.tweet_id == other.tweet_id
            and self.account_id == other.account_id
            and self.label == other.label
            and np.array_equal(self.vector, other.vector)
        )


@dataclass(frozen=True)
class ImageSimilarityResult:
    image_id: str
    score: float
    account_id: str
    label: str
    tweet_id: str
    tweet_text: str | None = None


class ImageIndex:
    def __init__(self, features: list[ImageFeature], skipped: int = 0):
        self.features = {f.image_id: f for f in features}
        if len(self.features) != len(features):
            raise ImageIndexError("duplicate image_id in feature file")
        self.skipped = skipped
        self._partition_ids: dict[str, list[str]] = {label: [] for label in LABELS}
        for feature in sorted(features, key=lambda f: f.image_id):
            self._partition_ids[feature.label].append(feature.image_id)
        self._matrices = {
            label: np.stack([self.features[i].vector for i in ids])
            if ids
            else np.zeros((0, VECTOR_DIM))
            for label, ids in self._partition_ids.items()
        }
        self._normalized = {
            label: matrix / np.linalg.norm(matrix, axis=1, keepdims=True)
            if len(matrix)
            else matrix
            for label, matrix in self._matrices.items()
        }

    def __len__(self) -> int:
        return len(self.features)

    def __contains__(self, image_id: str) -> bool:
        return image_id in self.features

    def partition_size(self, label: str) -> int:
        return len(self._partition_ids[label])

    def image_ids(self, label: str | None = None) -> list[str]:
        if label is None:
            return sorted(self.features)
        return list(self._partition_ids[label])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ImageIndex):
            return NotImplemented
        return self.features == other.features


def load_image_features(
    path: str | Path, registry: AccountRegistry, strict: bool = False
) -> ImageIndex:
    """Read the vector CSV, keyed by image_id and partitioned by label.

    Wrong-dimension rows and all-zero vectors are always errors; rows
    naming an unregistered account are skipped with a warning unless
    strict is set.
    """
    features: list[ImageFeature] = []
    skipped = 0
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return ImageIndex([])
        expected = ["image_id", "account", "tweet_id"] + [
            f"v{i}" for i in range(VECTOR_DIM)
        ]
        if header != expected:
            raise ImageIndexError(
                f"{path}: bad header; expected image_id,account,tweet_id,"
                f"v0..v{VECTOR_DIM - 1}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3 + VECTOR_DIM:
                raise ImageIndexError(
                    f"{path}:{lineno}: expected {VECTOR_DIM} vector components, "
                    f"got {len(row) - 3}"
                )
            image_id, handle, tweet_id = row[0], row[1], row[2]
            vector = np.asarray([float(x) for x in row[3:]], dtype=np.float64)
            if not np.any(vector):
                raise ImageIndexError(f"{path}:{lineno}: all-zero vector {image_id}")
            account = registry.get(handle)
            if account is None:
                if strict:
                    raise ImageIndexError(
                        f"{path}:{lineno}: unregistered account {handle!r}"
                    )
                skipped += 1
                logger.warning(
                    "skipping image %s: unregistered account %r", image_id, handle
                )
                continue
            features.append(
                ImageFeature(
                    image_id=image_id,
                    tweet_id=tweet_id,
                    account_id=account.id,
                    label=account.label,
                    vector=vector,
                )
            )
    return ImageIndex(features, skipped=skipped)


def _cosine(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)))


def top_similar_images(
    index: ImageIndex,
    query_id: str,
    k: int = 10,
    fast: bool = True,
) -> dict[str, list[ImageSimilarityResult]]:
    """Per-partition top-k images by cosine to the query vector.

    The query image never appears in its own results. fast=True uses the
    pre-normalized dot-product path; fast=False is the plain scan. Both
    must rank identically.
    """
    if query_id not in index:
        raise ImageIndexError(f"unknown image id: {query_id!r}")
    query = index.features[query_id].vector
    results: dict[str, list[ImageSimilarityResult]] = {}
    for label in LABELS:
        ids = index._partition_ids[label]
        if fast and ids:
            q_normed = query / np.linalg.norm(query)
            scores = index._normalized[label] @ q_normed
            scored = list(zip(ids, scores.tolist()))
        else:
            scored = [
                (image_id, _cosine(index.features[image_id].vector, query))
                for image_id in ids
            ]
        scored = [(i, s) for i, s in scored if i != query_id]
        scored.sort(key=lambda item: (-item[1], item[0]))
        results[label] = [
            ImageSimilarityResult(
                image_id=image_id,
                score=score,
                account_id=index.features[image_id].account_id,
                label=label,
                tweet_id=index.features[image_id].tweet_id,
            )
            for image_id, score in scored[:k]
        ]
    return results
