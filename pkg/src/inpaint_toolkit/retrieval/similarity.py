"""Cosine similarity, contrastive losses and ranking for dual encoders."""

from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import logsumexp

from ..exceptions import ConfigError, DegenerateEmbedding, ValidationError

Embedding = Sequence[float] | NDArray[np.float64]


def _as_vector(values: ArrayLike) -> NDArray[np.float64]:
    vector = np.asarray(values, dtype=np.float64)
    if vector.ndim != 1 or vector.size == 0:
        raise ValidationError(f"Embedding must be a non-empty 1-d vector, got shape {vector.shape}")
    if not np.all(np.isfinite(vector)):
        raise DegenerateEmbedding("Embedding has non-finite entries")
    return vector


def _normalized_rows(embeddings: Sequence[ArrayLike]) -> NDArray[np.float64]:
    if len(embeddings) == 0:
        raise ValidationError("At least one embedding is required")
    vectors = [_as_vector(values) for values in embeddings]
    dims = {vector.size for vector in vectors}
    if len(dims) != 1:
        raise ValidationError(f"Embeddings have mismatched dimensions: {sorted(dims)}")
    matrix = np.vstack(vectors)
    norms = np.linalg.norm(matrix, axis=1)
    if np.any(norms == 0.0):
        raise DegenerateEmbedding("Embedding has zero norm")
    return matrix / norms[:, None]


def cosine_similarity(q: ArrayLike, p: ArrayLike) -> float:
    """Cosine of the angle between two embeddings, in [-1, 1].

    Raises:
        DegenerateEmbedding: If either vector is zero or has non-finite entries
        ValidationError: If the dimensions differ
    """
    q_vec, p_vec = _as_vector(q), _as_vector(p)
    if q_vec.size != p_vec.size:
        raise ValidationError(f"Dimension mismatch: {q_vec.size} vs {p_vec.size}")
    q_norm, p_norm = np.linalg.norm(q_vec), np.linalg.norm(p_vec)
    if q_norm == 0.0 or p_norm == 0.0:
        raise DegenerateEmbedding("Embedding has zero norm")
    return float(np.clip(np.dot(q_vec, p_vec) / (q_norm * p_norm), -1.0, 1.0))


def similarity_matrix(query_embs: Sequence[ArrayLike], passage_embs: Sequence[ArrayLike]) -> NDArray[np.float64]:
    """Pairwise cosine similarities, shape ``(len(queries), len(passages))``."""
    queries = _normalized_rows(query_embs)
    passages = _normalized_rows(passage_embs)
    if queries.shape[1] != passages.shape[1]:
        raise ValidationError(f"Dimension mismatch: {queries.shape[1]} vs {passages.shape[1]}")
    return np.clip(queries @ passages.T, -1.0, 1.0)


def _check_temperature(temperature: float) -> None:
    if not temperature > 0:
        raise ConfigError(f"Temperature must be positive, got {temperature}")


def in_batch_contrastive_loss(
    query_embs: Sequence[ArrayLike], passage_embs: Sequence[ArrayLike], temperature: float
) -> tuple[float, NDArray[np.float64]]:
    """Softmax cross-entropy where each query's positive is its own passage and the
    other passages of the batch act as negatives.

    Returns:
        The mean loss and the per-example losses

    Raises:
        ConfigError: If the temperature is not positive
        ValidationError: If the batch is empty or queries and passages differ in count
        DegenerateEmbedding: If any embedding is zero or non-finite
    """
    _check_temperature(temperature)
    if len(query_embs) != len(passage_embs):
        raise ValidationError(f"Batch has {len(query_embs)} queries but {len(passage_embs)} passages")
    logits = similarity_matrix(query_embs, passage_embs) / temperature
    losses = logsumexp(logits, axis=1) - np.diag(logits)
    losses = np.maximum(losses, 0.0)
    return float(losses.mean()), losses


def annotated_loss(
    query_emb: ArrayLike, positive_emb: ArrayLike, negative_embs: Sequence[ArrayLike], temperature: float
) -> float:
    """Softmax cross-entropy of the positive against its annotated negatives only."""
    _check_temperature(temperature)
    logits = similarity_matrix([query_emb], [positive_emb, *negative_embs])[0] / temperature
    return max(float(logsumexp(logits) - logits[0]), 0.0)


def rank_passages(query_emb: ArrayLike, passage_embs: Sequence[ArrayLike]) -> list[int]:
    """Passage indices by descending similarity; ties keep ascending index order."""
    similarities = similarity_matrix([query_emb], passage_embs)[0]
    return [int(index) for index in np.argsort(-similarities, kind="stable")]
