import logging
import statistics
from collections.abc import Mapping, Sequence
from pathlib import Path

from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict

from ..exceptions import ParseError, ValidationError
from ..utils.json_handler import read_jsonl
from .similarity import rank_passages

logger = logging.getLogger(__name__)


class RetrievalScores(BaseModel):
    model_config = ConfigDict(frozen=True)

    queries: int
    misses: int
    k: int | None
    mrr_at_k: float
    mrr: float


class RunSummary(BaseModel):
    """Mean and sample standard deviation of a metric over repeated runs."""

    model_config = ConfigDict(frozen=True)

    runs: int
    mean: float
    std: float

    def __str__(self) -> str:
        return f"{self.mean:.3f} ({self.std:.3f})"


def mrr_at_k(gold_ranks: Sequence[int | None], k: int | None = None) -> float:
    """Mean reciprocal rank with an optional cutoff.

    Args:
        gold_ranks: 1-based rank of the gold passage per query, ``None`` for a miss
        k: Ranks beyond ``k`` score 0; ``None`` means no cutoff

    Raises:
        ValidationError: If there are no queries, a rank is below 1 or k is below 1
    """
    if not gold_ranks:
        raise ValidationError("MRR needs at least one query")
    if k is not None and k < 1:
        raise ValidationError(f"Cutoff must be at least 1, got {k}")
    total = 0.0
    for rank in gold_ranks:
        if rank is None:
            continue
        if rank < 1:
            raise ValidationError(f"Ranks are 1-based, got {rank}")
        if k is None or rank <= k:
            total += 1.0 / rank
    return total / len(gold_ranks)


def evaluate_retrieval(
    query_embs: Mapping[str, ArrayLike],
    passage_embs: Mapping[str, ArrayLike],
    relevance: Mapping[str, str],
    k: int | None = 5,
) -> RetrievalScores:
    """Rank every candidate passage for each judged query and score the gold ranks.

    A query whose gold passage is not among the candidates counts as a miss.

    Raises:
        ValidationError: If no judged query has an embedding or there are no candidates
    """
    passage_ids = list(passage_embs)
    if not passage_ids:
        raise ValidationError("No candidate passages")
    candidates = [passage_embs[passage_id] for passage_id in passage_ids]

    ranks: list[int | None] = []
    for query_id, gold_id in relevance.items():
        if query_id not in query_embs:
            logger.warning(f"No embedding for judged query {query_id}; skipping")
            continue
        if gold_id not in passage_embs:
            ranks.append(None)
            continue
        order = rank_passages(query_embs[query_id], candidates)
        ranks.append(order.index(passage_ids.index(gold_id)) + 1)

    scores = RetrievalScores(
        queries=len(ranks),
        misses=sum(1 for rank in ranks if rank is None),
        k=k,
        mrr_at_k=mrr_at_k(ranks, k),
        mrr=mrr_at_k(ranks, None),
    )
    logger.info(f"MRR@{k}={scores.mrr_at_k:.4f} MRR={scores.mrr:.4f} over {scores.queries} queries")
    return scores


def summarize_runs(scores: Sequence[float]) -> RunSummary:
    """Summarize a metric over repeated runs; a single run has standard deviation 0."""
    if not scores:
        raise ValidationError("At least one run is required")
    std = statistics.stdev(scores) if len(scores) > 1 else 0.0
    return RunSummary(runs=len(scores), mean=statistics.fmean(scores), std=std)


def load_embeddings(path: str | Path, id_field: str) -> dict[str, list[float]]:
    """Read ``{id_field: ..., "values": [...]}`` records into an id-to-vector mapping."""
    embeddings: dict[str, list[float]] = {}
    for line_number, record in read_jsonl(path):
        try:
            key = str(record[id_field])
            values = [float(value) for value in record["values"]]
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"{path}:{line_number}: bad embedding record: {e}", line_number, str(path), e) from e
        if key in embeddings:
            raise ParseError(f"{path}:{line_number}: duplicate id {key}", line_number, str(path))
        embeddings[key] = values
    return embeddings


def load_relevance(path: str | Path) -> dict[str, str]:
    """Read ``{"query_id", "gold_passage_id"}`` records."""
    relevance: dict[str, str] = {}
    for line_number, record in read_jsonl(path):
        try:
            relevance[str(record["query_id"])] = str(record["gold_passage_id"])
        except (KeyError, TypeError) as e:
            raise ParseError(f"{path}:{line_number}: bad relevance record: {e}", line_number, str(path), e) from e
    return relevance
