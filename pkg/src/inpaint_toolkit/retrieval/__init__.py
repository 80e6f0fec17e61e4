from .backends import EncoderBackend, HashingEncoder, OpenAIEncoder
from .examples import RetrievalExample, build_query_text, dialogs_to_retrieval_examples, load_annotated_examples
from .metrics import (
    RetrievalScores,
    RunSummary,
    evaluate_retrieval,
    load_embeddings,
    load_relevance,
    mrr_at_k,
    summarize_runs,
)
from .similarity import (
    annotated_loss,
    cosine_similarity,
    in_batch_contrastive_loss,
    rank_passages,
    similarity_matrix,
)
from .training import LossBatch, NegativeMode, StageReport, TwoStageReport, run_stage, run_two_stage

__all__ = [
    "EncoderBackend",
    "HashingEncoder",
    "LossBatch",
    "NegativeMode",
    "OpenAIEncoder",
    "RetrievalExample",
    "RetrievalScores",
    "RunSummary",
    "StageReport",
    "TwoStageReport",
    "annotated_loss",
    "build_query_text",
    "cosine_similarity",
    "dialogs_to_retrieval_examples",
    "evaluate_retrieval",
    "in_batch_contrastive_loss",
    "load_annotated_examples",
    "load_embeddings",
    "load_relevance",
    "mrr_at_k",
    "rank_passages",
    "run_stage",
    "run_two_stage",
    "similarity_matrix",
    "summarize_runs",
]
