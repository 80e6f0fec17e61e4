from .analytics import CorpusStats, RougeScores, corpus_stats, qa_overlap_report, rouge_l, rouge_n
from .core import (
    BackendSettings,
    Dialog,
    DialogSource,
    Document,
    EvaluationSettings,
    MaskSpec,
    PrepConfig,
    QuestionType,
    RubricKind,
    RunConfig,
    SegmentedAnswer,
    SplitterConfig,
    StageConfig,
    SynthesisConfig,
    Turn,
    load_dialogs,
    load_documents,
    save_dialogs,
    save_documents,
    split_sentences,
    validate_dialog,
)
from .evaluation import (
    JudgmentStore,
    RubricJudgment,
    aggregate_majority,
    judge_corpus,
    parse_judgment,
    render_prompt,
    tabulate,
    two_proportion_z_test,
)
from .exceptions import (
    BackendError,
    ConfigError,
    CorpusError,
    DegenerateEmbedding,
    DegenerateTest,
    EvaluationError,
    GenerationError,
    InpaintToolkitError,
    InvalidInput,
    MalformedGeneration,
    ParseError,
    RetrievalError,
    StubExhausted,
    SynthesisError,
    TrainingError,
    UnparseableJudgment,
    ValidationError,
)
from .prep import (
    TrainingExample,
    build_training_set,
    filter_other_interesting,
    ingest_corpus,
    parse_sentinel_output,
    serialize_training_example,
)
from .retrieval import (
    RetrievalExample,
    build_query_text,
    cosine_similarity,
    in_batch_contrastive_loss,
    mrr_at_k,
    rank_passages,
    run_stage,
)
from .synthesis import SynthesisTrace, build_inference_window, inpaint_document, scripted_stub, segment_from_fills
from .utils.json_handler import CustomJSONEncoder, JSONHandler

__all__ = [
    # Configuration
    "BackendSettings",
    "EvaluationSettings",
    "PrepConfig",
    "RunConfig",
    "SplitterConfig",
    "StageConfig",
    "SynthesisConfig",
    # Corpus model
    "Dialog",
    "DialogSource",
    "Document",
    "MaskSpec",
    "QuestionType",
    "RubricKind",
    "SegmentedAnswer",
    "Turn",
    "load_dialogs",
    "load_documents",
    "save_dialogs",
    "save_documents",
    "split_sentences",
    "validate_dialog",
    # Data preparation
    "TrainingExample",
    "build_training_set",
    "filter_other_interesting",
    "ingest_corpus",
    "parse_sentinel_output",
    "serialize_training_example",
    # Synthesis
    "SynthesisTrace",
    "build_inference_window",
    "inpaint_document",
    "scripted_stub",
    "segment_from_fills",
    # Retrieval
    "RetrievalExample",
    "build_query_text",
    "cosine_similarity",
    "in_batch_contrastive_loss",
    "mrr_at_k",
    "rank_passages",
    "run_stage",
    # Evaluation
    "JudgmentStore",
    "RubricJudgment",
    "aggregate_majority",
    "judge_corpus",
    "parse_judgment",
    "render_prompt",
    "tabulate",
    "two_proportion_z_test",
    # Analytics
    "CorpusStats",
    "RougeScores",
    "corpus_stats",
    "qa_overlap_report",
    "rouge_l",
    "rouge_n",
    # JSON
    "CustomJSONEncoder",
    "JSONHandler",
    # Exceptions
    "BackendError",
    "ConfigError",
    "CorpusError",
    "DegenerateEmbedding",
    "DegenerateTest",
    "EvaluationError",
    "GenerationError",
    "InpaintToolkitError",
    "InvalidInput",
    "MalformedGeneration",
    "ParseError",
    "RetrievalError",
    "StubExhausted",
    "SynthesisError",
    "TrainingError",
    "UnparseableJudgment",
    "ValidationError",
]
