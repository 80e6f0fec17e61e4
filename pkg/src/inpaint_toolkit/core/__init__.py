from .config import (
    BackendSettings,
    EvaluationSettings,
    PrepConfig,
    QuestionTypePolicy,
    RetrievalSettings,
    RunConfig,
    SplitterConfig,
    StageConfig,
    SynthesisConfig,
)
from .corpus import (
    document_from_text,
    load_dialogs,
    load_documents,
    save_dialogs,
    save_documents,
    validate_dialog,
    validate_document,
)
from .models import Dialog, DialogSource, Document, MaskSpec, QuestionType, RubricKind, SegmentedAnswer, Turn
from .sentences import normalize_whitespace, split_sentences

__all__ = [
    "BackendSettings",
    "Dialog",
    "DialogSource",
    "Document",
    "EvaluationSettings",
    "MaskSpec",
    "PrepConfig",
    "QuestionType",
    "QuestionTypePolicy",
    "RetrievalSettings",
    "RubricKind",
    "RunConfig",
    "SegmentedAnswer",
    "SplitterConfig",
    "StageConfig",
    "SynthesisConfig",
    "Turn",
    "document_from_text",
    "load_dialogs",
    "load_documents",
    "normalize_whitespace",
    "save_dialogs",
    "save_documents",
    "split_sentences",
    "validate_dialog",
    "validate_document",
]
