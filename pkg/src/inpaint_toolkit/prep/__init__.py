from .filtering import FilterReport, filter_other_interesting, is_topic_shift_question
from .ingest import CorpusIngestor, IngestReport, SourceFormat, ingest_corpus
from .masking import TrainingExample, sample_mask, serialize_training_example
from .sentinels import SentinelVocabulary, parse_sentinel_output, sentinel
from .training_set import (
    build_training_set,
    derive_rng,
    group_variants,
    save_training_set,
    training_example_to_record,
)

__all__ = [
    "CorpusIngestor",
    "FilterReport",
    "IngestReport",
    "SentinelVocabulary",
    "SourceFormat",
    "TrainingExample",
    "build_training_set",
    "derive_rng",
    "filter_other_interesting",
    "group_variants",
    "ingest_corpus",
    "is_topic_shift_question",
    "parse_sentinel_output",
    "sample_mask",
    "save_training_set",
    "sentinel",
    "serialize_training_example",
    "training_example_to_record",
]
