"""Unit tests for the exception hierarchy."""

import pytest

from inpaint_toolkit.exceptions import (
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


class TestExceptionHierarchy:
    """Test exception classes inherit from the right family."""

    @pytest.mark.parametrize(
        ("error_class", "family"),
        [
            (InvalidInput, CorpusError),
            (ParseError, CorpusError),
            (ValidationError, CorpusError),
            (MalformedGeneration, GenerationError),
            (StubExhausted, GenerationError),
            (SynthesisError, GenerationError),
            (DegenerateEmbedding, RetrievalError),
            (TrainingError, RetrievalError),
            (UnparseableJudgment, EvaluationError),
            (DegenerateTest, EvaluationError),
            (ConfigError, InpaintToolkitError),
            (BackendError, InpaintToolkitError),
        ],
    )
    def test_inheritance(self, error_class, family):
        """Test each error belongs to its family and to the toolkit base."""
        assert issubclass(error_class, family)
        assert issubclass(error_class, InpaintToolkitError)
        assert issubclass(error_class, Exception)


class TestExceptionAttributes:
    """Test the context carried by exceptions."""

    def test_parse_error_defaults(self):
        """Test ParseError with only a message."""
        error = ParseError("bad record")

        assert str(error) == "bad record"
        assert error.line_number is None
        assert error.path is None
        assert error.original_error is None

    def test_parse_error_all_params(self):
        """Test ParseError with all parameters."""
        original_error = ValueError("Expecting value")
        error = ParseError("bad record", line_number=7, path="corpus.jsonl", original_error=original_error)

        assert error.line_number == 7
        assert error.path == "corpus.jsonl"
        assert error.original_error is original_error

    def test_validation_error_violations(self):
        """Test ValidationError keeps its list of violations."""
        assert ValidationError("invalid").violations == []
        assert ValidationError("invalid", ["turn 1 is empty"]).violations == ["turn 1 is empty"]

    def test_malformed_generation_output(self):
        """Test MalformedGeneration keeps the offending output."""
        error = MalformedGeneration("missing sentinel", "<S1> Q?")
        assert error.output_text == "<S1> Q?"

    def test_synthesis_error_trace(self):
        """Test SynthesisError carries its trace and cause."""
        cause = StubExhausted("empty")
        error = SynthesisError("failed", trace={"windows": []}, original_error=cause)

        assert error.trace == {"windows": []}
        assert error.original_error is cause

    def test_training_error_iteration(self):
        """Test TrainingError records the failing iteration."""
        error = TrainingError("nan loss", iteration=3)

        assert error.iteration == 3
        assert error.original_error is None

    def test_backend_and_unparseable(self):
        """Test BackendError and UnparseableJudgment context attributes."""
        cause = OSError("connection reset")
        assert BackendError("down", cause).original_error is cause
        assert UnparseableJudgment("no option", response_text="Maybe").response_text == "Maybe"

    def test_catch_by_family(self):
        """Test errors can be caught by their family."""
        with pytest.raises(CorpusError):
            raise ParseError("bad")
        with pytest.raises(InpaintToolkitError):
            raise DegenerateTest("zero variance")
