from typing import Any

# Base exception


class InpaintToolkitError(Exception):
    """Base exception for all inpaint-toolkit exceptions."""

    pass


# Corpus exceptions


class CorpusError(InpaintToolkitError):
    """Base exception for corpus reading, writing and validation errors."""

    pass


class InvalidInput(CorpusError):
    """Raised when an operation receives input it cannot work with (e.g. empty text)."""

    pass


class ParseError(CorpusError):
    """Raised when a record in a line-oriented file cannot be parsed."""

    def __init__(
        self,
        message: str,
        line_number: int | None = None,
        path: str | None = None,
        original_error: Exception | None = None,
    ):
        self.line_number = line_number
        self.path = path
        self.original_error = original_error
        super().__init__(message)


class ValidationError(CorpusError):
    """Raised when a structure violates its invariants."""

    def __init__(self, message: str, violations: list[str] | None = None):
        self.violations = violations or []
        super().__init__(message)


# Configuration exceptions


class ConfigError(InpaintToolkitError):
    """Raised when configuration values are missing, unknown or out of range."""

    pass


# Generation exceptions


class GenerationError(InpaintToolkitError):
    """Base exception for generator-side failures."""

    pass


class MalformedGeneration(GenerationError):
    """Raised when a generated completion does not follow the sentinel format."""

    def __init__(self, message: str, output_text: str | None = None):
        self.output_text = output_text
        super().__init__(message)


class StubExhausted(GenerationError):
    """Raised when a scripted backend is called more times than it has outputs."""

    pass


class SynthesisError(GenerationError):
    """Raised when a document cannot be converted into a dialog."""

    def __init__(self, message: str, trace: Any | None = None, original_error: Exception | None = None):
        self.trace = trace
        self.original_error = original_error
        super().__init__(message)


class BackendError(InpaintToolkitError):
    """Raised when a remote model backend fails after retries."""

    def __init__(self, message: str, original_error: Exception | None = None):
        self.original_error = original_error
        super().__init__(message)


# Retrieval exceptions


class RetrievalError(InpaintToolkitError):
    """Base exception for dual-encoder math and training errors."""

    pass


class DegenerateEmbedding(RetrievalError):
    """Raised when an embedding has zero norm or non-finite entries."""

    pass


class TrainingError(RetrievalError):
    """Raised when a training stage fails."""

    def __init__(self, message: str, iteration: int | None = None, original_error: Exception | None = None):
        self.iteration = iteration
        self.original_error = original_error
        super().__init__(message)


# Evaluation exceptions


class EvaluationError(InpaintToolkitError):
    """Base exception for judging and significance testing errors."""

    pass


class UnparseableJudgment(EvaluationError):
    """Raised when a judge response matches no unique rubric option."""

    def __init__(self, message: str, response_text: str | None = None):
        self.response_text = response_text
        super().__init__(message)


class DegenerateTest(EvaluationError):
    """Raised when a significance test has zero variance."""

    pass
