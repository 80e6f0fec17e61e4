import logging
import os
from enum import StrEnum
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, SecretStr
from pydantic import ValidationError as PydanticValidationError

from ..exceptions import ConfigError
from ..utils.json_handler import JSONHandler
from .models import QuestionType, RubricKind

logger = logging.getLogger(__name__)

DEFAULT_ABBREVIATIONS: tuple[str, ...] = (
    "mr",
    "mrs",
    "ms",
    "dr",
    "prof",
    "sr",
    "jr",
    "st",
    "mt",
    "vs",
    "etc",
    "e.g",
    "i.e",
    "cf",
    "al",
    "inc",
    "ltd",
    "corp",
    "fig",
    "approx",
    "jan",
    "feb",
    "apr",
    "jun",
    "jul",
    "aug",
    "sep",
    "sept",
    "oct",
    "nov",
    "u.s",
    "u.k",
)

# Abbreviations that read as ordinary words at a sentence end; they only hold a sentence
# together when a number follows ("No. 5", "Dec. 31").
NUMERIC_ABBREVIATIONS: tuple[str, ...] = ("no", "nos", "mar", "dec")


class QuestionTypePolicy(StrEnum):
    RAW_ONLY = "raw_only"
    REWRITTEN_ONLY = "rewritten_only"
    BOTH_UNIFORM = "both_uniform"


class SplitterConfig(BaseModel):
    """Sentence splitter selection.

    Attributes:
        kind: ``rule`` (terminal punctuation + abbreviation list) or ``punkt`` (nltk Punkt
            with the same abbreviations injected as parameters)
        abbreviations: Lower-case abbreviations without their final period
        numeric_abbreviations: Abbreviations honoured by the rule splitter only before a token
            starting with a digit
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["rule", "punkt"] = "rule"
    abbreviations: tuple[str, ...] = DEFAULT_ABBREVIATIONS
    numeric_abbreviations: tuple[str, ...] = NUMERIC_ABBREVIATIONS


class PrepConfig(BaseModel):
    """Training-set preparation settings.

    Attributes:
        N: Maximum number of consecutive masked questions (and sentences per answer)
        title_keep_probability: Probability of keeping the title in a training input
        question_type_policy: Which question variant populates the gold fills
        rng_seed: Seed from which every per-dialog random stream is derived
    """

    model_config = ConfigDict(frozen=True)

    N: int = Field(default=3, ge=1)
    title_keep_probability: float = Field(default=0.5, ge=0.0, le=1.0)
    question_type_policy: QuestionTypePolicy = QuestionTypePolicy.BOTH_UNIFORM
    rng_seed: int = 0


class SynthesisConfig(BaseModel):
    """Inference settings for converting documents into dialogs.

    Attributes:
        N: Window size in sentences
        question_type: Value of the ``Type:`` prefix (raw or rewritten question style)
        include_title: Whether the document title is placed in the input
        max_retries_on_malformed: Extra backend calls per window when the output is malformed
        fallback_to_single_sentence: Emit a one-sentence turn instead of failing the document
            when a window stays malformed after all retries
    """

    model_config = ConfigDict(frozen=True)

    N: int = Field(default=3, ge=1)
    question_type: Literal[QuestionType.RAW, QuestionType.REWRITTEN] = QuestionType.RAW
    include_title: bool = True
    max_retries_on_malformed: int = Field(default=2, ge=0)
    fallback_to_single_sentence: bool = False


class StageConfig(BaseModel):
    """One dual-encoder training stage.

    Attributes:
        batch_size: Examples per mini-batch
        learning_rate: Passed through to the encoder backend's optimizer
        iterations: Number of mini-batches processed
        gradient_accumulation: Mini-batches accumulated per optimizer step (backend concern)
        temperature: Softmax temperature applied to cosine similarities
    """

    model_config = ConfigDict(frozen=True)

    batch_size: int = Field(default=8, gt=0)
    learning_rate: float = Field(default=1e-4, gt=0.0)
    iterations: int = Field(default=500, gt=0)
    gradient_accumulation: int = Field(default=32, gt=0)
    temperature: float = Field(default=0.05, gt=0.0)


def default_stage1() -> StageConfig:
    return StageConfig(batch_size=8, learning_rate=1e-4, iterations=500, gradient_accumulation=32)


def default_stage2() -> StageConfig:
    return StageConfig(batch_size=16, learning_rate=1e-4, iterations=250, gradient_accumulation=1)


class RetrievalSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    stage1: StageConfig = Field(default_factory=default_stage1)
    stage2: StageConfig = Field(default_factory=default_stage2)
    k: int | None = Field(default=5, ge=1)


class EvaluationSettings(BaseModel):
    """Judging settings.

    Attributes:
        rubrics: Rubric kinds to judge
        raters: Judge calls per (turn, rubric); 1 for machine judging, 3+ for human-style panels
        acceptable: Label counted as a success per rubric for significance tests
    """

    model_config = ConfigDict(frozen=True)

    rubrics: tuple[RubricKind, ...] = tuple(RubricKind)
    raters: int = Field(default=1, ge=1)
    acceptable: dict[RubricKind, str] = Field(
        default_factory=lambda: {
            RubricKind.INFO_SEEKING: "Yes",
            RubricKind.RELEVANCE: "Follows up",
            RubricKind.SPECIFICITY: "Very",
            RubricKind.ANSWEREDNESS: "Perfectly",
        }
    )


class BackendSettings(BaseModel):
    """Model backend selection and endpoint settings.

    Endpoint URLs, model names and the API key are normally supplied through the
    environment (see ``from_env``) rather than the config file.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["stub", "openai"] = "stub"
    generator_url: str | None = None
    encoder_url: str | None = None
    judge_url: str | None = None
    generator_model: str | None = None
    encoder_model: str | None = None
    judge_model: str | None = None
    api_key: SecretStr | None = None
    sentinel_vocabulary: Literal["canonical", "t5"] = "canonical"
    temperature: float | None = None
    request_timeout: float = Field(default=60.0, gt=0.0)
    max_attempts: int = Field(default=5, ge=1)
    max_new_tokens: int = Field(default=256, gt=0)

    def from_env(self, environ: dict[str, str] | None = None) -> "BackendSettings":
        """Return a copy with unset endpoint fields filled from environment variables."""
        env = os.environ if environ is None else environ
        updates: dict[str, Any] = {}
        for field_name, variable in (
            ("generator_url", "INPAINT_GENERATOR_URL"),
            ("encoder_url", "INPAINT_ENCODER_URL"),
            ("judge_url", "INPAINT_JUDGE_URL"),
            ("generator_model", "INPAINT_GENERATOR_MODEL"),
            ("encoder_model", "INPAINT_ENCODER_MODEL"),
            ("judge_model", "INPAINT_JUDGE_MODEL"),
        ):
            if getattr(self, field_name) is None and env.get(variable):
                updates[field_name] = env[variable]
        if self.api_key is None:
            key = env.get("INPAINT_API_KEY") or env.get("OPENAI_API_KEY")
            if key:
                updates["api_key"] = SecretStr(key)
        return self.model_copy(update=updates) if updates else self

    def api_key_for(self, url: str | None) -> str:
        """API key for an endpoint; self-hosted servers (explicit URL) accept a placeholder.

        Raises:
            ConfigError: If no key is configured for the hosted API
        """
        if self.api_key is not None:
            return self.api_key.get_secret_value()
        if url:
            return "EMPTY"
        raise ConfigError("No API key configured: set INPAINT_API_KEY or OPENAI_API_KEY")


class RunConfig(BaseModel):
    """Single source of truth for a pipeline run, one section per command family."""

    model_config = ConfigDict(frozen=True)

    splitter: SplitterConfig = Field(default_factory=SplitterConfig)
    prep: PrepConfig = Field(default_factory=PrepConfig)
    synthesis: SynthesisConfig = Field(default_factory=SynthesisConfig)
    retrieval: RetrievalSettings = Field(default_factory=RetrievalSettings)
    evaluation: EvaluationSettings = Field(default_factory=EvaluationSettings)
    backend: BackendSettings = Field(default_factory=BackendSettings)

    @classmethod
    def load(cls, path: str | Path | None) -> "RunConfig":
        """Load a run configuration from a JSON file; missing sections take defaults.

        Raises:
            ConfigError: If the file cannot be read or fails validation
        """
        if path is None:
            return cls()
        path = Path(path)
        try:
            data = JSONHandler.deserialize(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as e:
            raise ConfigError(f"Cannot read config file {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {path} must contain a JSON object")
        try:
            config = cls.model_validate(data)
        except PydanticValidationError as e:
            raise ConfigError(f"Invalid config file {path}: {e}") from e
        logger.debug(f"Loaded run config from {path}")
        return config

    def override(self, section: str, **values: Any) -> "RunConfig":
        """Return a copy with selected fields of one section replaced; ``None`` values are ignored.

        Raises:
            ConfigError: If the section is unknown or the new values fail validation
        """
        if section not in type(self).model_fields:
            raise ConfigError(f"Unknown config section: {section}")
        updates = {name: value for name, value in values.items() if value is not None}
        if not updates:
            return self
        current = getattr(self, section)
        try:
            replaced = type(current).model_validate({**current.model_dump(), **updates})
        except PydanticValidationError as e:
            raise ConfigError(f"Invalid value for section '{section}': {e}") from e
        return self.model_copy(update={section: replaced})
