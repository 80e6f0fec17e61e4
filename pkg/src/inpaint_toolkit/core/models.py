"""Canonical in-memory types for documents and dialogs.

All models are frozen and hold tuples, so instances can be shared freely between
concurrent workers. Structural typing is enforced at construction; the semantic
invariants (non-empty questions, non-empty sentences, ...) are reported by
``validate_dialog`` / ``validate_document`` so that callers can inspect every
violation at once instead of failing on the first one.
"""

from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field

VARIANT_SEPARATOR = "::"


class DialogSource(StrEnum):
    ORQUAC = "orquac"
    QRECC = "qrecc"
    DOLLY = "dolly"
    SYNTHESIZED = "synthesized"


class QuestionType(StrEnum):
    RAW = "raw"
    REWRITTEN = "rewritten"
    GENERATED = "generated"


class RubricKind(StrEnum):
    INFO_SEEKING = "info_seeking"
    RELEVANCE = "relevance"
    SPECIFICITY = "specificity"
    ANSWEREDNESS = "answeredness"


class Document(BaseModel):
    """A passage to be converted into a dialog: a title plus its sentences in order."""

    model_config = ConfigDict(frozen=True)

    id: str
    title: str
    sentences: tuple[str, ...]


class SegmentedAnswer(BaseModel):
    """An answer kept as its ordered sentences.

    Placeholders are positional: one sits between every pair of consecutive
    sentences, so an answer of m sentences has m - 1 placeholder slots.
    """

    model_config = ConfigDict(frozen=True)

    sentences: tuple[str, ...]

    @property
    def text(self) -> str:
        return " ".join(self.sentences)

    @property
    def num_placeholders(self) -> int:
        return max(len(self.sentences) - 1, 0)


class Turn(BaseModel):
    model_config = ConfigDict(frozen=True)

    question: str
    question_type: QuestionType
    answer: SegmentedAnswer


class Dialog(BaseModel):
    """An ordered sequence of question/answer turns with an optional title as context."""

    model_config = ConfigDict(frozen=True)

    id: str
    title: str | None = None
    turns: tuple[Turn, ...]
    source: DialogSource

    @property
    def variant_group(self) -> str:
        """Identifier shared by the raw and rewritten variants of the same dialog."""
        return self.id.split(VARIANT_SEPARATOR, 1)[0]

    @property
    def question_type(self) -> QuestionType | None:
        """Question type of the dialog when all turns agree, else None."""
        types = {turn.question_type for turn in self.turns}
        return types.pop() if len(types) == 1 else None

    def answer_text(self, turn_index: int) -> str:
        return self.turns[turn_index].answer.text


class MaskSpec(BaseModel):
    """A contiguous run of masked question slots within a dialog."""

    model_config = ConfigDict(frozen=True)

    first_masked_turn: int = Field(ge=0)
    run_length: int = Field(ge=1)

    @property
    def masked_turns(self) -> range:
        return range(self.first_masked_turn, self.first_masked_turn + self.run_length)

    def fits(self, num_turns: int) -> bool:
        return self.first_masked_turn + self.run_length <= num_turns
