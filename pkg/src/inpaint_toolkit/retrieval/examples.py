"""Retrieval training examples: query text from dialog history plus passages."""

import logging
from collections.abc import Iterable, Sequence
from pathlib import Path

from pydantic import BaseModel, ConfigDict, field_validator

from ..core.models import Dialog, Turn
from ..exceptions import ParseError, ValidationError
from ..utils.json_handler import read_jsonl

logger = logging.getLogger(__name__)


class RetrievalExample(BaseModel):
    """A query with its positive passage and, for annotated training, its negatives."""

    model_config = ConfigDict(frozen=True)

    query: str
    positive_passage: str
    negative_passages: tuple[str, ...] = ()

    @field_validator("query", "positive_passage")
    @classmethod
    def _not_blank(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("must be non-empty")
        return value


def build_query_text(dialog_history: Sequence[Turn], current_question: str) -> str:
    """Linearize the history (each question then its answer) followed by the current question.

    Example:
        One prior turn ``(Q1, A1)`` and current question ``Q2`` give ``"Q1 A1 Q2"``.
    """
    if not current_question.strip():
        raise ValidationError("Current question is empty")
    parts: list[str] = []
    for turn in dialog_history:
        parts.append(turn.question)
        parts.append(turn.answer.text)
    parts.append(current_question)
    return " ".join(parts)


def dialogs_to_retrieval_examples(dialogs: Iterable[Dialog]) -> list[RetrievalExample]:
    """One in-batch example per turn: the history-conditioned question against its answer."""
    examples = []
    for dialog in dialogs:
        for index, turn in enumerate(dialog.turns):
            examples.append(
                RetrievalExample(
                    query=build_query_text(dialog.turns[:index], turn.question),
                    positive_passage=turn.answer.text,
                )
            )
    logger.debug(f"Built {len(examples)} retrieval examples")
    return examples


def load_annotated_examples(path: str | Path) -> list[RetrievalExample]:
    """Read ``{"query", "positive", "negatives": [...]}`` records.

    Raises:
        ParseError: If a line is not valid JSON or a record is malformed
    """
    examples = []
    for line_number, record in read_jsonl(path):
        try:
            if not isinstance(record, dict):
                raise ValueError("record is not a JSON object")
            negatives = record.get("negatives", [])
            if not isinstance(negatives, list):
                raise ValueError("'negatives' must be a list")
            examples.append(
                RetrievalExample(
                    query=record["query"], positive_passage=record["positive"], negative_passages=tuple(negatives)
                )
            )
        except (KeyError, ValueError) as e:
            raise ParseError(
                f"{path}:{line_number}: bad annotated example: {e}", line_number, str(path), e
            ) from e
    logger.info(f"Loaded {len(examples)} annotated examples from {path}")
    return examples
