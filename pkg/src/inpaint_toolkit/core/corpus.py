"""On-disk representation of documents and dialogs (one JSON object per line) and validation."""

import logging
from collections.abc import Iterable
from pathlib import Path
from typing import Any

from pydantic import ValidationError as PydanticValidationError

from ..exceptions import ParseError, ValidationError
from ..utils.json_handler import read_jsonl, write_jsonl
from .config import SplitterConfig
from .models import Dialog, DialogSource, Document, QuestionType, SegmentedAnswer, Turn
from .sentences import split_sentences

logger = logging.getLogger(__name__)


def validate_dialog(dialog: Dialog) -> list[str]:
    """Check the semantic invariants of a dialog.

    Turns and sentences are named 1-based in the messages.

    Returns:
        Human-readable violations; empty iff the dialog is well formed
    """
    violations: list[str] = []
    if not dialog.id.strip():
        violations.append("dialog id is empty")
    if not dialog.turns:
        violations.append(f"dialog {dialog.id}: has no turns")
    for t, turn in enumerate(dialog.turns, start=1):
        if not turn.question.strip():
            violations.append(f"dialog {dialog.id}: turn {t} has an empty question")
        if not turn.answer.sentences:
            violations.append(f"dialog {dialog.id}: turn {t} answer has no sentences")
        for m, sentence in enumerate(turn.answer.sentences, start=1):
            if not sentence.strip():
                violations.append(f"dialog {dialog.id}: turn {t} answer sentence {m} is empty")
    return violations


def validate_document(document: Document) -> list[str]:
    violations: list[str] = []
    if not document.id.strip():
        violations.append("document id is empty")
    if not document.sentences:
        violations.append(f"document {document.id}: has no sentences")
    for m, sentence in enumerate(document.sentences, start=1):
        if not sentence.strip():
            violations.append(f"document {document.id}: sentence {m} is empty")
    return violations


def dialog_to_record(dialog: Dialog) -> dict[str, Any]:
    return {
        "id": dialog.id,
        "title": dialog.title,
        "source": dialog.source.value,
        "turns": [
            {"q": turn.question, "q_type": turn.question_type.value, "a_sents": list(turn.answer.sentences)}
            for turn in dialog.turns
        ],
    }


def dialog_from_record(record: Any) -> Dialog:
    """Build a Dialog from a decoded JSON record.

    Raises:
        ValueError: If required keys are missing or have the wrong type
    """
    if not isinstance(record, dict):
        raise ValueError("record is not a JSON object")
    missing = [key for key in ("id", "source", "turns") if key not in record]
    if missing:
        raise ValueError(f"record is missing {', '.join(repr(key) for key in missing)}")
    turns_data = record["turns"]
    if not isinstance(turns_data, list):
        raise ValueError("'turns' must be a list")
    turns = []
    for index, turn in enumerate(turns_data, start=1):
        if not isinstance(turn, dict) or not {"q", "q_type", "a_sents"} <= turn.keys():
            raise ValueError(f"turn {index} must have 'q', 'q_type' and 'a_sents'")
        if not isinstance(turn["a_sents"], list):
            raise ValueError(f"turn {index}: 'a_sents' must be a list")
        turns.append(
            Turn(
                question=turn["q"],
                question_type=QuestionType(turn["q_type"]),
                answer=SegmentedAnswer(sentences=tuple(turn["a_sents"])),
            )
        )
    return Dialog(
        id=record["id"],
        title=record.get("title"),
        turns=tuple(turns),
        source=DialogSource(record["source"]),
    )


def document_to_record(document: Document) -> dict[str, Any]:
    return {"id": document.id, "title": document.title, "sentences": list(document.sentences)}


def document_from_record(record: Any) -> Document:
    if not isinstance(record, dict):
        raise ValueError("record is not a JSON object")
    missing = [key for key in ("id", "title", "sentences") if key not in record]
    if missing:
        raise ValueError(f"record is missing {', '.join(repr(key) for key in missing)}")
    return Document(id=record["id"], title=record["title"], sentences=tuple(record["sentences"]))


def document_from_text(
    document_id: str, title: str, text: str, splitter: SplitterConfig | None = None
) -> Document:
    """Build a Document from raw passage text.

    Raises:
        InvalidInput: If the text is empty
    """
    return Document(id=document_id, title=title, sentences=tuple(split_sentences(text, splitter)))


def load_dialogs(path: str | Path) -> list[Dialog]:
    """Load dialogs from a JSON Lines file, in file order.

    Raises:
        ParseError: If a record is malformed (carries the 1-based line number)
        ValidationError: If a parsed dialog violates its invariants
    """
    dialogs: list[Dialog] = []
    for line_number, record in read_jsonl(path):
        try:
            dialog = dialog_from_record(record)
        except (ValueError, TypeError, PydanticValidationError) as e:
            logger.error(f"Malformed dialog record at {path}:{line_number}: {e}")
            raise ParseError(
                f"{path}:{line_number}: malformed dialog record: {e}",
                line_number=line_number,
                path=str(path),
                original_error=e,
            ) from e
        violations = validate_dialog(dialog)
        if violations:
            raise ValidationError(f"{path}:{line_number}: invalid dialog {dialog.id}", violations)
        dialogs.append(dialog)
    logger.info(f"Loaded {len(dialogs)} dialogs from {path}")
    return dialogs


def save_dialogs(dialogs: Iterable[Dialog], path: str | Path) -> int:
    return write_jsonl(path, (dialog_to_record(dialog) for dialog in dialogs))


def load_documents(path: str | Path) -> list[Document]:
    """Load documents from a JSON Lines file, in file order.

    Raises:
        ParseError: If a record is malformed
        ValidationError: If a document violates its invariants or an id repeats
    """
    documents: list[Document] = []
    seen: set[str] = set()
    for line_number, record in read_jsonl(path):
        try:
            document = document_from_record(record)
        except (ValueError, TypeError, PydanticValidationError) as e:
            raise ParseError(
                f"{path}:{line_number}: malformed document record: {e}",
                line_number=line_number,
                path=str(path),
                original_error=e,
            ) from e
        violations = validate_document(document)
        if document.id in seen:
            violations.append(f"document id {document.id} is not unique")
        if violations:
            raise ValidationError(f"{path}:{line_number}: invalid document {document.id}", violations)
        seen.add(document.id)
        documents.append(document)
    logger.info(f"Loaded {len(documents)} documents from {path}")
    return documents


def save_documents(documents: Iterable[Document], path: str | Path) -> int:
    return write_jsonl(path, (document_to_record(document) for document in documents))
