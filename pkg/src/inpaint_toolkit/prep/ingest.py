"""Adapters that normalize source ConvQA corpora into Dialog records.

Every source is read as JSON Lines:

* ``qrecc``: one turn per line with ``Conversation_no``, ``Turn_no``, ``Question``,
  ``Truth_answer`` and optionally ``Rewrite`` and ``title``.
* ``orquac``: one turn per line with ``qid`` (``<dialog>_q#<turn>``), ``question``,
  ``answer`` (``{"text": ...}`` or a string) and optionally ``rewrite`` and ``title``.
* ``dolly``: one instruction per line with ``instruction`` and ``response``; each
  record becomes a single-turn dialog.

Sources that carry rewritten questions yield two sibling dialogs per conversation:
the raw variant (``id``) and the rewritten variant (``id::rewritten``).
"""

import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict

from ..core.config import SplitterConfig
from ..core.corpus import validate_dialog
from ..core.models import VARIANT_SEPARATOR, Dialog, DialogSource, QuestionType, SegmentedAnswer, Turn
from ..core.sentences import split_sentences
from ..exceptions import ConfigError, InvalidInput, ParseError
from ..utils.json_handler import JSONHandler

logger = logging.getLogger(__name__)

MAX_SKIPPED_FRACTION = 0.01
UNANSWERABLE = frozenset({"", "cannotanswer"})


class SourceFormat(StrEnum):
    ORQUAC = "orquac"
    QRECC = "qrecc"
    DOLLY = "dolly"


class IngestReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    records: int
    skipped_records: int
    unanswerable_turns: int
    dialogs: int


@dataclass
class _TurnRecord:
    dialog_key: str
    order: int
    question: str
    rewrite: str | None
    answer: str
    title: str | None


@dataclass
class _Conversation:
    key: str
    title: str | None = None
    turns: list[_TurnRecord] = field(default_factory=list)


def _require_str(record: dict[str, Any], key: str) -> str:
    value = record.get(key)
    if not isinstance(value, str) or not value.strip():
        raise ValueError(f"'{key}' must be a non-empty string")
    return value


def _optional_str(record: dict[str, Any], key: str) -> str | None:
    value = record.get(key)
    if value is None:
        return None
    if not isinstance(value, str):
        raise ValueError(f"'{key}' must be a string")
    return value.strip() or None


def _parse_qrecc(record: dict[str, Any], line_number: int) -> _TurnRecord:
    conversation = record.get("Conversation_no")
    turn_no = record.get("Turn_no")
    if conversation is None or not isinstance(turn_no, int):
        raise ValueError("'Conversation_no' and integer 'Turn_no' are required")
    answer = record.get("Truth_answer")
    if not isinstance(answer, str):
        raise ValueError("'Truth_answer' must be a string")
    return _TurnRecord(
        dialog_key=f"qrecc-{conversation}",
        order=turn_no,
        question=_require_str(record, "Question"),
        rewrite=_optional_str(record, "Rewrite"),
        answer=answer,
        title=_optional_str(record, "title"),
    )


def _parse_orquac(record: dict[str, Any], line_number: int) -> _TurnRecord:
    qid = _require_str(record, "qid")
    dialog_part, sep, turn_part = qid.rpartition("_q#")
    if not sep or not turn_part.isdigit():
        raise ValueError(f"'qid' must look like '<dialog>_q#<turn>', got {qid!r}")
    answer = record.get("answer")
    if isinstance(answer, dict):
        answer = answer.get("text")
    if not isinstance(answer, str):
        raise ValueError("'answer' must be a string or an object with 'text'")
    return _TurnRecord(
        dialog_key=f"orquac-{dialog_part}",
        order=int(turn_part),
        question=_require_str(record, "question"),
        rewrite=_optional_str(record, "rewrite"),
        answer=answer,
        title=_optional_str(record, "title"),
    )


def _parse_dolly(record: dict[str, Any], line_number: int) -> _TurnRecord:
    record_id = record.get("id", line_number)
    return _TurnRecord(
        dialog_key=f"dolly-{record_id}",
        order=0,
        question=_require_str(record, "instruction"),
        rewrite=None,
        answer=_require_str(record, "response"),
        title=_optional_str(record, "title"),
    )


def _numbered_lines(path: str | Path) -> Iterator[tuple[int, str]]:
    with Path(path).open(encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            if line.strip():
                yield line_number, line


_PARSERS: dict[SourceFormat, Callable[[dict[str, Any], int], _TurnRecord]] = {
    SourceFormat.QRECC: _parse_qrecc,
    SourceFormat.ORQUAC: _parse_orquac,
    SourceFormat.DOLLY: _parse_dolly,
}


class CorpusIngestor:
    """Read one source corpus and convert it into validated dialogs.

    Malformed records are skipped and counted; ingestion fails when more than 1% of
    records are malformed. Turns without an answer ("CANNOTANSWER" or empty) are
    dropped and counted separately.

    Attributes:
        source_format: Source corpus format
        splitter: Sentence splitter used for answers
        report: Statistics of the last ``ingest`` call
    """

    def __init__(self, source_format: SourceFormat | str, splitter: SplitterConfig | None = None):
        try:
            self.source_format = SourceFormat(source_format)
        except ValueError as e:
            raise ConfigError(f"Unknown source format: {source_format}") from e
        self.splitter = splitter
        self.report: IngestReport | None = None

    def ingest(self, path: str | Path) -> list[Dialog]:
        """Convert the corpus at ``path`` into dialogs, in first-appearance order.

        Raises:
            ParseError: If the file is not JSON Lines or too many records are malformed
        """
        parse = _PARSERS[self.source_format]
        conversations: dict[str, _Conversation] = {}
        records = skipped = unanswerable = 0
        first_bad_line: int | None = None

        for line_number, line in _numbered_lines(path):
            records += 1
            try:
                record = JSONHandler.deserialize(line)
                if not isinstance(record, dict):
                    raise ValueError("record is not a JSON object")
                turn = parse(record, line_number)
            except ValueError as e:
                skipped += 1
                first_bad_line = first_bad_line or line_number
                logger.warning(f"Skipping malformed {self.source_format} record at {path}:{line_number}: {e}")
                continue
            if turn.answer.strip().casefold() in UNANSWERABLE:
                unanswerable += 1
                continue
            conversation = conversations.setdefault(turn.dialog_key, _Conversation(key=turn.dialog_key))
            conversation.title = conversation.title or turn.title
            conversation.turns.append(turn)

        if records and skipped / records > MAX_SKIPPED_FRACTION:
            raise ParseError(
                f"{path}: {skipped}/{records} malformed {self.source_format} records exceed the "
                f"{MAX_SKIPPED_FRACTION:.0%} threshold",
                line_number=first_bad_line,
                path=str(path),
            )

        dialogs: list[Dialog] = []
        for conversation in conversations.values():
            dialogs.extend(self._build_variants(conversation))

        self.report = IngestReport(
            records=records, skipped_records=skipped, unanswerable_turns=unanswerable, dialogs=len(dialogs)
        )
        logger.info(
            f"Ingested {len(dialogs)} dialogs from {records} {self.source_format} records "
            f"({skipped} malformed, {unanswerable} unanswerable)"
        )
        return dialogs

    def _build_variants(self, conversation: _Conversation) -> list[Dialog]:
        ordered = sorted(conversation.turns, key=lambda turn: turn.order)
        try:
            answers = [
                SegmentedAnswer(sentences=tuple(split_sentences(turn.answer, self.splitter))) for turn in ordered
            ]
        except InvalidInput as e:
            logger.warning(f"Skipping conversation {conversation.key}: {e}")
            return []

        source = DialogSource(self.source_format.value)
        variants = [
            Dialog(
                id=conversation.key,
                title=conversation.title,
                source=source,
                turns=tuple(
                    Turn(question=turn.question.strip(), question_type=QuestionType.RAW, answer=answer)
                    for turn, answer in zip(ordered, answers, strict=True)
                ),
            )
        ]
        if any(turn.rewrite for turn in ordered):
            variants.append(
                Dialog(
                    id=f"{conversation.key}{VARIANT_SEPARATOR}{QuestionType.REWRITTEN.value}",
                    title=conversation.title,
                    source=source,
                    turns=tuple(
                        Turn(
                            question=(turn.rewrite or turn.question).strip(),
                            question_type=QuestionType.REWRITTEN,
                            answer=answer,
                        )
                        for turn, answer in zip(ordered, answers, strict=True)
                    ),
                )
            )

        valid = []
        for dialog in variants:
            violations = validate_dialog(dialog)
            if violations:
                logger.warning(f"Skipping invalid dialog {dialog.id}: {'; '.join(violations)}")
                continue
            valid.append(dialog)
        return valid


def ingest_corpus(
    path: str | Path, source_format: SourceFormat | str, splitter: SplitterConfig | None = None
) -> list[Dialog]:
    """Normalize a source corpus into dialogs.

    Raises:
        ConfigError: If the format is unknown
        ParseError: If more than 1% of records are malformed
    """
    return CorpusIngestor(source_format, splitter).ingest(path)
