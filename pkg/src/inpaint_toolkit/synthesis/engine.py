"""Iterative inference: convert a document into a dialog one window at a time.

Each iteration shows the model the confirmed history followed by the next (at most
N) sentences, each preceded by a slot. Only the first generated question is kept;
the following slots decide how many sentences that question's answer covers (an
empty fill merges the next sentence into the answer). The cursor then advances past
the consumed sentences and the next window is built.
"""

import asyncio
import logging
from collections.abc import Sequence

from pydantic import BaseModel, ConfigDict, Field
from tenacity import AsyncRetrying, retry_if_exception_type, stop_after_attempt

from ..core.config import SynthesisConfig
from ..core.models import Dialog, DialogSource, Document, QuestionType, SegmentedAnswer, Turn
from ..exceptions import MalformedGeneration, SynthesisError, ValidationError
from ..prep.sentinels import parse_sentinel_output, sentinel, strip_sentinels
from .backends import GeneratorBackend

logger = logging.getLogger(__name__)


class WindowRecord(BaseModel):
    """One backend call made while synthesizing a document."""

    model_config = ConfigDict(frozen=True)

    cursor: int
    input_text: str
    output_text: str
    fills: tuple[str, ...] | None = None
    consumed: int = 0
    fallback: bool = False
    error: str | None = None


class SynthesisTrace(BaseModel):
    """Every backend call for one document; consumed counts sum to the number of sentences on success."""

    document_id: str
    windows: list[WindowRecord] = Field(default_factory=list)
    error: str | None = None

    @property
    def consumed_total(self) -> int:
        return sum(window.consumed for window in self.windows)

    @property
    def fallback_turns(self) -> int:
        return sum(1 for window in self.windows if window.fallback)

    @property
    def malformed_outputs(self) -> int:
        return sum(1 for window in self.windows if window.error is not None)


class SynthesisStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    documents: int
    dialogs: int
    failed: int
    turns: int
    fallback_turns: int
    malformed_outputs: int


class SynthesisResult(BaseModel):
    dialogs: list[Dialog]
    traces: list[SynthesisTrace]
    stats: SynthesisStats


def _linearize_history(history: Sequence[Turn]) -> list[str]:
    parts: list[str] = []
    for turn in history:
        parts.append(turn.question)
        parts.extend(turn.answer.sentences)
    return parts


def build_inference_window(
    history: Sequence[Turn], document: Document, cursor: int, config: SynthesisConfig
) -> tuple[str, int, tuple[str, ...]]:
    """Build the model input for the window starting at ``cursor``.

    Returns:
        The input text, the number of slots, and the window's sentences

    Raises:
        ValidationError: If the cursor is outside the document

    Example:
        With an empty history, sentences ``[s1, s2, s3]``, N=3 and title "T" the input is
        ``"Type: raw Title: T <S0> s1 <S1> s2 <S2> s3"`` with 3 slots.
    """
    if not 0 <= cursor < len(document.sentences):
        raise ValidationError(
            f"Cursor {cursor} is outside document {document.id} ({len(document.sentences)} sentences)"
        )

    window = tuple(document.sentences[cursor : cursor + config.N])
    parts = [f"Type: {config.question_type.value}"]
    if config.include_title and document.title:
        parts.append(f"Title: {document.title}")
    parts.extend(_linearize_history(history))
    for index, sentence_text in enumerate(window):
        parts.append(sentinel(index))
        parts.append(sentence_text)
    return " ".join(parts), len(window), window


def segment_from_fills(fills: Sequence[str], window_sentences: Sequence[str]) -> tuple[str, tuple[str, ...], int]:
    """Turn a window's fills into one question and its answer sentences.

    The question is the first fill. The answer starts with the first sentence and
    absorbs each following sentence whose slot was filled with the empty string,
    stopping at the first non-empty fill.

    Returns:
        ``(question, answer_sentences, consumed)``

    Raises:
        ValidationError: If fills and sentences differ in length or are empty
        MalformedGeneration: If the first fill is empty
    """
    if not window_sentences or len(fills) != len(window_sentences):
        raise ValidationError(
            f"Expected one fill per window sentence, got {len(fills)} fills for {len(window_sentences)}"
        )
    question = fills[0].strip()
    if not question:
        raise MalformedGeneration("The first slot must hold a question")
    consumed = 1
    while consumed < len(fills) and not fills[consumed].strip():
        consumed += 1
    return question, tuple(window_sentences[:consumed]), consumed


def salvage_question(output_text: str) -> str | None:
    """Best-effort question from a malformed completion: the text of its first slot."""
    text = output_text
    start = text.find("<S")
    if start != -1:
        close = text.find(">", start)
        text = text[close + 1 :] if close != -1 else text[start + 2 :]
        following = text.find("<S")
        if following != -1:
            text = text[:following]
    salvaged = strip_sentinels(text)
    return salvaged or None


async def inpaint_document(
    document: Document, backend: GeneratorBackend, config: SynthesisConfig
) -> tuple[Dialog, SynthesisTrace]:
    """Convert a document into a dialog with the given generator.

    Malformed completions are retried up to ``max_retries_on_malformed`` times per
    window. When a window stays malformed the document either fails or, with
    ``fallback_to_single_sentence``, gets a one-sentence turn whose question is
    salvaged from the last completion.

    Raises:
        SynthesisError: On backend failure or unrecoverable malformed output; carries the trace
    """
    trace = SynthesisTrace(document_id=document.id)
    turns: list[Turn] = []
    cursor = 0

    while cursor < len(document.sentences):
        input_text, num_slots, window = build_inference_window(turns, document, cursor, config)
        last_output = ""
        try:
            async for attempt in AsyncRetrying(
                stop=stop_after_attempt(config.max_retries_on_malformed + 1),
                retry=retry_if_exception_type(MalformedGeneration),
                reraise=True,
            ):
                with attempt:
                    last_output = await backend.generate(input_text)
                    try:
                        fills = parse_sentinel_output(last_output, num_slots)
                        question, answer, consumed = segment_from_fills(fills, window)
                    except MalformedGeneration as e:
                        logger.debug(f"Malformed output for {document.id} at sentence {cursor}: {e}")
                        trace.windows.append(
                            WindowRecord(cursor=cursor, input_text=input_text, output_text=last_output, error=str(e))
                        )
                        raise
                    trace.windows.append(
                        WindowRecord(
                            cursor=cursor,
                            input_text=input_text,
                            output_text=last_output,
                            fills=tuple(fills),
                            consumed=consumed,
                        )
                    )
        except MalformedGeneration as e:
            salvaged = salvage_question(last_output) if config.fallback_to_single_sentence else None
            if salvaged is None:
                trace.error = f"malformed output at sentence {cursor}: {e}"
                logger.warning(f"Giving up on document {document.id}: {trace.error}")
                raise SynthesisError(f"Document {document.id}: {trace.error}", trace=trace, original_error=e) from e
            question, answer, consumed = salvaged, window[:1], 1
            trace.windows.append(
                WindowRecord(
                    cursor=cursor, input_text=input_text, output_text=last_output, consumed=1, fallback=True
                )
            )
            logger.warning(f"Fallback single-sentence turn for document {document.id} at sentence {cursor}")
        except Exception as e:
            trace.error = f"backend failure at sentence {cursor}: {e}"
            logger.error(f"Backend failed on document {document.id}: {e}")
            raise SynthesisError(f"Document {document.id}: {trace.error}", trace=trace, original_error=e) from e

        turns.append(
            Turn(question=question, question_type=QuestionType.GENERATED, answer=SegmentedAnswer(sentences=answer))
        )
        cursor += consumed

    dialog = Dialog(id=document.id, title=document.title, turns=tuple(turns), source=DialogSource.SYNTHESIZED)
    logger.debug(f"Synthesized {len(turns)} turns for document {document.id} in {len(trace.windows)} calls")
    return dialog, trace


async def synthesize_corpus(
    documents: Sequence[Document], backend: GeneratorBackend, config: SynthesisConfig, workers: int = 1
) -> SynthesisResult:
    """Synthesize dialogs for many documents, at most ``workers`` at a time.

    Documents that fail are skipped and counted; results keep input order.
    """
    semaphore = asyncio.Semaphore(max(workers, 1))

    async def run(document: Document) -> tuple[Dialog | None, SynthesisTrace]:
        async with semaphore:
            try:
                return await inpaint_document(document, backend, config)
            except SynthesisError as e:
                trace = e.trace if isinstance(e.trace, SynthesisTrace) else SynthesisTrace(document_id=document.id)
                return None, trace

    outcomes = await asyncio.gather(*(run(document) for document in documents))
    dialogs = [dialog for dialog, _ in outcomes if dialog is not None]
    traces = [trace for _, trace in outcomes]
    stats = SynthesisStats(
        documents=len(documents),
        dialogs=len(dialogs),
        failed=len(documents) - len(dialogs),
        turns=sum(len(dialog.turns) for dialog in dialogs),
        fallback_turns=sum(trace.fallback_turns for trace in traces),
        malformed_outputs=sum(trace.malformed_outputs for trace in traces),
    )
    logger.info(
        f"Synthesized {stats.dialogs}/{stats.documents} documents ({stats.failed} failed, "
        f"{stats.fallback_turns} fallback turns)"
    )
    return SynthesisResult(dialogs=dialogs, traces=traces, stats=stats)
