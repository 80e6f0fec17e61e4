import logging
import random

from pydantic import BaseModel, ConfigDict, Field

from ..core.config import PrepConfig
from ..core.models import Dialog, MaskSpec, QuestionType
from ..exceptions import ValidationError
from .sentinels import sentinel

logger = logging.getLogger(__name__)


class TrainingExample(BaseModel):
    """One (input, target) pair in sentinel format.

    The input carries ``num_masked_slots`` sentinels numbered 0.. in reading order; the
    target repeats them, each followed by its gold fill, and ends with one extra
    terminator sentinel.
    """

    model_config = ConfigDict(frozen=True)

    input_text: str
    target_text: str
    num_masked_slots: int = Field(ge=1)
    dialog_id: str | None = None
    question_type: QuestionType | None = None


def sample_mask(dialog: Dialog, config: PrepConfig, rng: random.Random) -> MaskSpec:
    """Draw a contiguous run of masked questions.

    The run length is uniform over ``[1, min(N, #turns)]`` and the start is uniform
    over the positions where the run fits.

    Raises:
        ValidationError: If the dialog has no turns
    """
    num_turns = len(dialog.turns)
    if num_turns < 1:
        raise ValidationError(f"Cannot mask dialog {dialog.id} without turns")
    run_length = rng.randint(1, min(config.N, num_turns))
    first = rng.randint(0, num_turns - run_length)
    return MaskSpec(first_masked_turn=first, run_length=run_length)


def serialize_training_example(
    dialog: Dialog,
    mask: MaskSpec,
    config: PrepConfig,
    include_title: bool,
    question_type_label: QuestionType | None,
) -> TrainingExample:
    """Linearize a dialog with its masked questions and every answer placeholder as sentinel slots.

    Input layout: optional ``Type: {label}``, optional ``Title: {title}``, then each turn's
    question (or a sentinel when the turn is masked) followed by its sentences with a
    sentinel between every two consecutive sentences. Placeholder slots are always
    masked and their gold fill is the empty string.

    Args:
        dialog: Source dialog
        mask: Masked question run; must fit the dialog
        config: Preparation settings (recorded for callers; the layout does not depend on N)
        include_title: Whether to emit the title when the dialog has one
        question_type_label: Label for the ``Type:`` prefix, or None to omit the prefix

    Raises:
        ValidationError: If the mask does not fit the dialog

    Example:
        A dialog titled "T" with turns ("Who proposed it?", ["A.", "B."]) and ("When?", ["C."]),
        masking the first turn, yields input ``"Type: raw Title: T <S0> A. <S1> B. When? C."``
        and target ``"<S0> Who proposed it? <S1> <S2>"``.
    """
    if not mask.fits(len(dialog.turns)):
        raise ValidationError(
            f"Mask {mask.first_masked_turn}+{mask.run_length} does not fit dialog {dialog.id} "
            f"with {len(dialog.turns)} turns"
        )

    inputs: list[str] = []
    targets: list[str] = []
    if question_type_label is not None:
        inputs.append(f"Type: {question_type_label.value}")
    if include_title and dialog.title:
        inputs.append(f"Title: {dialog.title}")

    slot = 0
    masked = mask.masked_turns
    for index, turn in enumerate(dialog.turns):
        if index in masked:
            inputs.append(sentinel(slot))
            targets.extend((sentinel(slot), turn.question.strip()))
            slot += 1
        else:
            inputs.append(turn.question.strip())
        for position, sentence in enumerate(turn.answer.sentences):
            if position > 0:
                inputs.append(sentinel(slot))
                targets.append(sentinel(slot))
                slot += 1
            inputs.append(sentence)
    targets.append(sentinel(slot))

    logger.debug(f"Serialized dialog {dialog.id} with {slot} slots (mask {mask.first_masked_turn}+{mask.run_length})")
    return TrainingExample(
        input_text=" ".join(inputs),
        target_text=" ".join(targets),
        num_masked_slots=slot,
        dialog_id=dialog.id,
        question_type=question_type_label,
    )
