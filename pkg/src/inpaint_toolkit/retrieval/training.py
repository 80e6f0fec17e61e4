"""Two-stage dual-encoder training: in-batch negatives on synthetic dialogs, then
annotated negatives on a human-labelled set.

The optimizer lives in the backend; this module computes the loss of every
mini-batch and hands it over together with the configured learning rate and
gradient accumulation.
"""

import logging
from collections.abc import Sequence
from enum import StrEnum

from pydantic import BaseModel, ConfigDict

from ..core.config import StageConfig
from ..exceptions import ConfigError, TrainingError, ValidationError
from .backends import EncoderBackend
from .examples import RetrievalExample
from .similarity import annotated_loss, in_batch_contrastive_loss

logger = logging.getLogger(__name__)


class NegativeMode(StrEnum):
    IN_BATCH = "in_batch"
    ANNOTATED = "annotated"


class LossBatch(BaseModel):
    """Everything the backend needs to take one optimization step."""

    model_config = ConfigDict(frozen=True)

    iteration: int
    negative_mode: NegativeMode
    examples: tuple[RetrievalExample, ...]
    losses: tuple[float, ...]
    mean_loss: float
    learning_rate: float
    gradient_accumulation: int
    temperature: float


class StageReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    negative_mode: NegativeMode
    iterations: int
    batch_size: int
    losses: tuple[float, ...]

    @property
    def initial_loss(self) -> float:
        return self.losses[0]

    @property
    def final_loss(self) -> float:
        return self.losses[-1]


class TwoStageReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    stage1: StageReport
    stage2: StageReport


def _batch(examples: Sequence[RetrievalExample], iteration: int, batch_size: int) -> list[RetrievalExample]:
    # Cyclic over the examples; a batch never repeats an example.
    size = min(batch_size, len(examples))
    start = (iteration * size) % len(examples)
    return [examples[(start + offset) % len(examples)] for offset in range(size)]


async def _batch_losses(
    batch: Sequence[RetrievalExample], backend: EncoderBackend, mode: NegativeMode, temperature: float
) -> list[float]:
    queries = await backend.embed([example.query for example in batch])
    positives = await backend.embed([example.positive_passage for example in batch])
    if mode is NegativeMode.IN_BATCH:
        _, losses = in_batch_contrastive_loss(queries, positives, temperature)
        return [float(loss) for loss in losses]

    negatives = await backend.embed([text for example in batch for text in example.negative_passages])
    losses = []
    offset = 0
    for example, query, positive in zip(batch, queries, positives, strict=True):
        count = len(example.negative_passages)
        losses.append(annotated_loss(query, positive, negatives[offset : offset + count], temperature))
        offset += count
    return losses


async def run_stage(
    examples: Sequence[RetrievalExample],
    backend: EncoderBackend,
    stage_config: StageConfig,
    negative_mode: NegativeMode | str = NegativeMode.IN_BATCH,
) -> StageReport:
    """Run ``stage_config.iterations`` mini-batches and report the mean loss of each.

    Raises:
        ValidationError: If there are no examples
        TrainingError: If embedding, loss computation or the backend step fails
    """
    mode = NegativeMode(negative_mode)
    if not examples:
        raise ValidationError("Training stage needs at least one example")

    history: list[float] = []
    for iteration in range(stage_config.iterations):
        batch = _batch(examples, iteration, stage_config.batch_size)
        try:
            losses = await _batch_losses(batch, backend, mode, stage_config.temperature)
            mean_loss = sum(losses) / len(losses)
            await backend.train_step(
                LossBatch(
                    iteration=iteration,
                    negative_mode=mode,
                    examples=tuple(batch),
                    losses=tuple(losses),
                    mean_loss=mean_loss,
                    learning_rate=stage_config.learning_rate,
                    gradient_accumulation=stage_config.gradient_accumulation,
                    temperature=stage_config.temperature,
                )
            )
        except ConfigError:
            raise
        except Exception as e:
            logger.error(f"Training failed at iteration {iteration}: {e}")
            raise TrainingError(f"{mode} stage failed at iteration {iteration}: {e}", iteration, e) from e
        history.append(mean_loss)
        logger.debug(f"{mode} iteration {iteration}: loss {mean_loss:.6f}")

    logger.info(f"Finished {mode} stage: {len(history)} iterations, final loss {history[-1]:.6f}")
    return StageReport(
        negative_mode=mode, iterations=len(history), batch_size=stage_config.batch_size, losses=tuple(history)
    )


async def run_two_stage(
    stage1_examples: Sequence[RetrievalExample],
    stage2_examples: Sequence[RetrievalExample],
    backend: EncoderBackend,
    stage1: StageConfig,
    stage2: StageConfig,
) -> TwoStageReport:
    """Pre-train with in-batch negatives, then fine-tune with annotated negatives."""
    first = await run_stage(stage1_examples, backend, stage1, NegativeMode.IN_BATCH)
    second = await run_stage(stage2_examples, backend, stage2, NegativeMode.ANNOTATED)
    return TwoStageReport(stage1=first, stage2=second)
