import hashlib
import logging
import random
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import Any

from ..core.config import PrepConfig, QuestionTypePolicy
from ..core.models import Dialog, QuestionType
from ..utils.json_handler import write_jsonl
from .masking import TrainingExample, sample_mask, serialize_training_example

logger = logging.getLogger(__name__)


def derive_rng(seed: int, key: str) -> random.Random:
    """Independent random stream for one dialog group, stable across runs and workers."""
    digest = hashlib.sha256(f"{seed}:{key}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _variant_label(dialog: Dialog) -> QuestionType:
    # Generated questions are written in raw style.
    if dialog.question_type is QuestionType.REWRITTEN:
        return QuestionType.REWRITTEN
    return QuestionType.RAW


def group_variants(dialogs: Iterable[Dialog]) -> dict[str, dict[QuestionType, Dialog]]:
    """Group question-type variants of the same dialog, in first-appearance order."""
    groups: dict[str, dict[QuestionType, Dialog]] = {}
    for dialog in dialogs:
        groups.setdefault(dialog.variant_group, {}).setdefault(_variant_label(dialog), dialog)
    return groups


def _choose_variant(
    variants: dict[QuestionType, Dialog], policy: QuestionTypePolicy, rng: random.Random
) -> tuple[QuestionType, Dialog] | None:
    if policy is QuestionTypePolicy.RAW_ONLY:
        wanted = [QuestionType.RAW]
    elif policy is QuestionTypePolicy.REWRITTEN_ONLY:
        wanted = [QuestionType.REWRITTEN]
    else:
        wanted = [label for label in (QuestionType.RAW, QuestionType.REWRITTEN) if label in variants]
        if len(wanted) == 2:
            wanted = [rng.choice(wanted)]
    for label in wanted:
        if label in variants:
            return label, variants[label]
    return None


def build_training_set(dialogs: Iterable[Dialog], config: PrepConfig) -> Iterator[TrainingExample]:
    """Yield one masked training example per dialog group.

    For each group of question-type variants the group's own random stream picks the
    variant (per ``question_type_policy``), the masked run, and whether the title is
    kept (with probability ``title_keep_probability``). Groups lacking the variant a
    policy asks for are skipped.

    Args:
        dialogs: Validated, filtered dialogs
        config: Preparation settings

    Yields:
        Training examples in first-appearance order of their groups
    """
    emitted = skipped = 0
    for group_id, variants in group_variants(dialogs).items():
        rng = derive_rng(config.rng_seed, group_id)
        chosen = _choose_variant(variants, config.question_type_policy, rng)
        if chosen is None:
            skipped += 1
            logger.debug(f"Skipping group {group_id}: no variant for policy {config.question_type_policy}")
            continue
        label, dialog = chosen
        mask = sample_mask(dialog, config, rng)
        include_title = rng.random() < config.title_keep_probability
        emitted += 1
        yield serialize_training_example(dialog, mask, config, include_title, label)
    logger.info(f"Built {emitted} training examples ({skipped} groups skipped by policy)")


def training_example_to_record(example: TrainingExample) -> dict[str, Any]:
    return {
        "input": example.input_text,
        "target": example.target_text,
        "num_masked_slots": example.num_masked_slots,
        "dialog_id": example.dialog_id,
        "question_type": example.question_type,
    }


def save_training_set(examples: Iterable[TrainingExample], path: str | Path) -> int:
    """Write training examples as JSON Lines; returns the number written."""
    return write_jsonl(path, (training_example_to_record(example) for example in examples))
