"""Removal of topic-shift ("other interesting") questions from source corpora."""

import logging

from pydantic import BaseModel, ConfigDict

from ..core.models import Dialog

logger = logging.getLogger(__name__)

FILTER_SUBSTRING = "other interesting"
TOPIC_SHIFT_MARKERS = (FILTER_SUBSTRING, "anything else")


class FilterReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    removed_pairs: int
    total_pairs: int
    pair_fraction: float
    dialogs_with_match: int
    total_dialogs: int
    dialog_fraction: float
    dropped_dialogs: int

    def summary(self) -> dict[str, float | int]:
        return {
            "removed_pairs": self.removed_pairs,
            "pair_fraction": self.pair_fraction,
            "dialog_fraction": self.dialog_fraction,
        }


def contains_other_interesting(question: str) -> bool:
    return FILTER_SUBSTRING in question.casefold()


def is_topic_shift_question(question: str) -> bool:
    """True for generic "anything else" style questions that ask for a change of topic."""
    folded = question.casefold()
    return any(marker in folded for marker in TOPIC_SHIFT_MARKERS)


def filter_other_interesting(dialogs: list[Dialog]) -> tuple[list[Dialog], FilterReport]:
    """Drop every QA pair whose question contains "other interesting" (case-insensitive).

    Matching pairs are spliced out and the rest of the dialog is kept; a dialog is
    dropped only when no turns remain.

    Returns:
        Surviving dialogs in input order, and the filter statistics
    """
    kept: list[Dialog] = []
    removed = total = matched_dialogs = dropped = 0

    for dialog in dialogs:
        total += len(dialog.turns)
        survivors = tuple(turn for turn in dialog.turns if not contains_other_interesting(turn.question))
        removed_here = len(dialog.turns) - len(survivors)
        if removed_here == 0:
            kept.append(dialog)
            continue
        removed += removed_here
        matched_dialogs += 1
        if survivors:
            kept.append(dialog.model_copy(update={"turns": survivors}))
        else:
            dropped += 1
            logger.debug(f"Dropped dialog {dialog.id}: no turns left after filtering")

    report = FilterReport(
        removed_pairs=removed,
        total_pairs=total,
        pair_fraction=removed / total if total else 0.0,
        dialogs_with_match=matched_dialogs,
        total_dialogs=len(dialogs),
        dialog_fraction=matched_dialogs / len(dialogs) if dialogs else 0.0,
        dropped_dialogs=dropped,
    )
    logger.info(
        f"Filtered {removed}/{total} QA pairs ({report.pair_fraction:.2%}); "
        f"{matched_dialogs}/{len(dialogs)} dialogs contained a match"
    )
    return kept, report
