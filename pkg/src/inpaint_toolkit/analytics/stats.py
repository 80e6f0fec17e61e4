import logging
from collections.abc import Iterable, Mapping

from pydantic import BaseModel, ConfigDict

from ..core.models import Dialog
from ..exceptions import ValidationError
from .tables import render_table

logger = logging.getLogger(__name__)

HISTOGRAM_BUCKETS = ("1", "2", "3+")


class CorpusStats(BaseModel):
    """Dialog and answer-length statistics of one corpus.

    Attributes:
        sentence_count_histogram: Fraction of answers with 1, 2 and 3 or more sentences
        bucket_counts: Number of answers per histogram bucket
    """

    model_config = ConfigDict(frozen=True)

    dialog_count: int
    turn_count: int
    avg_turns_per_dialog: float
    avg_sentences_per_answer: float
    sentence_count_histogram: dict[str, float]
    bucket_counts: dict[str, int]

    @property
    def histogram_percentages(self) -> dict[str, float]:
        return {bucket: round(100.0 * fraction, 2) for bucket, fraction in self.sentence_count_histogram.items()}


def _bucket(sentence_count: int) -> str:
    return HISTOGRAM_BUCKETS[min(sentence_count, 3) - 1]


def corpus_stats(dialogs: Iterable[Dialog]) -> CorpusStats:
    """Average turns per dialog, average sentences per answer and the answer-length histogram.

    Raises:
        ValidationError: If the corpus has no dialogs or no turns
    """
    dialog_count = turn_count = sentence_total = 0
    counts = dict.fromkeys(HISTOGRAM_BUCKETS, 0)
    for dialog in dialogs:
        dialog_count += 1
        for turn in dialog.turns:
            sentences = len(turn.answer.sentences)
            turn_count += 1
            sentence_total += sentences
            counts[_bucket(max(sentences, 1))] += 1
    if not dialog_count or not turn_count:
        raise ValidationError("Cannot compute statistics of an empty corpus")

    stats = CorpusStats(
        dialog_count=dialog_count,
        turn_count=turn_count,
        avg_turns_per_dialog=turn_count / dialog_count,
        avg_sentences_per_answer=sentence_total / turn_count,
        sentence_count_histogram={bucket: count / turn_count for bucket, count in counts.items()},
        bucket_counts=counts,
    )
    logger.info(
        f"{dialog_count} dialogs, {stats.avg_turns_per_dialog:.2f} turns/dialog, "
        f"{stats.avg_sentences_per_answer:.2f} sentences/answer"
    )
    return stats


def render_stats_table(stats: Mapping[str, CorpusStats]) -> str:
    """Aligned plain-text table, one row per corpus, histogram as percentages."""
    header = ["corpus", "dialogs", "avg turns", "avg # sen.", *(f"{bucket} (%)" for bucket in HISTOGRAM_BUCKETS)]
    rows = []
    for label, item in stats.items():
        percentages = item.histogram_percentages
        rows.append(
            [
                label,
                str(item.dialog_count),
                f"{item.avg_turns_per_dialog:.2f}",
                f"{item.avg_sentences_per_answer:.2f}",
                *(f"{percentages[bucket]:.2f}" for bucket in HISTOGRAM_BUCKETS),
            ]
        )
    return render_table("Answer length distribution", header, rows)
