"""Question/answer lexical overlap measured with ROUGE F-measures.

Scoring uses the ``rouge-score`` package without stemming. Text is lower-cased and
split on whitespace and punctuation; letters and digits of any script stay in tokens,
so "Zürich" and "東京" are single tokens.
"""

import logging
import re
from collections.abc import Iterable, Mapping
from functools import lru_cache

from pydantic import BaseModel, ConfigDict, Field
from rouge_score import rouge_scorer, tokenizers

from ..core.models import Dialog
from ..exceptions import ConfigError, ValidationError
from .tables import render_table

logger = logging.getLogger(__name__)

_ROUGE_TYPES = ("rouge1", "rouge2", "rougeL")
_WORD = re.compile(r"[^\W_]+")


class WordTokenizer(tokenizers.Tokenizer):
    """Lower-cased Unicode word tokens."""

    def tokenize(self, text: str) -> list[str]:
        return _WORD.findall(text.lower())


class RougeScores(BaseModel):
    """Mean F-measures; ``pairs`` is the number of (question, answer) pairs averaged."""

    model_config = ConfigDict(frozen=True)

    rouge1: float = Field(ge=0.0, le=1.0)
    rouge2: float = Field(ge=0.0, le=1.0)
    rougeL: float = Field(ge=0.0, le=1.0)
    pairs: int = 0


@lru_cache(maxsize=1)
def _scorer() -> rouge_scorer.RougeScorer:
    return rouge_scorer.RougeScorer(list(_ROUGE_TYPES), use_stemmer=False, tokenizer=WordTokenizer())


def rouge_n(reference: str, hypothesis: str, n: int) -> float:
    """ROUGE-N F1 of clipped n-gram overlap; 0 when either side has no tokens.

    Raises:
        ConfigError: If ``n`` is not 1 or 2
    """
    if n not in (1, 2):
        raise ConfigError(f"ROUGE-N is supported for n in {{1, 2}}, got {n}")
    return _scorer().score(reference, hypothesis)[f"rouge{n}"].fmeasure


def rouge_l(reference: str, hypothesis: str) -> float:
    """ROUGE-L F1 from the longest common token subsequence."""
    return _scorer().score(reference, hypothesis)["rougeL"].fmeasure


def qa_overlap_report(dialogs: Iterable[Dialog]) -> RougeScores:
    """Unweighted mean ROUGE over every (question, answer) pair of the corpus.

    The question is the hypothesis and the joined answer text is the reference.

    Raises:
        ValidationError: If the corpus has no turns
    """
    scorer = _scorer()
    totals = dict.fromkeys(_ROUGE_TYPES, 0.0)
    pairs = 0
    for dialog in dialogs:
        for turn in dialog.turns:
            scores = scorer.score(turn.answer.text, turn.question)
            for rouge_type in _ROUGE_TYPES:
                totals[rouge_type] += scores[rouge_type].fmeasure
            pairs += 1
    if not pairs:
        raise ValidationError("No question/answer pairs to score")
    means = {rouge_type: total / pairs for rouge_type, total in totals.items()}
    logger.info(f"ROUGE over {pairs} pairs: " + " ".join(f"{key}={value:.3f}" for key, value in means.items()))
    return RougeScores(**means, pairs=pairs)


def render_rouge_table(scores: Mapping[str, RougeScores]) -> str:
    """Aligned plain-text table, one row per corpus."""
    header = ["corpus", "ROUGE-1", "ROUGE-2", "ROUGE-L", "pairs"]
    rows = [
        [label, f"{item.rouge1:.3f}", f"{item.rouge2:.3f}", f"{item.rougeL:.3f}", str(item.pairs)]
        for label, item in scores.items()
    ]
    return render_table("Mean per (question, answer) pair", header, rows)
