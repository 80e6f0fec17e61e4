"""Turn-level judgments: records, persistence, majority aggregation and tabulation."""

import logging
from collections import Counter, defaultdict
from collections.abc import Callable, Iterable, Mapping
from pathlib import Path
from typing import NamedTuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..analytics.tables import render_table
from ..core.models import RubricKind
from ..exceptions import ParseError, ValidationError
from ..utils.json_handler import append_jsonl, read_jsonl
from .rubrics import RUBRICS

logger = logging.getLogger(__name__)


class JudgmentKey(NamedTuple):
    dialog_id: str
    turn: int
    rubric: RubricKind


class RubricJudgment(BaseModel):
    """One rater's verdict on one rubric for one dialog turn.

    ``label`` is ``None`` when the rater's response could not be parsed; such
    judgments are kept for bookkeeping but abstain from aggregation.
    """

    model_config = ConfigDict(frozen=True)

    dialog_id: str
    turn: int = Field(ge=0)
    rubric: RubricKind
    rater: str
    raw_response: str | None = None
    label: str | None = None

    @model_validator(mode="after")
    def _label_is_an_option(self) -> "RubricJudgment":
        if self.label is not None and self.label not in RUBRICS[self.rubric].options:
            raise ValueError(f"'{self.label}' is not a {self.rubric} option")
        return self

    @property
    def key(self) -> JudgmentKey:
        return JudgmentKey(self.dialog_id, self.turn, self.rubric)

    @property
    def store_key(self) -> tuple[str, int, RubricKind, str]:
        return (self.dialog_id, self.turn, self.rubric, self.rater)


def majority_label(labels: Iterable[str | None]) -> str | None:
    """The label agreed on by at least two raters, or the lone label of a single rater.

    Abstentions are ignored; ties and all-distinct votes give ``None``.
    """
    votes = Counter(label for label in labels if label is not None)
    if not votes:
        return None
    if sum(votes.values()) == 1:
        return next(iter(votes))
    (top, top_count), *rest = votes.most_common()
    if top_count < 2 or (rest and rest[0][1] == top_count):
        return None
    return top


def aggregate_majority(judgments: Iterable[RubricJudgment]) -> dict[JudgmentKey, str | None]:
    """Consensus label per (dialog, turn, rubric); ``None`` marks no consensus."""
    grouped: dict[JudgmentKey, list[str | None]] = defaultdict(list)
    for judgment in judgments:
        grouped[judgment.key].append(judgment.label)
    return {key: majority_label(labels) for key, labels in grouped.items()}


class TableRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    percentages: dict[str, float]
    counts: dict[str, int]
    consensus: int
    no_consensus: int


class RubricTable(BaseModel):
    """Percentage of turns per option and system for one rubric."""

    model_config = ConfigDict(frozen=True)

    rubric: RubricKind
    options: tuple[str, ...]
    rows: dict[str, TableRow]

    def render(self) -> str:
        header = ["system", *self.options, "n", "no consensus"]
        body = [
            [name, *(f"{row.percentages[option]:.1f}" for option in self.options), str(row.consensus)]
            + [str(row.no_consensus)]
            for name, row in self.rows.items()
        ]
        return render_table(f"[{self.rubric}]", header, body)


def tabulate(
    consensus_by_system: Mapping[str, Mapping[JudgmentKey, str | None]],
    rubric: RubricKind | str,
    split: Callable[[JudgmentKey], str] | None = None,
) -> RubricTable:
    """Percentages per option for each system, over turns with a consensus label.

    Args:
        consensus_by_system: ``aggregate_majority`` output per system name
        rubric: Rubric to tabulate
        split: Optional grouping of turns (e.g. topic-shift questions vs the rest);
            each group gets its own row named ``"{system} [{group}]"``

    Raises:
        ValidationError: If no system has any judgment for the rubric
    """
    kind = RubricKind(rubric)
    options = RUBRICS[kind].options
    buckets: dict[str, list[str | None]] = {}
    for system, consensus in consensus_by_system.items():
        for key, label in consensus.items():
            if key.rubric is not kind:
                continue
            name = system if split is None else f"{system} [{split(key)}]"
            buckets.setdefault(name, []).append(label)
    if not buckets:
        raise ValidationError(f"No {kind} judgments to tabulate")

    rows = {}
    for name, labels in buckets.items():
        agreed = [label for label in labels if label is not None]
        counts = {option: agreed.count(option) for option in options}
        total = len(agreed)
        rows[name] = TableRow(
            percentages={option: (100.0 * counts[option] / total if total else 0.0) for option in options},
            counts=counts,
            consensus=total,
            no_consensus=len(labels) - total,
        )
    return RubricTable(rubric=kind, options=options, rows=rows)


def _judgment_from_record(record: object, path: Path, line_number: int) -> RubricJudgment:
    try:
        return RubricJudgment.model_validate(record)
    except ValueError as e:
        raise ParseError(f"{path}:{line_number}: bad judgment record: {e}", line_number, str(path), e) from e


class JudgmentStore:
    """Append-only JSONL store of judgments, unique per (dialog, turn, rubric, rater).

    Re-running a judging job against the same store skips judgments already present.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._keys: set[tuple[str, int, RubricKind, str]] = set()
        if self.path.exists():
            for judgment in self.judgments():
                self._keys.add(judgment.store_key)
            logger.info(f"Resuming from {len(self._keys)} stored judgments in {self.path}")

    def __len__(self) -> int:
        return len(self._keys)

    def __contains__(self, key: tuple[str, int, RubricKind, str]) -> bool:
        return key in self._keys

    def append(self, judgment: RubricJudgment) -> bool:
        """Persist a judgment; returns False if one with the same key is already stored."""
        if judgment.store_key in self._keys:
            return False
        append_jsonl(self.path, judgment)
        self._keys.add(judgment.store_key)
        return True

    def judgments(self) -> list[RubricJudgment]:
        if not self.path.exists():
            return []
        return [_judgment_from_record(record, self.path, line_number) for line_number, record in read_jsonl(self.path)]


def load_human_judgments(path: str | Path, min_raters: int = 3) -> list[RubricJudgment]:
    """Read human judgments in the persisted record format.

    Raises:
        ParseError: If a record is malformed
        ValidationError: If a judged turn has fewer than ``min_raters`` distinct raters
    """
    path = Path(path)
    judgments = [_judgment_from_record(record, path, line_number) for line_number, record in read_jsonl(path)]
    raters: dict[JudgmentKey, set[str]] = defaultdict(set)
    for judgment in judgments:
        raters[judgment.key].add(judgment.rater)
    violations = [
        f"{key.dialog_id} turn {key.turn} {key.rubric}: {len(names)} raters"
        for key, names in raters.items()
        if len(names) < min_raters
    ]
    if violations:
        raise ValidationError(f"{len(violations)} turns have fewer than {min_raters} raters", violations)
    logger.info(f"Loaded {len(judgments)} human judgments for {len(raters)} turn/rubric pairs from {path}")
    return judgments
