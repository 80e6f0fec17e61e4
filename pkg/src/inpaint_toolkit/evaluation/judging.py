import asyncio
import logging
from collections.abc import Sequence

from pydantic import BaseModel, ConfigDict

from ..core.models import Dialog, RubricKind
from ..exceptions import UnparseableJudgment
from .backends import JudgeBackend
from .judgments import JudgmentStore, RubricJudgment
from .rubrics import parse_judgment, render_prompt

logger = logging.getLogger(__name__)


class JudgeReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    requested: int
    judged: int
    resumed: int
    unparseable: int
    failed: int


def _rater_id(index: int) -> str:
    return f"judge-{index}"


async def judge_corpus(
    dialogs: Sequence[Dialog],
    backend: JudgeBackend,
    rubrics: Sequence[RubricKind],
    raters: int = 1,
    store: JudgmentStore | None = None,
    workers: int = 1,
) -> tuple[list[RubricJudgment], JudgeReport]:
    """Judge every turn of every dialog on each rubric, ``raters`` times.

    The prompt for turn t carries only turns 0..t-1 as conversation. Unparseable
    replies are kept with ``label=None``. Backend failures are logged and counted;
    the remaining calls still run, and with a store the job can be re-run to fill
    the gaps. Each judgment is persisted as soon as it is parsed.

    Returns:
        New judgments in (dialog, turn, rubric, rater) order, and a report
    """
    semaphore = asyncio.Semaphore(max(workers, 1))
    tasks = []
    resumed = 0
    for dialog in dialogs:
        for index in range(len(dialog.turns)):
            for rubric in rubrics:
                for rater in range(raters):
                    if store is not None and (dialog.id, index, RubricKind(rubric), _rater_id(rater)) in store:
                        resumed += 1
                        continue
                    tasks.append((dialog, index, RubricKind(rubric), _rater_id(rater)))

    async def run(dialog: Dialog, index: int, rubric: RubricKind, rater: str) -> RubricJudgment | None:
        turn = dialog.turns[index]
        prompt = render_prompt(rubric, dialog.turns[:index], turn.question, turn.answer.text)
        async with semaphore:
            try:
                response = await backend.complete(prompt)
            except Exception as e:
                logger.error(f"Judge call failed for {dialog.id} turn {index} {rubric} ({rater}): {e}")
                return None
        try:
            label: str | None = parse_judgment(rubric, response)
        except UnparseableJudgment:
            label = None
        judgment = RubricJudgment(
            dialog_id=dialog.id, turn=index, rubric=rubric, rater=rater, raw_response=response, label=label
        )
        if store is not None:
            store.append(judgment)
        return judgment

    outcomes = await asyncio.gather(*(run(*task) for task in tasks))
    judgments = [judgment for judgment in outcomes if judgment is not None]

    report = JudgeReport(
        requested=len(tasks) + resumed,
        judged=len(judgments),
        resumed=resumed,
        unparseable=sum(1 for judgment in judgments if judgment.label is None),
        failed=len(tasks) - len(judgments),
    )
    logger.info(
        f"Judged {report.judged} of {report.requested} ({report.resumed} resumed, "
        f"{report.unparseable} unparseable, {report.failed} failed)"
    )
    return judgments, report
