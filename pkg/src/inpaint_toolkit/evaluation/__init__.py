from .backends import JudgeBackend, OpenAIJudge, ScriptedJudge
from .judging import JudgeReport, judge_corpus
from .judgments import (
    JudgmentKey,
    JudgmentStore,
    RubricJudgment,
    RubricTable,
    TableRow,
    aggregate_majority,
    load_human_judgments,
    majority_label,
    tabulate,
)
from .rubrics import PROMPT_TEMPLATES, RUBRICS, RubricQuestion, parse_judgment, render_conversation, render_prompt
from .significance import SystemComparison, ZTestResult, compare_systems, two_proportion_z_test

__all__ = [
    "PROMPT_TEMPLATES",
    "RUBRICS",
    "JudgeBackend",
    "JudgeReport",
    "JudgmentKey",
    "JudgmentStore",
    "OpenAIJudge",
    "RubricJudgment",
    "RubricQuestion",
    "RubricTable",
    "ScriptedJudge",
    "SystemComparison",
    "TableRow",
    "ZTestResult",
    "aggregate_majority",
    "compare_systems",
    "judge_corpus",
    "load_human_judgments",
    "majority_label",
    "parse_judgment",
    "render_conversation",
    "render_prompt",
    "tabulate",
    "two_proportion_z_test",
]
