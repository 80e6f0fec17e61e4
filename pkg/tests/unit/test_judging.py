"""Unit tests for judge backends and corpus judging."""

from types import SimpleNamespace
from unittest.mock import AsyncMock, MagicMock

import pytest
from factories import make_dialog

from inpaint_toolkit import BackendSettings, JudgmentStore, RubricKind, judge_corpus
from inpaint_toolkit.evaluation import JudgeBackend, OpenAIJudge, ScriptedJudge
from inpaint_toolkit.exceptions import ConfigError, StubExhausted

ALL_RUBRICS = list(RubricKind)


class TestScriptedJudge:
    async def test_replays_in_order(self):
        judge = ScriptedJudge(["Yes", "No"])
        assert isinstance(judge, JudgeBackend)
        assert [await judge.complete("p1"), await judge.complete("p2")] == ["Yes", "No"]
        assert judge.prompts == ["p1", "p2"]
        with pytest.raises(StubExhausted):
            await judge.complete("p3")

    async def test_first_option(self):
        judge = ScriptedJudge.first_option()
        assert await judge.complete("Question\noption:\n* Perfectly\n* Not at all\nRUBRIC:") == "Perfectly"
        assert await judge.complete("no options here") == ""


class TestOpenAIJudge:
    def client(self, content: str) -> MagicMock:
        client = MagicMock()
        client.chat.completions.create = AsyncMock(
            return_value=SimpleNamespace(choices=[SimpleNamespace(message=SimpleNamespace(content=content))])
        )
        return client

    async def test_single_user_message(self):
        client = self.client(" Yes \n")
        judge = OpenAIJudge(BackendSettings(judge_model="judge"), client=client)

        assert await judge.complete("prompt") == "Yes"
        assert client.chat.completions.create.await_args.kwargs == {
            "model": "judge",
            "messages": [{"role": "user", "content": "prompt"}],
        }

    async def test_temperature_is_passed_through(self):
        client = self.client("No")
        judge = OpenAIJudge(BackendSettings(judge_model="judge", temperature=0.7), client=client)
        await judge.complete("prompt")
        assert client.chat.completions.create.await_args.kwargs["temperature"] == 0.7

    def test_model_is_required(self):
        with pytest.raises(ConfigError):
            OpenAIJudge(BackendSettings(), client=MagicMock())


class TestJudgeCorpus:
    """Test fan-out, context windows, parsing and resumption."""

    async def test_every_turn_and_rubric(self, two_turn_dialog):
        judgments, report = await judge_corpus([two_turn_dialog], ScriptedJudge.first_option(), ALL_RUBRICS)

        assert len(judgments) == 8
        assert report.model_dump() == {"requested": 8, "judged": 8, "resumed": 0, "unparseable": 0, "failed": 0}
        assert {(item.rubric, item.label) for item in judgments} == {
            (RubricKind.INFO_SEEKING, "Yes"),
            (RubricKind.RELEVANCE, "Follows up"),
            (RubricKind.SPECIFICITY, "Very"),
            (RubricKind.ANSWEREDNESS, "Perfectly"),
        }
        assert [(item.turn, item.rubric) for item in judgments[:4]] == [(0, kind) for kind in ALL_RUBRICS]

    async def test_context_is_previous_turns_only(self, two_turn_dialog):
        judge = ScriptedJudge(lambda prompt: "Yes")
        await judge_corpus([two_turn_dialog], judge, [RubricKind.INFO_SEEKING])

        first, second = judge.prompts
        assert first.endswith("CONVERSATION: \nQUERY: Who proposed it?\nANSWER: A. B.")
        assert second.endswith("CONVERSATION: Q: Who proposed it?\nA: A. B.\nQUERY: When?\nANSWER: C.")

    async def test_unparseable_replies_are_kept(self, two_turn_dialog):
        judgments, report = await judge_corpus(
            [two_turn_dialog], ScriptedJudge(lambda prompt: "Perhaps"), [RubricKind.INFO_SEEKING]
        )
        assert [item.label for item in judgments] == [None, None]
        assert [item.raw_response for item in judgments] == ["Perhaps", "Perhaps"]
        assert report.unparseable == 2

    async def test_several_raters(self, two_turn_dialog):
        judgments, _ = await judge_corpus(
            [two_turn_dialog], ScriptedJudge.first_option(), [RubricKind.RELEVANCE], raters=3, workers=3
        )
        assert [item.rater for item in judgments] == ["judge-0", "judge-1", "judge-2"] * 2

    async def test_resume_from_store(self, tmp_path, two_turn_dialog):
        path = tmp_path / "judgments.jsonl"
        await judge_corpus([two_turn_dialog], ScriptedJudge.first_option(), ALL_RUBRICS, store=JudgmentStore(path))

        judge = ScriptedJudge.first_option()
        judgments, report = await judge_corpus([two_turn_dialog], judge, ALL_RUBRICS, store=JudgmentStore(path))

        assert judgments == []
        assert judge.prompts == []
        assert report.resumed == 8
        assert len(path.read_text(encoding="utf-8").splitlines()) == 8

    async def test_failures_are_counted_and_filled_on_rerun(self, tmp_path):
        dialog = make_dialog("d", [("Q1?", ["A."]), ("Q2?", ["B."]), ("Q3?", ["C."])])
        path = tmp_path / "judgments.jsonl"

        _, report = await judge_corpus(
            [dialog], ScriptedJudge(["Yes", "No"]), [RubricKind.INFO_SEEKING], store=JudgmentStore(path)
        )
        assert (report.judged, report.failed) == (2, 1)

        judgments, report = await judge_corpus(
            [dialog], ScriptedJudge(["Yes"]), [RubricKind.INFO_SEEKING], store=JudgmentStore(path)
        )
        assert (report.resumed, report.judged, report.failed) == (2, 1, 0)
        assert [item.turn for item in judgments] == [2]
        assert len(JudgmentStore(path)) == 3
