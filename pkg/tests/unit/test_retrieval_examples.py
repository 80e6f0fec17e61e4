"""Unit tests for retrieval example construction."""

import pytest
from factories import make_turn
from pydantic import ValidationError as PydanticValidationError

from inpaint_toolkit import RetrievalExample, build_query_text
from inpaint_toolkit.exceptions import ParseError, ValidationError
from inpaint_toolkit.retrieval import dialogs_to_retrieval_examples, load_annotated_examples


class TestBuildQueryText:
    def test_history_then_question(self):
        assert build_query_text([make_turn("Q1", ["A1"])], "Q2") == "Q1 A1 Q2"

    def test_no_history(self):
        assert build_query_text([], "Q1") == "Q1"

    def test_multi_sentence_answers(self):
        history = [make_turn("Q1?", ["A.", "B."]), make_turn("Q2?", ["C."])]
        assert build_query_text(history, "Q3?") == "Q1? A. B. Q2? C. Q3?"

    def test_empty_question(self):
        with pytest.raises(ValidationError):
            build_query_text([], "  ")


class TestDialogsToExamples:
    def test_one_example_per_turn(self, two_turn_dialog):
        examples = dialogs_to_retrieval_examples([two_turn_dialog])
        assert examples == [
            RetrievalExample(query="Who proposed it?", positive_passage="A. B."),
            RetrievalExample(query="Who proposed it? A. B. When?", positive_passage="C."),
        ]


class TestRetrievalExample:
    def test_blank_fields_are_rejected(self):
        with pytest.raises(PydanticValidationError):
            RetrievalExample(query=" ", positive_passage="p")
        with pytest.raises(PydanticValidationError):
            RetrievalExample(query="q", positive_passage="")


class TestLoadAnnotatedExamples:
    def test_fixture(self, fixtures_dir):
        examples = load_annotated_examples(fixtures_dir / "annotated.jsonl")
        assert [len(example.negative_passages) for example in examples] == [2, 1]
        assert examples[1].query == "who wrote dune"

    @pytest.mark.parametrize(
        "line",
        ['{"query": "q"}', '{"query": "q", "positive": "p", "negatives": "n"}', '{"query": "", "positive": "p"}', "[]"],
    )
    def test_malformed(self, tmp_path, line):
        path = tmp_path / "annotated.jsonl"
        path.write_text(line + "\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_annotated_examples(path)
