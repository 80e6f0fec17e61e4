"""Unit tests for CustomJSONEncoder."""

import json
from enum import Enum

import numpy as np
import pytest
from factories import make_turn

from inpaint_toolkit import QuestionType, Turn
from inpaint_toolkit.utils.json_handler import CustomJSONEncoder


class Colour(Enum):
    RED = "red"


def encode(obj) -> str:
    return json.dumps(obj, cls=CustomJSONEncoder)


class TestCustomJSONEncoder:
    """Test the types the encoder adds on top of the standard encoder."""

    def test_enum(self):
        """Test enums serialize to their value."""
        assert encode({"c": Colour.RED, "q": QuestionType.REWRITTEN}) == '{"c": "red", "q": "rewritten"}'

    def test_numpy_scalars(self):
        """Test numpy integers and floats become plain numbers."""
        result = json.loads(encode({"i": np.int64(3), "f": np.float32(0.5)}))
        assert result == {"i": 3, "f": 0.5}
        assert isinstance(result["i"], int)

    def test_numpy_array(self):
        """Test numpy arrays become nested lists."""
        assert json.loads(encode(np.array([[1.0, 2.0], [3.0, 4.0]]))) == [[1.0, 2.0], [3.0, 4.0]]

    def test_sets_are_sorted(self):
        """Test sets serialize as sorted lists for stable output."""
        assert encode({"tags": {"b", "a", "c"}}) == '{"tags": ["a", "b", "c"]}'
        assert encode(frozenset({2, 1})) == "[1, 2]"

    def test_pydantic_model(self):
        """Test Pydantic models serialize through model_dump in JSON mode."""
        turn = make_turn("Who?", ["A.", "B."])
        result = json.loads(encode(turn))
        assert result == {"question": "Who?", "question_type": "raw", "answer": {"sentences": ["A.", "B."]}}
        assert Turn.model_validate(result) == turn

    def test_unsupported_type(self):
        """Test unsupported types still raise TypeError."""
        with pytest.raises(TypeError):
            encode(object())
