from pathlib import Path

import pytest
from factories import make_dialog, make_document

from inpaint_toolkit import Dialog, Document

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN


@pytest.fixture
def two_turn_dialog() -> Dialog:
    """A titled dialog with a two-sentence answer followed by a one-sentence answer."""
    return make_dialog("d1", [("Who proposed it?", ["A.", "B."]), ("When?", ["C."])], title="T")


@pytest.fixture
def three_sentence_document() -> Document:
    return make_document("doc-1", ["s1", "s2", "s3"])
