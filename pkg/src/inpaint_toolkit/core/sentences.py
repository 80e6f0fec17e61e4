"""Deterministic sentence splitting.

Two splitters are available. ``rule`` breaks after a token ending in terminal
punctuation (optionally followed by closing quotes or brackets) unless the token
is a listed abbreviation. Numeric abbreviations such as "No." only hold when a number
follows. ``punkt`` runs nltk's Punkt tokenizer with the general abbreviation list
injected as parameters, so no trained model is downloaded.

Both splitters only break at whitespace, which keeps the partition property:
joining the sentences with single spaces gives back the whitespace-normalized input.
"""

import logging
import re
from functools import lru_cache

from nltk.tokenize.punkt import PunktParameters, PunktSentenceTokenizer

from ..exceptions import InvalidInput
from .config import SplitterConfig

logger = logging.getLogger(__name__)

_TERMINAL = re.compile(r"[.!?]+[\"'’”)\]]*$")
_CLOSERS = "\"'’”)]"
_OPENERS = "\"'‘“(["

_DEFAULT_CONFIG = SplitterConfig()


def normalize_whitespace(text: str) -> str:
    return " ".join(text.split())


def _is_abbreviation(token: str, abbreviations: frozenset[str]) -> bool:
    core = token.rstrip(_CLOSERS).lstrip(_OPENERS)
    if not core.endswith("."):
        return False
    return core[:-1].lower() in abbreviations


def _holds_before_number(token: str, following: str | None, numeric_abbreviations: frozenset[str]) -> bool:
    if following is None or not following[:1].isdigit():
        return False
    return _is_abbreviation(token, numeric_abbreviations)


def _rule_split(text: str, abbreviations: frozenset[str], numeric_abbreviations: frozenset[str]) -> list[str]:
    sentences: list[str] = []
    current: list[str] = []
    tokens = text.split(" ")
    for index, token in enumerate(tokens):
        current.append(token)
        if not _TERMINAL.search(token) or _is_abbreviation(token, abbreviations):
            continue
        following = tokens[index + 1] if index + 1 < len(tokens) else None
        if _holds_before_number(token, following, numeric_abbreviations):
            continue
        sentences.append(" ".join(current))
        current = []
    if current:
        sentences.append(" ".join(current))
    return sentences


@lru_cache(maxsize=8)
def _punkt_tokenizer(abbreviations: tuple[str, ...]) -> PunktSentenceTokenizer:
    params = PunktParameters()
    params.abbrev_types = {abbrev.lower() for abbrev in abbreviations}
    return PunktSentenceTokenizer(params)


def split_sentences(text: str, config: SplitterConfig | None = None) -> list[str]:
    """Split passage text into sentences.

    Args:
        text: Passage text
        config: Splitter selection; defaults to the rule-based splitter

    Returns:
        Non-empty sentences in order

    Raises:
        InvalidInput: If the text is empty or whitespace-only

    Example:
        >>> split_sentences("Dr. Smith arrived. He left.")
        ['Dr. Smith arrived.', 'He left.']
    """
    config = config or _DEFAULT_CONFIG
    normalized = normalize_whitespace(text or "")
    if not normalized:
        raise InvalidInput("Cannot split empty or whitespace-only text into sentences")

    if config.kind == "punkt":
        raw = _punkt_tokenizer(config.abbreviations).tokenize(normalized)
        sentences = [normalize_whitespace(sentence) for sentence in raw]
        sentences = [sentence for sentence in sentences if sentence]
    else:
        sentences = _rule_split(normalized, frozenset(config.abbreviations), frozenset(config.numeric_abbreviations))

    logger.debug(f"Split {len(normalized)} characters into {len(sentences)} sentences with '{config.kind}' splitter")
    return sentences
