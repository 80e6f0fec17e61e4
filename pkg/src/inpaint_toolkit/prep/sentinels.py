"""Sentinel markers for masked slots.

The canonical surface form is ``<S{k}>``. Backends trained with a different sentinel
vocabulary (T5 uses ``<extra_id_{k}>``) get their text translated at the adapter
boundary with :class:`SentinelVocabulary`.
"""

import logging
import re

from ..exceptions import ConfigError, MalformedGeneration, ValidationError

logger = logging.getLogger(__name__)

_SENTINEL_RE = re.compile(r"<S(\d+)>")


def sentinel(index: int) -> str:
    return f"<S{index}>"


def count_sentinels(text: str) -> int:
    return len(_SENTINEL_RE.findall(text))


def strip_sentinels(text: str) -> str:
    return " ".join(_SENTINEL_RE.sub(" ", text).split())


def parse_sentinel_output(output_text: str, num_slots: int) -> list[str]:
    """Recover slot fills from a sentinel-format completion.

    Fill k is the text strictly between sentinel k and the next sentinel (or the end
    of the text), stripped of surrounding whitespace. A missing terminator sentinel
    is tolerated; text before sentinel 0 is ignored.

    Args:
        output_text: Completion such as ``"<S0> Q? <S1> <S2>"``
        num_slots: Number of slots the input contained

    Returns:
        Exactly ``num_slots`` fills, possibly empty strings

    Raises:
        ValidationError: If num_slots is smaller than 1
        MalformedGeneration: If a sentinel 0..num_slots-1 is absent or out of order

    Example:
        >>> parse_sentinel_output("<S0> Q? <S1> <S2>", 2)
        ['Q?', '']
    """
    if num_slots < 1:
        raise ValidationError(f"num_slots must be at least 1, got {num_slots}")

    matches = list(_SENTINEL_RE.finditer(output_text))
    fills: list[str] = []
    for k in range(num_slots):
        if k >= len(matches):
            raise MalformedGeneration(f"Sentinel {sentinel(k)} is missing", output_text)
        found = int(matches[k].group(1))
        if found != k:
            raise MalformedGeneration(f"Expected sentinel {sentinel(k)} but found {sentinel(found)}", output_text)
        end = matches[k + 1].start() if k + 1 < len(matches) else len(output_text)
        fills.append(output_text[matches[k].end() : end].strip())
    return fills


class SentinelVocabulary:
    """Translate between canonical sentinels and a backend's native sentinel tokens.

    Attributes:
        name: ``canonical`` (identity) or ``t5`` (``<extra_id_{k}>``)
    """

    _NATIVE_PATTERNS: dict[str, tuple[str, re.Pattern[str]]] = {
        "t5": ("<extra_id_{k}>", re.compile(r"<extra_id_(\d+)>")),
    }
    _NOISE = ("<pad>", "</s>")

    def __init__(self, name: str = "canonical"):
        if name != "canonical" and name not in self._NATIVE_PATTERNS:
            raise ConfigError(f"Unknown sentinel vocabulary: {name}")
        self.name = name

    def to_native(self, text: str) -> str:
        if self.name == "canonical":
            return text
        template, _ = self._NATIVE_PATTERNS[self.name]
        return _SENTINEL_RE.sub(lambda m: template.format(k=m.group(1)), text)

    def from_native(self, text: str) -> str:
        if self.name == "canonical":
            return text
        _, pattern = self._NATIVE_PATTERNS[self.name]
        for token in self._NOISE:
            text = text.replace(token, " ")
        return pattern.sub(lambda m: sentinel(int(m.group(1))), text).strip()
