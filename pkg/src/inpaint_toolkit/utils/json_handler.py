"""JSON and JSON Lines handling for corpus, trace and report files."""

import json
import logging
from collections.abc import Iterable, Iterator
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

from ..exceptions import ParseError

logger = logging.getLogger(__name__)


class CustomJSONEncoder(json.JSONEncoder):
    """Encoder for the values that end up in toolkit files.

    Enums become their values, numpy scalars and arrays become Python numbers and
    lists, sets become sorted lists and pydantic models are dumped in JSON mode.
    """

    def default(self, obj: Any) -> Any:
        if isinstance(obj, Enum):
            return obj.value
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, set | frozenset):
            return sorted(obj)
        if hasattr(obj, "model_dump"):
            return obj.model_dump(mode="json")
        return super().default(obj)


class JSONHandler:
    """Serialize and deserialize JSON with deterministic output.

    Serialization keeps insertion order of keys (field order of the models) and uses
    compact separators, so the same structure always produces the same bytes.
    """

    @staticmethod
    def serialize(data: Any, indent: int | None = None) -> str:
        """Encode one value; ``indent`` switches to the readable layout used for reports.

        Raises:
            ValueError: If the value holds an unsupported type or a non-finite float
        """
        separators = (",", ": ") if indent is not None else (",", ":")
        try:
            return json.dumps(
                data, cls=CustomJSONEncoder, ensure_ascii=False, allow_nan=False, indent=indent, separators=separators
            )
        except (TypeError, ValueError, OverflowError) as e:
            logger.error(f"Cannot encode {type(data).__name__} as JSON: {e}")
            raise ValueError(f"Cannot serialize to JSON: {e}") from e

    @staticmethod
    def deserialize(text: str | bytes | None) -> Any:
        """Decode UTF-8 text or bytes; ``None`` passes through.

        Raises:
            ValueError: If the input is not valid UTF-8 JSON
        """
        if text is None:
            return None
        try:
            return json.loads(text.decode("utf-8") if isinstance(text, bytes) else text)
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            logger.debug(f"Invalid JSON input: {e}")
            raise ValueError(f"Cannot deserialize JSON: {e}") from e


def read_jsonl(path: str | Path) -> Iterator[tuple[int, Any]]:
    """Yield ``(line_number, record)`` pairs from a JSON Lines file.

    Blank lines are skipped. Line numbers are 1-based.

    Raises:
        ParseError: If a non-blank line is not valid JSON.
    """
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                yield line_number, JSONHandler.deserialize(line)
            except ValueError as e:
                raise ParseError(
                    f"{path}:{line_number}: invalid JSON record",
                    line_number=line_number,
                    path=str(path),
                    original_error=e,
                ) from e


def write_jsonl(path: str | Path, records: Iterable[Any]) -> int:
    """Write records to a JSON Lines file, one compact object per line.

    Returns:
        Number of records written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(JSONHandler.serialize(record))
            fh.write("\n")
            count += 1
    logger.debug(f"Wrote {count} records to {path}")
    return count


def append_jsonl(path: str | Path, record: Any) -> None:
    """Append a single record to a JSON Lines file, creating it if needed."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8", newline="\n") as fh:
        fh.write(JSONHandler.serialize(record))
        fh.write("\n")
