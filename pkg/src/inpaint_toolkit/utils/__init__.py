from .json_handler import CustomJSONEncoder, JSONHandler, append_jsonl, read_jsonl, write_jsonl

__all__ = [
    "CustomJSONEncoder",
    "JSONHandler",
    "append_jsonl",
    "read_jsonl",
    "write_jsonl",
]
