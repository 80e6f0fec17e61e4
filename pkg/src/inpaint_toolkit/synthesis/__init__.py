from .backends import GeneratorBackend, OpenAIGenerator, ScriptedGenerator, render_fills, scripted_stub
from .engine import (
    SynthesisResult,
    SynthesisStats,
    SynthesisTrace,
    WindowRecord,
    build_inference_window,
    inpaint_document,
    salvage_question,
    segment_from_fills,
    synthesize_corpus,
)

__all__ = [
    "GeneratorBackend",
    "OpenAIGenerator",
    "ScriptedGenerator",
    "SynthesisResult",
    "SynthesisStats",
    "SynthesisTrace",
    "WindowRecord",
    "build_inference_window",
    "inpaint_document",
    "render_fills",
    "salvage_question",
    "scripted_stub",
    "segment_from_fills",
    "synthesize_corpus",
]
