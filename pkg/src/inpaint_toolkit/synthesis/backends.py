"""Generator backends: text in, sentinel-format completion out."""

import logging
from collections.abc import Sequence
from typing import Protocol, runtime_checkable

from openai import AsyncOpenAI, OpenAIError
from tenacity import AsyncRetrying, RetryError, retry_if_exception_type, stop_after_attempt, wait_exponential

from ..core.config import BackendSettings
from ..exceptions import BackendError, ConfigError, StubExhausted
from ..prep.sentinels import SentinelVocabulary, sentinel

logger = logging.getLogger(__name__)


@runtime_checkable
class GeneratorBackend(Protocol):
    """A model that completes a sentinel-format input with its slot fills."""

    async def generate(self, input_text: str) -> str: ...


class ScriptedGenerator:
    """Deterministic generator that replays a fixed list of completions in order.

    Attributes:
        inputs: Every input received, in call order
    """

    def __init__(self, script: Sequence[str]):
        self._script = list(script)
        self._position = 0
        self.inputs: list[str] = []

    @classmethod
    def from_fills(cls, fills_script: Sequence[Sequence[str]]) -> "ScriptedGenerator":
        """Build a script from per-call fill lists, e.g. ``[["Q1?", "", "X?"], ["Q2?"]]``."""
        return cls([render_fills(fills) for fills in fills_script])

    @property
    def remaining(self) -> int:
        return len(self._script) - self._position

    async def generate(self, input_text: str) -> str:
        if self._position >= len(self._script):
            raise StubExhausted(f"Scripted generator exhausted after {len(self._script)} outputs")
        self.inputs.append(input_text)
        output = self._script[self._position]
        self._position += 1
        return output


def render_fills(fills: Sequence[str]) -> str:
    """Render fills as a completion: each sentinel followed by its fill, then the terminator."""
    parts: list[str] = []
    for index, fill in enumerate(fills):
        parts.append(sentinel(index))
        if fill:
            parts.append(fill)
    parts.append(sentinel(len(fills)))
    return " ".join(parts)


def scripted_stub(script: Sequence[str]) -> ScriptedGenerator:
    return ScriptedGenerator(script)


class OpenAIGenerator:
    """Generator served by an OpenAI-compatible completions endpoint.

    The served model is expected to be trained on the sentinel format; canonical
    sentinels are translated to the model's vocabulary before the call and back after.
    """

    def __init__(self, settings: BackendSettings, client: AsyncOpenAI | None = None):
        if not settings.generator_model:
            raise ConfigError("Generator model is not configured: set INPAINT_GENERATOR_MODEL")
        self._settings = settings
        self._vocabulary = SentinelVocabulary(settings.sentinel_vocabulary)
        self._client = client or AsyncOpenAI(
            base_url=settings.generator_url,
            api_key=settings.api_key_for(settings.generator_url),
            timeout=settings.request_timeout,
        )

    async def generate(self, input_text: str) -> str:
        prompt = self._vocabulary.to_native(input_text)
        try:
            async for attempt in AsyncRetrying(
                stop=stop_after_attempt(self._settings.max_attempts),
                wait=wait_exponential(multiplier=1, min=1, max=10),
                retry=retry_if_exception_type(OpenAIError),
            ):
                with attempt:
                    response = await self._client.completions.create(
                        model=self._settings.generator_model,
                        prompt=prompt,
                        max_tokens=self._settings.max_new_tokens,
                        temperature=self._settings.temperature if self._settings.temperature is not None else 0.0,
                    )
        except RetryError as e:
            logger.error(f"Generator endpoint failed after {self._settings.max_attempts} attempts: {e}")
            raise BackendError("Generator endpoint failed", e.last_attempt.exception()) from e
        text = response.choices[0].text or ""
        return self._vocabulary.from_native(text)
