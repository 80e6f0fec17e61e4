"""Judge backends: rubric prompt in, short option text out."""

import logging
from collections.abc import Callable, Sequence
from typing import Protocol, runtime_checkable

from openai import AsyncOpenAI, OpenAIError
from tenacity import AsyncRetrying, RetryError, retry_if_exception_type, stop_after_attempt, wait_exponential

from ..core.config import BackendSettings
from ..exceptions import BackendError, ConfigError, StubExhausted

logger = logging.getLogger(__name__)


@runtime_checkable
class JudgeBackend(Protocol):
    async def complete(self, prompt_text: str) -> str: ...


class ScriptedJudge:
    """Deterministic judge.

    Given a list, replies with its items in order and raises ``StubExhausted`` when
    they run out. Given a callable, replies with ``responder(prompt)`` every time.
    """

    def __init__(self, responses: Sequence[str] | Callable[[str], str]):
        self._responder = responses if callable(responses) else None
        self._responses = [] if callable(responses) else list(responses)
        self._position = 0
        self.prompts: list[str] = []

    @classmethod
    def first_option(cls) -> "ScriptedJudge":
        """A judge that always picks the first listed option of any rubric."""

        def responder(prompt: str) -> str:
            for line in prompt.splitlines():
                if line.startswith("* "):
                    return line[2:]
            return ""

        return cls(responder)

    async def complete(self, prompt_text: str) -> str:
        self.prompts.append(prompt_text)
        if self._responder is not None:
            return self._responder(prompt_text)
        if self._position >= len(self._responses):
            raise StubExhausted(f"Scripted judge exhausted after {len(self._responses)} responses")
        response = self._responses[self._position]
        self._position += 1
        return response


class OpenAIJudge:
    """Judge served by an OpenAI-compatible chat completions endpoint.

    The rubric prompt is sent as a single user message; temperature is passed through
    unchanged when configured.
    """

    def __init__(self, settings: BackendSettings, client: AsyncOpenAI | None = None):
        if not settings.judge_model:
            raise ConfigError("Judge model is not configured: set INPAINT_JUDGE_MODEL")
        self._settings = settings
        self._client = client or AsyncOpenAI(
            base_url=settings.judge_url,
            api_key=settings.api_key_for(settings.judge_url),
            timeout=settings.request_timeout,
        )

    async def complete(self, prompt_text: str) -> str:
        extra = {} if self._settings.temperature is None else {"temperature": self._settings.temperature}
        try:
            async for attempt in AsyncRetrying(
                stop=stop_after_attempt(self._settings.max_attempts),
                wait=wait_exponential(multiplier=1, min=1, max=10),
                retry=retry_if_exception_type(OpenAIError),
            ):
                with attempt:
                    response = await self._client.chat.completions.create(
                        model=self._settings.judge_model,
                        messages=[{"role": "user", "content": prompt_text}],
                        **extra,
                    )
        except RetryError as e:
            logger.error(f"Judge endpoint failed after {self._settings.max_attempts} attempts: {e}")
            raise BackendError("Judge endpoint failed", e.last_attempt.exception()) from e
        return (response.choices[0].message.content or "").strip()
