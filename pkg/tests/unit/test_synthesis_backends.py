"""Unit tests for generator backends."""

from types import SimpleNamespace
from unittest.mock import AsyncMock, MagicMock

import pytest
from openai import APIConnectionError

from inpaint_toolkit import BackendSettings
from inpaint_toolkit.exceptions import BackendError, ConfigError, StubExhausted
from inpaint_toolkit.synthesis import GeneratorBackend, OpenAIGenerator, ScriptedGenerator, render_fills


def completion(text: str) -> SimpleNamespace:
    return SimpleNamespace(choices=[SimpleNamespace(text=text)])


def mock_client(*responses) -> MagicMock:
    client = MagicMock()
    client.completions.create = AsyncMock(side_effect=list(responses))
    return client


class TestRenderFills:
    def test_layout(self):
        assert render_fills(["Q1?", "", "X?"]) == "<S0> Q1? <S1> <S2> X? <S3>"
        assert render_fills(["Q?"]) == "<S0> Q? <S1>"


class TestScriptedGenerator:
    async def test_replays_in_order(self):
        backend = ScriptedGenerator(["one", "two"])
        assert isinstance(backend, GeneratorBackend)
        assert await backend.generate("a") == "one"
        assert await backend.generate("b") == "two"
        assert backend.inputs == ["a", "b"]
        assert backend.remaining == 0

    async def test_exhausted(self):
        with pytest.raises(StubExhausted):
            await ScriptedGenerator([]).generate("a")


class TestOpenAIGenerator:
    """Test the OpenAI-compatible adapter with a mocked client."""

    def settings(self, **values) -> BackendSettings:
        return BackendSettings(kind="openai", generator_model="inpainter", max_attempts=2, **values)

    def test_model_is_required(self):
        with pytest.raises(ConfigError):
            OpenAIGenerator(BackendSettings(kind="openai"), client=MagicMock())

    async def test_generate(self):
        client = mock_client(completion("<S0> Q? <S1>"))
        backend = OpenAIGenerator(self.settings(max_new_tokens=64), client=client)

        assert await backend.generate("Type: raw <S0> s1") == "<S0> Q? <S1>"
        kwargs = client.completions.create.await_args.kwargs
        assert kwargs["model"] == "inpainter"
        assert kwargs["prompt"] == "Type: raw <S0> s1"
        assert kwargs["max_tokens"] == 64
        assert kwargs["temperature"] == 0.0

    async def test_t5_vocabulary(self):
        client = mock_client(completion("<pad> <extra_id_0> Q? <extra_id_1></s>"))
        backend = OpenAIGenerator(self.settings(sentinel_vocabulary="t5"), client=client)

        assert await backend.generate("Type: raw <S0> s1") == "<S0> Q? <S1>"
        assert client.completions.create.await_args.kwargs["prompt"] == "Type: raw <extra_id_0> s1"

    async def test_transient_errors_are_retried(self):
        error = APIConnectionError(request=MagicMock())
        client = mock_client(error, completion("<S0> Q? <S1>"))
        backend = OpenAIGenerator(self.settings(), client=client)

        assert await backend.generate("x") == "<S0> Q? <S1>"
        assert client.completions.create.await_count == 2

    async def test_retries_exhausted(self):
        error = APIConnectionError(request=MagicMock())
        backend = OpenAIGenerator(self.settings(), client=mock_client(error, error))

        with pytest.raises(BackendError) as exc_info:
            await backend.generate("x")
        assert exc_info.value.original_error is error
