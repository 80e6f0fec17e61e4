"""Encoder backends for the dual encoder."""

import hashlib
import logging
import re
from collections.abc import Sequence
from typing import TYPE_CHECKING, Protocol, runtime_checkable

import numpy as np
from openai import AsyncOpenAI, OpenAIError
from tenacity import AsyncRetrying, RetryError, retry_if_exception_type, stop_after_attempt, wait_exponential

from ..core.config import BackendSettings
from ..exceptions import BackendError, ConfigError, TrainingError

if TYPE_CHECKING:
    from .training import LossBatch

logger = logging.getLogger(__name__)

_TOKEN_PATTERN = re.compile(r"\w+")


@runtime_checkable
class EncoderBackend(Protocol):
    """Embeds texts and consumes loss batches to update its parameters."""

    async def embed(self, texts: Sequence[str]) -> list[list[float]]: ...

    async def train_step(self, batch: "LossBatch") -> None: ...


class HashingEncoder:
    """Deterministic feature-hashing embedding with frozen parameters.

    Dimension 0 is a constant bias of 1.0. Each lower-cased word token adds a signed unit
    to one of the remaining ``dim - 1`` buckets, so colliding tokens or text without words
    never produce a zero vector. Useful as a desk-scale baseline and for exercising the
    training loop; ``train_step`` only counts the batches it receives.
    """

    def __init__(self, dim: int = 256, seed: int = 0):
        if dim < 2:
            raise ConfigError(f"Embedding dimension must be at least 2, got {dim}")
        self.dim = dim
        self.seed = seed
        self.steps = 0

    def _bucket(self, token: str) -> tuple[int, float]:
        digest = hashlib.blake2b(f"{self.seed}:{token}".encode(), digest_size=8).digest()
        index = 1 + int.from_bytes(digest[:4], "big") % (self.dim - 1)
        sign = 1.0 if digest[4] & 1 else -1.0
        return index, sign

    def embed_one(self, text: str) -> list[float]:
        vector = np.zeros(self.dim, dtype=np.float64)
        vector[0] = 1.0
        for token in _TOKEN_PATTERN.findall(text.lower()):
            index, sign = self._bucket(token)
            vector[index] += sign
        return vector.tolist()

    async def embed(self, texts: Sequence[str]) -> list[list[float]]:
        return [self.embed_one(text) for text in texts]

    async def train_step(self, batch: "LossBatch") -> None:
        self.steps += 1


class OpenAIEncoder:
    """Encoder served by an OpenAI-compatible embeddings endpoint. Not trainable."""

    def __init__(self, settings: BackendSettings, client: AsyncOpenAI | None = None):
        if not settings.encoder_model:
            raise ConfigError("Encoder model is not configured: set INPAINT_ENCODER_MODEL")
        self._settings = settings
        self._client = client or AsyncOpenAI(
            base_url=settings.encoder_url,
            api_key=settings.api_key_for(settings.encoder_url),
            timeout=settings.request_timeout,
        )

    async def embed(self, texts: Sequence[str]) -> list[list[float]]:
        try:
            async for attempt in AsyncRetrying(
                stop=stop_after_attempt(self._settings.max_attempts),
                wait=wait_exponential(multiplier=1, min=1, max=10),
                retry=retry_if_exception_type(OpenAIError),
            ):
                with attempt:
                    response = await self._client.embeddings.create(
                        model=self._settings.encoder_model, input=list(texts)
                    )
        except RetryError as e:
            logger.error(f"Encoder endpoint failed after {self._settings.max_attempts} attempts: {e}")
            raise BackendError("Encoder endpoint failed", e.last_attempt.exception()) from e
        return [list(item.embedding) for item in sorted(response.data, key=lambda item: item.index)]

    async def train_step(self, batch: "LossBatch") -> None:
        raise TrainingError("The embeddings endpoint cannot be trained", iteration=batch.iteration)
