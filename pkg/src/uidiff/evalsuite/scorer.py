"""Text-image compatibility scoring over a pluggable embedding backend.

score(image, text) = w * max(cos(embed(image), embed(text)), 0), bounded to
[0, w] with w defaulting to 2.5. A seeded deterministic mock backend lets the
whole suite run without pretrained weights; real backends plug in behind the
same two-method surface.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Protocol

import numpy as np


class BackendUnavailable(RuntimeError):
    pass


class EmbeddingBackend(Protocol):
    def embed_image(self, image: np.ndarray) -> np.ndarray: ...

    def embed_text(self, text: str) -> np.ndarray: ...


class SeededMockBackend:
    """Deterministic pseudo-embeddings derived from content hashes.

    Same content always maps to the same unit vector; nothing is learned, but
    every pipeline contract (determinism, bounds, aggregation) is exercised.
    """

    def __init__(self, dim: int = 32, seed: int = 0):
        self.dim = dim
        self.seed = seed

    def _vector(self, payload: bytes) -> np.ndarray:
        digest = hashlib.sha256(payload + self.seed.to_bytes(4, "big")).digest()
        rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
        v = rng.standard_normal(self.dim)
        return v / np.linalg.norm(v)

    def embed_image(self, image: np.ndarray) -> np.ndarray:
        return self._vector(b"image:" + np.ascontiguousarray(image).tobytes())

    def embed_text(self, text: str) -> np.ndarray:
        return self._vector(b"text:" + text.encode())


class PretrainedBackend:
    """Adapter boundary for an external image/text embedding model.

    Weights are not bundled; point model_path at a local checkpoint directory
    understood by the loader callable you supply.
    """

    def __init__(self, loader=None, model_path: str | None = None):
        if loader is None or model_path is None:
            raise BackendUnavailable(
                "no pretrained embedding backend configured; "
                "use SeededMockBackend for weight-free runs"
            )
        self._impl = loader(model_path)

    def embed_image(self, image: np.ndarray) -> np.ndarray:
        return self._impl.embed_image(image)

    def embed_text(self, text: str) -> np.ndarray:
        return self._impl.embed_text(text)


@dataclass
class CompatibilityScorer:
    backend: EmbeddingBackend
    weight: float = 2.5

    def score(self, image: np.ndarray, text: str) -> float:
        a = np.asarray(self.backend.embed_image(image), dtype=np.float64)
        b = np.asarray(self.backend.embed_text(text), dtype=np.float64)
        denom = np.linalg.norm(a) * np.linalg.norm(b)
        if denom == 0:
            return 0.0
        cos = float(np.dot(a, b) / denom)
        return self.weight * max(cos, 0.0)


def compatibility_score(image: np.ndarray, text: str, scorer: CompatibilityScorer) -> float:
    if scorer.backend is None:
        raise BackendUnavailable("scorer has no backend loaded")
    return scorer.score(image, text)
