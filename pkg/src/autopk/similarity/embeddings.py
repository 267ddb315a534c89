"""Embedding providers behind one interface.

Three implementations: a remote HTTP endpoint speaking the common
``POST {"input": [...]}`` embeddings shape, a persistent append-only
cache wrapper, and a seeded hash-to-vector stub so every test and the
bundled corpus run fully offline.
"""

from __future__ import annotations

import hashlib
import json
import math
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import requests

from autopk.errors import ProviderUnavailable


@dataclass(frozen=True)
class EmbeddingVector:
    """Fixed-length vector of finite reals."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(float(x) for x in self.values))
        if not all(math.isfinite(x) for x in self.values):
            raise ValueError("embedding contains non-finite entries")

    @property
    def dim(self) -> int:
        return len(self.values)


class EmbeddingProvider(Protocol):
    def embed(self, text: str) -> EmbeddingVector: ...


class HttpEmbeddingProvider:
    """Client for an embeddings endpoint: POST {model, input} -> {data: [...]}."""

    def __init__(
        self,
        base_url: str,
        model: str,
        api_key: str | None = None,
        timeout: float = 30.0,
    ) -> None:
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key = api_key
        self.timeout = timeout

    def embed(self, text: str) -> EmbeddingVector:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = requests.post(
                f"{self.base_url}/embeddings",
                json={"model": self.model, "input": [text]},
                headers=headers,
                timeout=self.timeout,
            )
            resp.raise_for_status()
            data = resp.json()["data"]
            return EmbeddingVector(tuple(data[0]["embedding"]))
        except (requests.RequestException, KeyError, IndexError, ValueError) as exc:
            raise ProviderUnavailable(f"embedding request failed: {exc}") from exc


class CachedEmbeddingProvider:
    """Append-only local store keyed by hash(model, text) in front of a provider."""

    def __init__(self, inner: EmbeddingProvider, path: str | Path, model: str = "") -> None:
        self.inner = inner
        self.path = Path(path)
        self.model = model
        self._lock = threading.Lock()
        self._index: dict[str, EmbeddingVector] = {}
        if self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    rec = json.loads(line)
                    self._index[rec["key"]] = EmbeddingVector(tuple(rec["vector"]))

    def _key(self, text: str) -> str:
        return hashlib.sha256(f"{self.model}\x00{text}".encode()).hexdigest()

    def embed(self, text: str) -> EmbeddingVector:
        key = self._key(text)
        with self._lock:
            hit = self._index.get(key)
        if hit is not None:
            return hit
        vec = self.inner.embed(text)
        with self._lock:
            if key not in self._index:
                self._index[key] = vec
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps({"key": key, "vector": list(vec.values)}) + "\n")
        return vec


class HashEmbeddingProvider:
    """Deterministic offline stub: character n-grams hashed into a dense vector.

    Identical strings embed identically (cosine 1.0) and strings sharing
    n-grams land near each other, which is enough signal for tests.
    """

    def __init__(self, dim: int = 64, seed: int = 0, ngram: int = 3) -> None:
        if dim < 1:
            raise ValueError("dim must be positive")
        self.dim = dim
        self.seed = seed
        self.ngram = ngram

    def embed(self, text: str) -> EmbeddingVector:
        vec = [0.0] * self.dim
        padded = f"\x02{text.lower()}\x03"
        grams = [padded[i : i + self.ngram] for i in range(max(1, len(padded) - self.ngram + 1))]
        for gram in grams:
            digest = hashlib.sha256(f"{self.seed}\x00{gram}".encode()).digest()
            bucket = int.from_bytes(digest[:4], "big") % self.dim
            sign = 1.0 if digest[4] % 2 == 0 else -1.0
            vec[bucket] += sign
        norm = math.sqrt(sum(x * x for x in vec))
        if norm > 0:
            vec = [x / norm for x in vec]
        else:
            vec[0] = 1.0
        return EmbeddingVector(tuple(vec))
