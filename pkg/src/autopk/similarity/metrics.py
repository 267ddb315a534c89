"""The hybrid similarity score and its three components.

A cell string and a candidate variant are compared with a weighted sum of
cosine similarity over embeddings, length-normalized Levenshtein
similarity, and Sørensen–Dice overlap of their token sets.  All four
scores live in [0, 1].
"""

from __future__ import annotations

import math
import re
import unicodedata
from dataclasses import dataclass

from autopk.errors import DimensionMismatch
from autopk.similarity.embeddings import EmbeddingProvider, EmbeddingVector
from autopk.similarity.kernels import levenshtein_distance

# Tokens split on whitespace, underscores, hyphens, and parentheses only;
# "/" and "." are kept so forms like "t1/2" stay atomic.
_TOKEN_SPLIT = re.compile(r"[\s_\-()]+")


@dataclass(frozen=True)
class SimilarityWeights:
    """Component weights plus the candidate-flagging threshold tau."""

    alpha: float = 0.6
    beta: float = 0.2
    gamma: float = 0.2
    tau: float = 0.69

    def __post_init__(self) -> None:
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise ValueError("similarity weights must be non-negative")
        total = self.alpha + self.beta + self.gamma
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"similarity weights must sum to 1, got {total}")
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must lie in [0, 1], got {self.tau}")


def tokenize(s: str) -> set[str]:
    """Lowercased tokens split on whitespace, "_", "-", "(" and ")"."""
    return {tok for tok in _TOKEN_SPLIT.split(s.lower()) if tok}


def _normalize_lev(s: str, case_sensitive: bool) -> str:
    s = unicodedata.normalize("NFC", s)
    return s if case_sensitive else s.lower()


def levenshtein_similarity(c: str, v: str, case_sensitive: bool = False) -> float:
    """1 - distance/max-length; 1.0 when both strings are empty."""
    c = _normalize_lev(c, case_sensitive)
    v = _normalize_lev(v, case_sensitive)
    longest = max(len(c), len(v))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein_distance(c, v) / longest


def token_overlap(c: str, v: str) -> float:
    """Sørensen–Dice coefficient over the two token sets."""
    tc, tv = tokenize(c), tokenize(v)
    if not tc and not tv:
        return 1.0
    if not tc or not tv:
        return 0.0
    return 2.0 * len(tc & tv) / (len(tc) + len(tv))


def cosine_similarity(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Cosine of the angle between two vectors, clamped into [0, 1]."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dim {a.dim} vs {b.dim}")
    dot = sum(x * y for x, y in zip(a.values, b.values))
    norm_a = math.sqrt(sum(x * x for x in a.values))
    norm_b = math.sqrt(sum(y * y for y in b.values))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return min(1.0, max(0.0, dot / (norm_a * norm_b)))


class ComponentCache:
    """Memoizes (cos, lev, tok) triples per string pair.

    Components do not depend on the weights, so a sweep over many weight
    configurations reuses one cache.
    """

    def __init__(self) -> None:
        self._scores: dict[tuple[str, str, bool], tuple[float, float, float]] = {}

    def components(
        self,
        c: str,
        v: str,
        embed: EmbeddingProvider | None,
        case_sensitive: bool = False,
        need_cosine: bool = True,
    ) -> tuple[float, float, float]:
        key = (c, v, case_sensitive)
        hit = self._scores.get(key)
        if hit is not None and not (need_cosine and math.isnan(hit[0])):
            return hit
        if need_cosine:
            if embed is None:
                raise ValueError("cosine component requested without a provider")
            cos = cosine_similarity(embed.embed(c), embed.embed(v))
        else:
            cos = float("nan")
        triple = (cos, levenshtein_similarity(c, v, case_sensitive), token_overlap(c, v))
        self._scores[key] = triple
        return triple


def hybrid_similarity(
    c: str,
    v: str,
    w: SimilarityWeights,
    embed: EmbeddingProvider | None = None,
    cache: ComponentCache | None = None,
    case_sensitive: bool = False,
) -> float:
    """Weighted sum alpha*cos + beta*lev + gamma*tok.

    The embedding provider is only consulted when alpha > 0, so purely
    lexical configurations run without one.
    """
    need_cos = w.alpha > 0.0
    if cache is not None:
        cos, lev, tok = cache.components(c, v, embed, case_sensitive, need_cos)
    else:
        if need_cos:
            if embed is None:
                raise ValueError("alpha > 0 requires an embedding provider")
            cos = cosine_similarity(embed.embed(c), embed.embed(v))
        else:
            cos = 0.0
        lev = levenshtein_similarity(c, v, case_sensitive)
        tok = token_overlap(c, v)
    cos_term = w.alpha * cos if need_cos else 0.0
    return cos_term + w.beta * lev + w.gamma * tok
