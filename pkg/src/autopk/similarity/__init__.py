from autopk.similarity.embeddings import (
    CachedEmbeddingProvider,
    EmbeddingProvider,
    EmbeddingVector,
    HashEmbeddingProvider,
    HttpEmbeddingProvider,
)
from autopk.similarity.kernels import KERNEL_BACKEND, levenshtein_distance
from autopk.similarity.metrics import (
    ComponentCache,
    SimilarityWeights,
    cosine_similarity,
    hybrid_similarity,
    levenshtein_similarity,
    token_overlap,
    tokenize,
)

__all__ = [
    "CachedEmbeddingProvider",
    "ComponentCache",
    "EmbeddingProvider",
    "EmbeddingVector",
    "HashEmbeddingProvider",
    "HttpEmbeddingProvider",
    "KERNEL_BACKEND",
    "SimilarityWeights",
    "cosine_similarity",
    "hybrid_similarity",
    "levenshtein_distance",
    "levenshtein_similarity",
    "token_overlap",
    "tokenize",
]
