"""Sentence featurization: mean of in-vocabulary word vectors."""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from .corpus import Dataset, tokenize
from .resources import EmbeddingStore


def sentence_vector(tokens: Iterable[str], store: EmbeddingStore) -> np.ndarray:
    """Component-wise mean of the embeddings of in-vocabulary tokens.

    Out-of-vocabulary tokens are skipped; a sentence with no known token
    maps to the zero vector.
    """
    rows = [store.vector(tok) for tok in tokens]
    rows = [r for r in rows if r is not None]
    if not rows:
        return np.zeros(store.dim, dtype=np.float64)
    return np.mean(np.stack(rows), axis=0)


def featurize(dataset: Dataset, store: EmbeddingStore) -> np.ndarray:
    """Stack sentence vectors for every example into an (n, dim) matrix."""
    X = np.empty((len(dataset), store.dim), dtype=np.float64)
    for i, ex in enumerate(dataset):
        X[i] = sentence_vector(tokenize(ex.text), store)
    return X
