"""Shared fixtures: in-memory embedding tables and tiny documents."""

import numpy as np
import pytest

from sentrank.distance import SentenceBag
from sentrank.embeddings import EmbeddingTable
from sentrank.preprocess import LexicalUnit, Sentence, Document


def make_table(vectors: dict) -> EmbeddingTable:
    dim = len(next(iter(vectors.values())))
    return EmbeddingTable(dim=dim, vectors={k: np.asarray(v, dtype=np.float32) for k, v in vectors.items()})


def make_bag(weights: dict) -> SentenceBag:
    return SentenceBag(keys=tuple(weights), weights=tuple(weights.values()))


def make_sentence(index: int, keys, raw: str = None, kinds=None) -> Sentence:
    """Sentence straight from unit keys (kind inferred from underscores)."""
    units = []
    for key in keys:
        kind = "phrase" if "_" in key else "word"
        units.append(LexicalUnit(kind, key))
    raw = raw if raw is not None else " ".join(keys)
    return Sentence(
        index=index,
        raw=raw,
        char_length=len(raw),
        units=tuple(units),
        essential_count=len(set(keys)),
    )


def make_document(unit_lists, raws=None) -> Document:
    sentences = []
    for i, keys in enumerate(unit_lists, start=1):
        raw = raws[i - 1] if raws else None
        sentences.append(make_sentence(i, keys, raw))
    return Document(sentences=tuple(sentences))


@pytest.fixture
def basis_table():
    """Orthonormal-ish 3-d table plus a near-duplicate pair."""
    return make_table(
        {
            "a": (1.0, 0.0, 0.0),
            "b": (0.0, 1.0, 0.0),
            "c": (0.0, 0.0, 1.0),
            "a2": (0.96, 0.28, 0.0),  # cosine with "a" = 0.96
            "far": (10.0, 10.0, 10.0),
        }
    )
