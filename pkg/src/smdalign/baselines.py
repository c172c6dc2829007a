"""Whole-document scoring baselines: sentence averaging (SA) and a
precomputed direct document embedding (DE), both compared by cosine distance.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .corpus import Document, EmbeddingMatrix


class EmbeddingSource(Enum):
    AVERAGED = "averaged"
    DIRECT = "direct"


@dataclass(frozen=True, eq=False)
class DocEmbedding:
    vector: np.ndarray
    source: EmbeddingSource


def sa_embedding(doc: Document, emb: EmbeddingMatrix) -> DocEmbedding:
    """Arithmetic mean over all sentence occurrences (duplicates counted)."""
    rows = [s.emb_row for s in doc.sentences]
    vec = emb.data[rows].astype(np.float64).mean(axis=0)
    return DocEmbedding(vector=vec, source=EmbeddingSource.AVERAGED)


def de_embedding(doc: Document, emb: EmbeddingMatrix) -> DocEmbedding:
    """The precomputed document-level embedding row."""
    if doc.doc_emb_row is None:
        raise ValueError(f"document {doc.doc_id!r} has no direct embedding")
    vec = emb.data[doc.doc_emb_row].astype(np.float64)
    return DocEmbedding(vector=vec, source=EmbeddingSource.DIRECT)


def cosine_distance(x: DocEmbedding, y: DocEmbedding) -> float:
    """1 - cosine similarity, in [0, 2]; lower means more similar."""
    nx = np.linalg.norm(x.vector)
    ny = np.linalg.norm(y.vector)
    if nx == 0.0 or ny == 0.0:
        raise ValueError("cosine distance undefined for zero-norm vector")
    return float(1.0 - (x.vector @ y.vector) / (nx * ny))
