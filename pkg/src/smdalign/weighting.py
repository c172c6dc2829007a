"""Per-sentence probability mass of a document.

Four schemes: uniform (relative sentence frequency), sentence-length (SL),
inverse document frequency within the web-domain (IDF), and their product
(SLIDF). Every scheme is normalized to unit measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .corpus import DomainCorpus, SentenceVocabulary

SUM_TOL = 1e-9


class WeightingScheme(Enum):
    UNIFORM = "uniform"
    SL = "sl"
    IDF = "idf"
    SLIDF = "slidf"


@dataclass(frozen=True, eq=False)
class MassDistribution:
    """Nonnegative weights over a vocabulary, summing to 1."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        object.__setattr__(self, "weights", w)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("mass distribution must be a non-empty 1-d vector")
        if np.any(w < 0):
            raise ValueError("mass distribution has negative weights")
        total = float(w.sum())
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"mass distribution sums to {total}, expected 1")

    def __len__(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class DomainIdf:
    """Document-frequency statistics for one web-domain (both languages)."""

    doc_count: int
    df: dict[str, int]


def _normalize(raw: np.ndarray) -> MassDistribution:
    return MassDistribution(raw / raw.sum())


def uniform_weights(vocab: SentenceVocabulary) -> MassDistribution:
    """Each occurrence carries equal mass: weight_i = cnt(i) / total sentences."""
    if len(vocab) == 0:
        raise ValueError("cannot weight an empty vocabulary")
    return _normalize(vocab.counts)


def sl_weights(vocab: SentenceVocabulary) -> MassDistribution:
    """Mass proportional to token count: cnt(i)*|i| / sum_s cnt(s)*|s|."""
    if len(vocab) == 0:
        raise ValueError("cannot weight an empty vocabulary")
    return _normalize(vocab.counts * vocab.token_counts)


def _idf_raw(vocab: SentenceVocabulary, idf: DomainIdf) -> np.ndarray:
    raw = np.empty(len(vocab), dtype=np.float64)
    for k, entry in enumerate(vocab.entries):
        df = idf.df.get(entry.text)
        if df is None:
            raise ValueError(
                f"sentence {entry.text!r} missing from domain idf statistics "
                "(idf built from a different corpus?)"
            )
        raw[k] = 1.0 + math.log(idf.doc_count / df)
    return raw


def idf_weights(vocab: SentenceVocabulary, idf: DomainIdf) -> MassDistribution:
    """Mass proportional to occurrence count times the smoothed inverse
    document frequency 1 + ln(|D|/df). The count factor makes equal-df
    vocabularies reduce to the uniform scheme exactly; it is 1 for the
    common duplicate-free case."""
    if len(vocab) == 0:
        raise ValueError("cannot weight an empty vocabulary")
    return _normalize(vocab.counts * _idf_raw(vocab, idf))


def slidf_weights(vocab: SentenceVocabulary, idf: DomainIdf) -> MassDistribution:
    """Product of the SL weight and the raw IDF value, renormalized."""
    if len(vocab) == 0:
        raise ValueError("cannot weight an empty vocabulary")
    sl = sl_weights(vocab).weights
    return _normalize(sl * _idf_raw(vocab, idf))


def build_domain_idf(domain: DomainCorpus) -> DomainIdf:
    """Count, for every sentence text in the domain, how many documents
    (either language) contain it at least once."""
    docs = domain.all_docs
    if not docs:
        raise ValueError(f"domain {domain.domain_id!r} has no documents")
    df: dict[str, int] = {}
    for doc in docs:
        for text in {s.text.strip() for s in doc.sentences}:
            df[text] = df.get(text, 0) + 1
    return DomainIdf(doc_count=len(docs), df=df)


def compute_weights(
    scheme: WeightingScheme, vocab: SentenceVocabulary, idf: DomainIdf | None = None
) -> MassDistribution:
    """Dispatch to the scheme's weighting function; IDF schemes need DomainIdf."""
    if scheme is WeightingScheme.UNIFORM:
        return uniform_weights(vocab)
    if scheme is WeightingScheme.SL:
        return sl_weights(vocab)
    if idf is None:
        raise ValueError(f"scheme {scheme.value} requires domain idf statistics")
    if scheme is WeightingScheme.IDF:
        return idf_weights(vocab, idf)
    return slidf_weights(vocab, idf)
