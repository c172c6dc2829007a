"""Scoring all candidate document pairs of a web-domain and matching them
one-to-one with competitive (greedy) matching.

Every source document is scored against every target document, the pairs are
sorted ascending by distance, and the closest pair whose endpoints are both
unused is selected until one side is exhausted. A Hungarian-based optimal
assignment is provided as a small-instance oracle for tests.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable

import numpy as np
from scipy.optimize import linear_sum_assignment

from .baselines import cosine_distance, de_embedding, sa_embedding
from .corpus import Document, DomainCorpus, build_vocabulary
from .transport import Solver, cost_matrix, exact_smd, greedy_smd, relaxed_smd
from .weighting import WeightingScheme, build_domain_idf, compute_weights

log = logging.getLogger(__name__)

HUNGARIAN_MAX_SIDE = 64


class ScoringError(RuntimeError):
    """A pair scorer failed; carries the (src_id, tgt_id) context."""


class ScorerKind(Enum):
    DE = "de"
    SA = "sa"
    SMD = "smd"


@dataclass(frozen=True)
class ScorerConfig:
    kind: ScorerKind
    solver: Solver = Solver.GREEDY
    scheme: WeightingScheme = WeightingScheme.UNIFORM
    max_vocab: int | None = None


@dataclass(frozen=True)
class ScoredPair:
    src_id: str
    tgt_id: str
    distance: float


@dataclass(frozen=True)
class Alignment:
    pairs: tuple[ScoredPair, ...]

    def __post_init__(self):
        srcs = [p.src_id for p in self.pairs]
        tgts = [p.tgt_id for p in self.pairs]
        if len(set(srcs)) != len(srcs) or len(set(tgts)) != len(tgts):
            raise ValueError("alignment is not injective")

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def pair_set(self) -> set[tuple[str, str]]:
        return {(p.src_id, p.tgt_id) for p in self.pairs}

    @property
    def total_distance(self) -> float:
        return sum(p.distance for p in self.pairs)


_SMD_SOLVERS = {
    Solver.EXACT: exact_smd,
    Solver.RELAXED_MAX: relaxed_smd,
    Solver.GREEDY: greedy_smd,
}


def _truncate(doc: Document, max_vocab: int | None) -> Document:
    if max_vocab is not None and len(doc.sentences) > max_vocab:
        log.warning(
            "document %s has %d sentences, truncating to first %d",
            doc.doc_id, len(doc.sentences), max_vocab,
        )
        return replace(doc, sentences=doc.sentences[:max_vocab])
    return doc


def make_pair_scorer(
    domain: DomainCorpus, config: ScorerConfig
) -> Callable[[Document, Document], float]:
    """Build a (src_doc, tgt_doc) -> distance function with per-document
    vocabularies, weights, and baseline vectors precomputed once."""
    emb = domain.embeddings

    if config.kind in (ScorerKind.DE, ScorerKind.SA):
        embed = de_embedding if config.kind is ScorerKind.DE else sa_embedding
        vecs: dict[str, object] = {}

        def vec(doc: Document):
            # lazy, so a doc-level failure surfaces with its pair's context
            if doc.doc_id not in vecs:
                vecs[doc.doc_id] = embed(doc, emb)
            return vecs[doc.doc_id]

        return lambda s, t: cosine_distance(vec(s), vec(t))

    idf = None
    if config.scheme in (WeightingScheme.IDF, WeightingScheme.SLIDF):
        idf = build_domain_idf(domain)
    vocabs = {}
    weights = {}
    for doc in domain.all_docs:
        vocab = build_vocabulary(_truncate(doc, config.max_vocab))
        vocabs[doc.doc_id] = vocab
        weights[doc.doc_id] = compute_weights(config.scheme, vocab, idf)
    solve = _SMD_SOLVERS[config.solver]

    def score(src: Document, tgt: Document) -> float:
        cost = cost_matrix(vocabs[src.doc_id], vocabs[tgt.doc_id], emb)
        return solve(cost, weights[src.doc_id], weights[tgt.doc_id]).distance

    return score


def score_all_pairs(
    domain: DomainCorpus, config: ScorerConfig, threads: int = 1
) -> list[ScoredPair]:
    """Score the full bipartite candidate set |D_s| x |D_t| of one domain.

    Pair order is deterministic (by src then tgt doc_id) regardless of the
    thread count; a failure on any pair aborts the whole domain.
    """
    if not domain.source_docs or not domain.target_docs:
        raise ValueError(f"domain {domain.domain_id!r} is empty on one side")
    scorer = make_pair_scorer(domain, config)
    candidates = [(s, t) for s in domain.source_docs for t in domain.target_docs]

    def score_one(pair: tuple[Document, Document]) -> ScoredPair:
        src, tgt = pair
        try:
            d = scorer(src, tgt)
        except Exception as exc:
            raise ScoringError(
                f"scoring ({src.doc_id!r}, {tgt.doc_id!r}) in domain "
                f"{domain.domain_id!r} failed: {exc}"
            ) from exc
        if not np.isfinite(d):
            raise ScoringError(
                f"scoring ({src.doc_id!r}, {tgt.doc_id!r}) produced non-finite distance"
            )
        return ScoredPair(src.doc_id, tgt.doc_id, float(d))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(score_one, candidates))
    return [score_one(c) for c in candidates]


def competitive_match(pairs: Iterable[ScoredPair]) -> Alignment:
    """Greedy one-to-one matching: take pairs ascending by distance (ties by
    doc ids), keeping a pair only if neither endpoint was already used."""
    used_src: set[str] = set()
    used_tgt: set[str] = set()
    selected: list[ScoredPair] = []
    for pair in sorted(pairs, key=lambda p: (p.distance, p.src_id, p.tgt_id)):
        if pair.src_id not in used_src and pair.tgt_id not in used_tgt:
            selected.append(pair)
            used_src.add(pair.src_id)
            used_tgt.add(pair.tgt_id)
    return Alignment(tuple(selected))


def hungarian_oracle(pairs: Iterable[ScoredPair]) -> Alignment:
    """Minimum-total-distance injective assignment (test oracle; requires a
    complete bipartite score set with at most 64 documents per side)."""
    pairs = list(pairs)
    src_ids = sorted({p.src_id for p in pairs})
    tgt_ids = sorted({p.tgt_id for p in pairs})
    if len(src_ids) > HUNGARIAN_MAX_SIDE or len(tgt_ids) > HUNGARIAN_MAX_SIDE:
        raise ValueError(
            f"instance too large for hungarian oracle: "
            f"{len(src_ids)}x{len(tgt_ids)} (max {HUNGARIAN_MAX_SIDE})"
        )
    if len(pairs) != len(src_ids) * len(tgt_ids):
        raise ValueError("hungarian oracle needs a complete bipartite score set")
    s_index = {s: i for i, s in enumerate(src_ids)}
    t_index = {t: j for j, t in enumerate(tgt_ids)}
    matrix = np.full((len(src_ids), len(tgt_ids)), np.nan)
    for p in pairs:
        matrix[s_index[p.src_id], t_index[p.tgt_id]] = p.distance
    if np.isnan(matrix).any():
        raise ValueError("hungarian oracle needs a complete bipartite score set")
    rows, cols = linear_sum_assignment(matrix)
    selected = [
        ScoredPair(src_ids[i], tgt_ids[j], float(matrix[i, j])) for i, j in zip(rows, cols)
    ]
    selected.sort(key=lambda p: (p.distance, p.src_id, p.tgt_id))
    return Alignment(tuple(selected))


def write_alignment_tsv(alignments: Iterable[Alignment], path: str | Path) -> None:
    """Concatenate alignments to TSV rows (src, tgt, distance to 6 decimals),
    each alignment's rows sorted ascending by distance."""
    with open(path, "w", encoding="utf-8") as fh:
        for alignment in alignments:
            for p in sorted(alignment.pairs, key=lambda p: (p.distance, p.src_id, p.tgt_id)):
                fh.write(f"{p.src_id}\t{p.tgt_id}\t{p.distance:.6f}\n")


def read_alignment_tsv(path: str | Path) -> list[ScoredPair]:
    out: list[ScoredPair] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) != 3:
                raise ValueError(f"{path}: line {lineno}: expected 3 fields")
            out.append(ScoredPair(fields[0], fields[1], float(fields[2])))
    return out
