"""Evaluation battery: alignment recall, rank agreement between exact and
approximate distances (Kendall tau-b), mean absolute error, per-method
runtimes, and a seeded synthetic corpus generator for desk-scale runs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import kendalltau

from .corpus import (
    Document,
    DomainCorpus,
    EmbeddingMatrix,
    SentenceRef,
    build_vocabulary,
)
from .matching import Alignment
from .transport import cost_matrix, exact_smd, greedy_smd, relaxed_smd
from .weighting import WeightingScheme, build_domain_idf, compute_weights


@dataclass(frozen=True)
class EvalReport:
    recall: float
    found: int
    total: int
    per_method: dict[str, float] | None = None

    def to_json(self) -> dict:
        payload: dict = {"recall": self.recall}
        if self.per_method is not None:
            payload["per_method"] = dict(self.per_method)
        return payload


@dataclass(frozen=True)
class ApproxReport:
    tau_greedy: float
    tau_relaxed: float
    mae_greedy: float
    mae_relaxed: float
    runtime_exact_s: float
    runtime_greedy_s: float
    runtime_relaxed_s: float

    def to_json(self) -> dict:
        return {
            "tau_greedy": self.tau_greedy,
            "tau_relaxed": self.tau_relaxed,
            "mae_greedy": self.mae_greedy,
            "mae_relaxed": self.mae_relaxed,
            "runtime_exact_s": self.runtime_exact_s,
            "runtime_greedy_s": self.runtime_greedy_s,
            "runtime_relaxed_s": self.runtime_relaxed_s,
        }


def recall(predicted: Alignment, gold: set[tuple[str, str]]) -> EvalReport:
    """Fraction of gold pairs recovered by the predicted alignment."""
    if not gold:
        raise ValueError("recall undefined for empty gold set")
    found = len(predicted.pair_set & gold)
    return EvalReport(recall=found / len(gold), found=found, total=len(gold))


def kendall_tau(
    ranking_a: Sequence[tuple[object, float]], ranking_b: Sequence[tuple[object, float]]
) -> float:
    """Kendall tau-b between the orderings two score lists induce over the
    same item set (1 = identical order, -1 = exactly reversed)."""
    scores_a = dict(ranking_a)
    scores_b = dict(ranking_b)
    if len(scores_a) != len(ranking_a) or len(scores_b) != len(ranking_b):
        raise ValueError("rankings contain duplicate items")
    if set(scores_a) != set(scores_b):
        raise ValueError("rankings cover different item sets")
    if len(scores_a) < 2:
        raise ValueError("need at least 2 items to rank")
    items = sorted(scores_a, key=repr)
    xs = [scores_a[i] for i in items]
    ys = [scores_b[i] for i in items]
    tau = kendalltau(xs, ys, variant="b").statistic
    if not np.isfinite(tau):
        raise ValueError("tau undefined (a ranking has zero variance)")
    return float(tau)


def mae(approx_scores: Sequence[float], exact_scores: Sequence[float]) -> float:
    """Mean absolute error between two score lists of equal length."""
    if len(approx_scores) != len(exact_scores):
        raise ValueError(
            f"length mismatch: {len(approx_scores)} vs {len(exact_scores)}"
        )
    if not approx_scores:
        raise ValueError("mae undefined for empty lists")
    a = np.asarray(approx_scores, dtype=np.float64)
    e = np.asarray(exact_scores, dtype=np.float64)
    return float(np.abs(a - e).mean())


# ---------------------------------------------------------------------------
# Exact vs approximate comparison
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairApproxRecord:
    src_id: str
    tgt_id: str
    exact: float
    relaxed: float
    greedy: float
    time_exact_s: float
    time_relaxed_s: float
    time_greedy_s: float


def check_vocab_cap(domain: DomainCorpus, max_vocab: int | None) -> None:
    if max_vocab is None:
        return
    offending = [
        d.doc_id for d in domain.all_docs if len(build_vocabulary(d)) > max_vocab
    ]
    if offending:
        raise ValueError(
            f"domain {domain.domain_id!r}: vocabulary cap {max_vocab} exceeded by "
            f"documents {offending}"
        )


def collect_approx_records(
    domain: DomainCorpus,
    scheme: WeightingScheme,
    repeats: int = 3,
    max_vocab: int | None = None,
) -> list[PairApproxRecord]:
    """Exact, relaxed and greedy distances plus solver wall-clock for every
    candidate pair of the domain. Timings are means over `repeats` runs on a
    precomputed cost matrix (the ground-distance work is shared by all three
    methods)."""
    check_vocab_cap(domain, max_vocab)
    idf = None
    if scheme in (WeightingScheme.IDF, WeightingScheme.SLIDF):
        idf = build_domain_idf(domain)
    vocabs = {d.doc_id: build_vocabulary(d) for d in domain.all_docs}
    weights = {
        d.doc_id: compute_weights(scheme, vocabs[d.doc_id], idf) for d in domain.all_docs
    }

    records = []
    for src in domain.source_docs:
        for tgt in domain.target_docs:
            cost = cost_matrix(vocabs[src.doc_id], vocabs[tgt.doc_id], domain.embeddings)
            a, b = weights[src.doc_id], weights[tgt.doc_id]
            values = {}
            times = {}
            for name, solver in (
                ("exact", exact_smd),
                ("relaxed", relaxed_smd),
                ("greedy", greedy_smd),
            ):
                start = time.perf_counter()
                for _ in range(repeats):
                    result = solver(cost, a, b)
                times[name] = (time.perf_counter() - start) / repeats
                values[name] = result.distance
            records.append(
                PairApproxRecord(
                    src_id=src.doc_id,
                    tgt_id=tgt.doc_id,
                    exact=values["exact"],
                    relaxed=values["relaxed"],
                    greedy=values["greedy"],
                    time_exact_s=times["exact"],
                    time_relaxed_s=times["relaxed"],
                    time_greedy_s=times["greedy"],
                )
            )
    return records


def summarize_approx(records: Sequence[PairApproxRecord]) -> ApproxReport:
    """Rank agreement, MAE and mean runtimes of the approximations against
    the exact distances, over a pooled set of pair records."""
    if len(records) < 2:
        raise ValueError("need at least 2 pair records to compare rankings")
    ids = [(r.src_id, r.tgt_id) for r in records]
    exact_rank = list(zip(ids, (r.exact for r in records)))
    greedy_rank = list(zip(ids, (r.greedy for r in records)))
    relaxed_rank = list(zip(ids, (r.relaxed for r in records)))
    exact_vals = [r.exact for r in records]
    return ApproxReport(
        tau_greedy=kendall_tau(greedy_rank, exact_rank),
        tau_relaxed=kendall_tau(relaxed_rank, exact_rank),
        mae_greedy=mae([r.greedy for r in records], exact_vals),
        mae_relaxed=mae([r.relaxed for r in records], exact_vals),
        runtime_exact_s=float(np.mean([r.time_exact_s for r in records])),
        runtime_greedy_s=float(np.mean([r.time_greedy_s for r in records])),
        runtime_relaxed_s=float(np.mean([r.time_relaxed_s for r in records])),
    )


def compare_approximations(
    domain: DomainCorpus,
    scheme: WeightingScheme,
    repeats: int = 3,
    max_vocab: int | None = None,
) -> ApproxReport:
    return summarize_approx(collect_approx_records(domain, scheme, repeats, max_vocab))


# ---------------------------------------------------------------------------
# Synthetic corpora with planted translations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SynthSpec:
    n_domains: int
    docs_per_side: int
    sentences_lo: int
    sentences_hi: int
    dim: int
    noise_sigma: float
    seed: int
    boilerplate_frac: float = 0.0

    def __post_init__(self):
        if self.n_domains < 1 or self.docs_per_side < 1 or self.sentences_lo < 1:
            raise ValueError("counts must be >= 1")
        if self.sentences_hi < self.sentences_lo:
            raise ValueError("sentence range is empty")
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if not 0.0 <= self.boilerplate_frac < 1.0:
            raise ValueError("boilerplate_frac must be in [0, 1)")


def generate_synthetic(
    spec: SynthSpec,
) -> tuple[list[DomainCorpus], set[tuple[str, str]]]:
    """Seeded corpus of planted translation pairs.

    Source documents get unit-Gaussian sentence embeddings; each target
    document copies one source document with per-sentence Gaussian noise of
    scale noise_sigma and a shuffled sentence order. A boilerplate_frac
    share of each document's sentences is drawn from a domain-wide shared
    pool, so those sentences occur in every document (high df). The gold set
    is exactly the planted pairs.
    """
    rng = np.random.default_rng(spec.seed)
    rows: list[np.ndarray] = []

    def add_row(vec: np.ndarray) -> int:
        rows.append(vec.astype(np.float32))
        return len(rows) - 1

    domains: list[DomainCorpus] = []
    gold: set[tuple[str, str]] = set()
    pool_size = int(np.ceil(spec.boilerplate_frac * spec.sentences_hi))

    domain_corpora = []
    for d in range(spec.n_domains):
        domain_id = f"domain{d:03d}"
        # shared boilerplate pool: one embedding per pool slot and language
        pool_src_rows = []
        pool_tgt_rows = []
        for p in range(pool_size):
            vec = rng.standard_normal(spec.dim)
            pool_src_rows.append(add_row(vec))
            pool_tgt_rows.append(add_row(vec + spec.noise_sigma * rng.standard_normal(spec.dim)))

        src_docs = []
        tgt_sentences: list[list[SentenceRef]] = []
        for k in range(spec.docs_per_side):
            n_sents = int(rng.integers(spec.sentences_lo, spec.sentences_hi + 1))
            n_boiler = min(int(spec.boilerplate_frac * n_sents), pool_size)
            src_sents: list[SentenceRef] = []
            tgt_sents: list[SentenceRef] = []
            for i in range(n_sents):
                pad = " pad" * (i % 4)
                if i < n_boiler:
                    src_text = f"{domain_id} src boilerplate {i}"
                    tgt_text = f"{domain_id} tgt boilerplate {i}"
                    src_row = pool_src_rows[i]
                    tgt_row = pool_tgt_rows[i]
                else:
                    src_text = f"{domain_id} src doc{k:03d} sentence {i}{pad}"
                    tgt_text = f"{domain_id} tgt doc{k:03d} sentence {i}{pad}"
                    vec = rng.standard_normal(spec.dim)
                    src_row = add_row(vec)
                    tgt_row = add_row(vec + spec.noise_sigma * rng.standard_normal(spec.dim))
                src_sents.append(SentenceRef(src_text, src_row, len(src_text.split())))
                tgt_sents.append(SentenceRef(tgt_text, tgt_row, len(tgt_text.split())))
            order = rng.permutation(len(tgt_sents))
            tgt_sentences.append([tgt_sents[i] for i in order])
            doc_row = add_row(
                np.mean([rows[s.emb_row] for s in src_sents], axis=0, dtype=np.float64)
            )
            src_docs.append(
                Document(
                    doc_id=f"{domain_id}-src{k:03d}",
                    domain_id=domain_id,
                    lang="src",
                    sentences=tuple(src_sents),
                    doc_emb_row=doc_row,
                )
            )

        # assign target ids in a random permutation of the planted sources
        perm = rng.permutation(spec.docs_per_side)
        tgt_docs = [None] * spec.docs_per_side
        for j, k in enumerate(perm):
            sents = tgt_sentences[k]
            doc_row = add_row(
                np.mean([rows[s.emb_row] for s in sents], axis=0, dtype=np.float64)
            )
            tgt_id = f"{domain_id}-tgt{j:03d}"
            tgt_docs[j] = Document(
                doc_id=tgt_id,
                domain_id=domain_id,
                lang="tgt",
                sentences=tuple(sents),
                doc_emb_row=doc_row,
            )
            gold.add((src_docs[k].doc_id, tgt_id))
        domain_corpora.append((domain_id, src_docs, tgt_docs))

    emb = EmbeddingMatrix(np.vstack(rows).astype(np.float32))
    for domain_id, src_docs, tgt_docs in domain_corpora:
        domains.append(
            DomainCorpus(
                domain_id=domain_id,
                source_docs=tuple(sorted(src_docs, key=lambda doc: doc.doc_id)),
                target_docs=tuple(sorted(tgt_docs, key=lambda doc: doc.doc_id)),
                embeddings=emb,
            )
        )
    return domains, gold
