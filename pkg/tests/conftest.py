import numpy as np
import pytest

from smdalign.corpus import Document, DomainCorpus, EmbeddingMatrix, SentenceRef


def make_emb(vectors) -> EmbeddingMatrix:
    return EmbeddingMatrix(np.asarray(vectors, dtype=np.float32))


def make_doc(doc_id, texts, rows, domain="d0", lang="en", doc_emb_row=None, tokens=None):
    if tokens is None:
        tokens = [max(1, len(t.split())) for t in texts]
    sents = tuple(
        SentenceRef(text=t, emb_row=r, token_count=tc)
        for t, r, tc in zip(texts, rows, tokens)
    )
    return Document(
        doc_id=doc_id, domain_id=domain, lang=lang, sentences=sents, doc_emb_row=doc_emb_row
    )


def make_domain(src_docs, tgt_docs, emb, domain="d0") -> DomainCorpus:
    return DomainCorpus(
        domain_id=domain,
        source_docs=tuple(src_docs),
        target_docs=tuple(tgt_docs),
        embeddings=emb,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
