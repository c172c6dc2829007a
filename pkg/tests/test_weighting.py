import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from smdalign.corpus import SentenceVocabulary, VocabEntry, build_vocabulary
from smdalign.weighting import (
    DomainIdf,
    MassDistribution,
    WeightingScheme,
    build_domain_idf,
    compute_weights,
    idf_weights,
    sl_weights,
    slidf_weights,
    uniform_weights,
)

from .conftest import make_doc, make_domain, make_emb


def vocab_of(counts, tokens=None):
    if tokens is None:
        tokens = [1] * len(counts)
    return SentenceVocabulary(tuple(
        VocabEntry(text=f"s{i}", emb_row=i, count=c, token_count=t)
        for i, (c, t) in enumerate(zip(counts, tokens))
    ))


def idf_of(doc_count, dfs):
    return DomainIdf(doc_count=doc_count, df={f"s{i}": d for i, d in enumerate(dfs)})


# strategy: vocabularies with 1..12 entries, counts 1..5, token counts 1..20
vocab_strategy = st.lists(
    st.tuples(st.integers(1, 5), st.integers(1, 20)), min_size=1, max_size=12
).map(lambda pairs: vocab_of([c for c, _ in pairs], [t for _, t in pairs]))


class TestMassDistribution:
    def test_rejects_negative(self):
        with pytest.raises(ValueError, match="negative"):
            MassDistribution(np.array([1.5, -0.5]))

    def test_rejects_bad_sum(self):
        with pytest.raises(ValueError, match="sums to"):
            MassDistribution(np.array([0.5, 0.6]))

    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="non-empty"):
            MassDistribution(np.array([]))


class TestUniform:
    def test_equal_counts(self):
        w = uniform_weights(vocab_of([1, 1, 1, 1]))
        np.testing.assert_allclose(w.weights, [0.25] * 4)

    def test_count_two_gets_half(self):
        w = uniform_weights(vocab_of([2, 1, 1]))
        np.testing.assert_allclose(w.weights, [0.5, 0.25, 0.25])

    def test_single_entry(self):
        np.testing.assert_allclose(uniform_weights(vocab_of([3])).weights, [1.0])

    def test_empty_vocab_is_error(self):
        with pytest.raises(ValueError, match="empty"):
            uniform_weights(SentenceVocabulary(()))

    def test_reorder_permutes_weights(self, rng):
        counts = [3, 1, 4, 1, 5]
        w = uniform_weights(vocab_of(counts)).weights
        perm = rng.permutation(len(counts))
        w_perm = uniform_weights(vocab_of([counts[i] for i in perm])).weights
        np.testing.assert_array_equal(w_perm, w[perm])


class TestSentenceLength:
    def test_longer_gets_more(self):
        w = sl_weights(vocab_of([1, 1], tokens=[3, 1]))
        np.testing.assert_allclose(w.weights, [0.75, 0.25])

    def test_equal_lengths_reduce_to_uniform(self):
        v = vocab_of([1, 1], tokens=[5, 5])
        np.testing.assert_array_equal(sl_weights(v).weights, uniform_weights(v).weights)

    def test_counts_and_tokens_multiply(self):
        # cnt*(tokens): 2*2=4, 1*3=3 over 7
        w = sl_weights(vocab_of([2, 1], tokens=[2, 3]))
        np.testing.assert_allclose(w.weights, [4 / 7, 3 / 7])


class TestIdf:
    def test_equal_dfs_normalize_to_uniform(self):
        w = idf_weights(vocab_of([1, 1]), idf_of(4, [2, 2]))
        np.testing.assert_allclose(w.weights, [0.5, 0.5])

    def test_rare_sentence_gets_more(self):
        w = idf_weights(vocab_of([1, 1]), idf_of(4, [4, 1]))
        expected = np.array([1.0, 1.0 + math.log(4)])
        expected /= expected.sum()
        np.testing.assert_allclose(w.weights, expected)

    def test_single_doc_domain(self):
        np.testing.assert_allclose(
            idf_weights(vocab_of([1]), idf_of(1, [1])).weights, [1.0]
        )

    def test_missing_sentence_is_error(self):
        with pytest.raises(ValueError, match="missing from domain idf"):
            idf_weights(vocab_of([1, 1]), DomainIdf(doc_count=2, df={"s0": 1}))

    def test_raw_values_decrease_with_df(self):
        # raw idf >= 1 and strictly decreasing in df
        raws = [
            idf_weights(vocab_of([1, 1]), idf_of(8, [df, 1])).weights[0]
            for df in (1, 2, 4, 8)
        ]
        assert all(a > b for a, b in zip(raws, raws[1:]))

    def test_raw_idf_at_least_one(self, rng):
        from smdalign.weighting import _idf_raw

        for _ in range(50):
            n = int(rng.integers(1, 10))
            doc_count = int(rng.integers(1, 40))
            dfs = [int(rng.integers(1, doc_count + 1)) for _ in range(n)]
            raw = _idf_raw(vocab_of([1] * n), idf_of(doc_count, dfs))
            assert np.all(raw >= 1.0)


class TestSlidf:
    def test_all_equal_reduces_to_uniform(self):
        w = slidf_weights(vocab_of([1, 1], tokens=[4, 4]), idf_of(4, [2, 2]))
        np.testing.assert_allclose(w.weights, [0.5, 0.5])

    def test_equal_dfs_reduce_to_sl(self):
        v = vocab_of([1, 1], tokens=[3, 1])
        w = slidf_weights(v, idf_of(4, [2, 2]))
        np.testing.assert_allclose(w.weights, [0.75, 0.25])

    def test_length_and_idf_combine(self):
        v = vocab_of([1, 1], tokens=[3, 1])
        w = slidf_weights(v, idf_of(4, [4, 1]))
        raw = np.array([0.75 * 1.0, 0.25 * (1.0 + math.log(4))])
        np.testing.assert_allclose(w.weights, raw / raw.sum())


class TestProperties:
    @given(vocab_strategy)
    def test_uniform_and_sl_valid_distributions(self, vocab):
        for weights in (uniform_weights(vocab), sl_weights(vocab)):
            assert np.all(weights.weights >= 0)
            assert abs(weights.weights.sum() - 1.0) <= 1e-9

    @given(vocab_strategy, st.integers(1, 30), st.randoms(use_true_random=False))
    def test_idf_schemes_valid_distributions(self, vocab, extra_docs, rnd):
        doc_count = extra_docs
        dfs = [rnd.randint(1, doc_count) for _ in vocab.entries]
        idf = idf_of(doc_count, dfs)
        for weights in (idf_weights(vocab, idf), slidf_weights(vocab, idf)):
            assert np.all(weights.weights >= 0)
            assert abs(weights.weights.sum() - 1.0) <= 1e-9

    @given(vocab_strategy)
    def test_equal_token_counts_make_sl_uniform(self, vocab):
        flat = SentenceVocabulary(tuple(
            VocabEntry(e.text, e.emb_row, e.count, 7) for e in vocab.entries
        ))
        np.testing.assert_array_equal(
            sl_weights(flat).weights, uniform_weights(flat).weights
        )

    @given(vocab_strategy, st.integers(1, 9))
    def test_equal_dfs_make_idf_uniform_and_slidf_sl(self, vocab, df):
        idf = idf_of(10, [df] * len(vocab))
        np.testing.assert_allclose(
            idf_weights(vocab, idf).weights, uniform_weights(vocab).weights, atol=1e-15
        )
        np.testing.assert_allclose(
            slidf_weights(vocab, idf).weights, sl_weights(vocab).weights, atol=1e-15
        )


class TestBuildDomainIdf:
    def test_counts_documents_not_occurrences(self):
        emb = make_emb(np.eye(4, dtype=np.float32))
        src = make_doc("s", ["shared", "twice", "twice"], [0, 1, 1], lang="en")
        tgt = make_doc("t", ["shared", "other"], [2, 3], lang="fr")
        idf = build_domain_idf(make_domain([src], [tgt], emb))
        assert idf.doc_count == 2
        assert idf.df["shared"] == 2
        assert idf.df["twice"] == 1  # membership, not frequency
        assert idf.df["other"] == 1

    def test_doc_count_spans_both_sides(self):
        emb = make_emb(np.eye(4, dtype=np.float32))
        srcs = [make_doc(f"s{i}", ["x"], [i], lang="en") for i in range(3)]
        tgt = make_doc("t", ["y"], [3], lang="fr")
        idf = build_domain_idf(make_domain(srcs, [tgt], emb))
        assert idf.doc_count == 4

    def test_compute_weights_dispatch(self):
        emb = make_emb(np.eye(2, dtype=np.float32))
        doc = make_doc("s", ["a b c", "d"], [0, 1])
        vocab = build_vocabulary(doc)
        domain = make_domain([doc], [make_doc("t", ["e"], [1], lang="fr")], emb)
        idf = build_domain_idf(domain)
        for scheme in WeightingScheme:
            w = compute_weights(scheme, vocab, idf)
            assert abs(w.weights.sum() - 1.0) <= 1e-9
        with pytest.raises(ValueError, match="requires domain idf"):
            compute_weights(WeightingScheme.IDF, vocab, None)
