import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smdalign.baselines import cosine_distance, sa_embedding
from smdalign.matching import (
    Alignment,
    ScoredPair,
    ScorerConfig,
    ScorerKind,
    ScoringError,
    competitive_match,
    hungarian_oracle,
    read_alignment_tsv,
    score_all_pairs,
    write_alignment_tsv,
)
from smdalign.transport import Solver
from smdalign.weighting import WeightingScheme

from .conftest import make_doc, make_domain, make_emb


def pairs_from_matrix(matrix, src_ids=None, tgt_ids=None):
    matrix = np.asarray(matrix, dtype=float)
    n, m = matrix.shape
    src_ids = src_ids or [f"s{i+1}" for i in range(n)]
    tgt_ids = tgt_ids or [f"t{j+1}" for j in range(m)]
    return [
        ScoredPair(src_ids[i], tgt_ids[j], float(matrix[i, j]))
        for i in range(n)
        for j in range(m)
    ]


def toy_domain(rng, n_src=3, n_tgt=2, dim=4, sentences=3):
    emb = make_emb(rng.standard_normal(((n_src + n_tgt) * sentences, dim)))
    row = iter(range(emb.rows))
    srcs = [
        make_doc(f"s{k}", [f"src {k} sent {i}" for i in range(sentences)],
                 [next(row) for _ in range(sentences)], lang="en")
        for k in range(n_src)
    ]
    tgts = [
        make_doc(f"t{k}", [f"tgt {k} sent {i}" for i in range(sentences)],
                 [next(row) for _ in range(sentences)], lang="fr")
        for k in range(n_tgt)
    ]
    return make_domain(srcs, tgts, emb)


class TestCompetitiveMatch:
    def test_worked_instance(self):
        alignment = competitive_match(pairs_from_matrix([[1, 2], [3, 0.5]]))
        assert alignment.pair_set == {("s2", "t2"), ("s1", "t1")}
        assert alignment.pairs[0] == ScoredPair("s2", "t2", 0.5)

    def test_greedy_is_not_optimal_by_design(self):
        alignment = competitive_match(pairs_from_matrix([[1, 2], [1.5, 10]]))
        assert alignment.pair_set == {("s1", "t1"), ("s2", "t2")}
        assert alignment.total_distance == pytest.approx(11.0)

    def test_single_pair(self):
        alignment = competitive_match([ScoredPair("a", "b", 0.7)])
        assert alignment.pair_set == {("a", "b")}

    def test_empty_input(self):
        assert len(competitive_match([])) == 0

    def test_tie_break_lexicographic(self):
        pairs = pairs_from_matrix([[1.0, 1.0], [1.0, 1.0]])
        alignment = competitive_match(pairs)
        assert alignment.pair_set == {("s1", "t1"), ("s2", "t2")}

    @given(
        st.integers(1, 8), st.integers(1, 8),
        st.randoms(use_true_random=False),
    )
    @settings(max_examples=60)
    def test_injective_and_full_size(self, n, m, rnd):
        matrix = [[rnd.random() for _ in range(m)] for _ in range(n)]
        alignment = competitive_match(pairs_from_matrix(matrix))
        assert len(alignment) == min(n, m)
        # Alignment.__post_init__ enforces injectivity; double-check here
        assert len({p.src_id for p in alignment.pairs}) == len(alignment)
        assert len({p.tgt_id for p in alignment.pairs}) == len(alignment)

    @given(st.integers(2, 6), st.randoms(use_true_random=False))
    @settings(max_examples=30)
    def test_monotone_transform_keeps_selection(self, n, rnd):
        matrix = [[rnd.random() for _ in range(n)] for _ in range(n)]
        base = competitive_match(pairs_from_matrix(matrix))
        squeezed = [[np.arctan(x) for x in row] for row in matrix]
        assert competitive_match(pairs_from_matrix(squeezed)).pair_set == base.pair_set


class TestAlignment:
    def test_rejects_duplicate_source(self):
        with pytest.raises(ValueError, match="injective"):
            Alignment((ScoredPair("a", "x", 1.0), ScoredPair("a", "y", 2.0)))

    def test_rejects_duplicate_target(self):
        with pytest.raises(ValueError, match="injective"):
            Alignment((ScoredPair("a", "x", 1.0), ScoredPair("b", "x", 2.0)))


class TestHungarianOracle:
    def test_worked_instance_beats_greedy(self):
        pairs = pairs_from_matrix([[1, 2], [1.5, 10]])
        optimal = hungarian_oracle(pairs)
        assert optimal.pair_set == {("s1", "t2"), ("s2", "t1")}
        assert optimal.total_distance == pytest.approx(3.5)

    def test_single_pair(self):
        alignment = hungarian_oracle([ScoredPair("a", "b", 0.25)])
        assert alignment.pair_set == {("a", "b")}

    def test_agrees_with_greedy_on_diagonal_dominant(self):
        matrix = [[0.1, 5.0, 5.0], [5.0, 0.2, 5.0], [5.0, 5.0, 0.3]]
        pairs = pairs_from_matrix(matrix)
        assert hungarian_oracle(pairs).pair_set == competitive_match(pairs).pair_set

    def test_incomplete_input_is_error(self):
        pairs = pairs_from_matrix([[1, 2], [3, 4]])[:-1]
        with pytest.raises(ValueError, match="complete bipartite"):
            hungarian_oracle(pairs)

    def test_too_large_is_error(self, rng):
        matrix = rng.random((65, 2))
        with pytest.raises(ValueError, match="too large"):
            hungarian_oracle(pairs_from_matrix(matrix))

    def test_never_worse_than_competitive(self, rng):
        for _ in range(50):
            n, m = rng.integers(1, 10), rng.integers(1, 10)
            pairs = pairs_from_matrix(rng.random((n, m)))
            assert (
                hungarian_oracle(pairs).total_distance
                <= competitive_match(pairs).total_distance + 1e-12
            )


class TestScoreAllPairs:
    def test_cardinality_and_determinism(self, rng):
        domain = toy_domain(rng, n_src=3, n_tgt=2)
        config = ScorerConfig(kind=ScorerKind.SMD, solver=Solver.GREEDY)
        pairs = score_all_pairs(domain, config)
        assert len(pairs) == 6
        assert pairs == score_all_pairs(domain, config, threads=4)

    def test_identical_docs_score_zero(self, rng):
        emb = make_emb(rng.standard_normal((4, 3)))
        src = make_doc("s0", ["a", "b"], [0, 1], lang="en")
        twin = make_doc("t0", ["a'", "b'"], [0, 1], lang="fr")
        other = make_doc("t1", ["c", "d"], [2, 3], lang="fr")
        domain = make_domain([src], [twin, other], emb)
        pairs = score_all_pairs(domain, ScorerConfig(kind=ScorerKind.SMD))
        by_tgt = {p.tgt_id: p.distance for p in pairs}
        assert by_tgt["t0"] == pytest.approx(0.0, abs=1e-12)
        assert by_tgt["t1"] > 0

    def test_sa_matches_standalone_cosine(self, rng):
        domain = toy_domain(rng, n_src=2, n_tgt=2)
        pairs = score_all_pairs(domain, ScorerConfig(kind=ScorerKind.SA))
        emb = domain.embeddings
        for p in pairs:
            src = next(d for d in domain.source_docs if d.doc_id == p.src_id)
            tgt = next(d for d in domain.target_docs if d.doc_id == p.tgt_id)
            expected = cosine_distance(sa_embedding(src, emb), sa_embedding(tgt, emb))
            assert p.distance == pytest.approx(expected, abs=1e-12)

    def test_scorer_failure_names_pair(self, rng):
        domain = toy_domain(rng, n_src=1, n_tgt=1)
        # DE scoring fails: no doc_emb_row anywhere
        with pytest.raises(ScoringError, match=r"\('s0', 't0'\)"):
            score_all_pairs(domain, ScorerConfig(kind=ScorerKind.DE))

    def test_max_vocab_truncates(self, rng):
        emb = make_emb(rng.standard_normal((8, 3)))
        src = make_doc("s0", [f"s{i}" for i in range(4)], [0, 1, 2, 3], lang="en")
        # target equals the first two source sentences' embeddings
        tgt = make_doc("t0", ["x", "y"], [0, 1], lang="fr")
        domain = make_domain([src], [tgt], emb)
        config = ScorerConfig(kind=ScorerKind.SMD, solver=Solver.EXACT, max_vocab=2)
        (pair,) = score_all_pairs(domain, config)
        assert pair.distance == pytest.approx(0.0, abs=1e-9)

    def test_empty_side_is_error(self, rng):
        domain = toy_domain(rng, n_src=2, n_tgt=2)
        empty = make_domain(domain.source_docs, [], domain.embeddings)
        with pytest.raises(ValueError, match="empty"):
            score_all_pairs(empty, ScorerConfig(kind=ScorerKind.SA))

    def test_all_schemes_and_solvers_run(self, rng):
        domain = toy_domain(rng, n_src=2, n_tgt=2)
        for scheme in WeightingScheme:
            for solver in Solver:
                config = ScorerConfig(kind=ScorerKind.SMD, solver=solver, scheme=scheme)
                assert len(score_all_pairs(domain, config)) == 4


def test_competitive_match_scales_like_its_sort(rng):
    """Runtime trend only: a 10x bigger candidate set must cost far less
    than the 100x of a quadratic algorithm."""
    import time

    def measure(n_pairs):
        side = int(np.sqrt(n_pairs))
        pairs = pairs_from_matrix(rng.random((side, side)))
        best = float("inf")
        for _ in range(3):
            t0 = time.perf_counter()
            competitive_match(pairs)
            best = min(best, time.perf_counter() - t0)
        return best

    small, large = measure(20_000), measure(200_000)
    assert large / small < 40.0


class TestAlignmentTsv:
    def test_round_trip_sorted_six_decimals(self, tmp_path):
        alignment = competitive_match(pairs_from_matrix([[0.75, 2], [3, 0.5]]))
        path = tmp_path / "a.tsv"
        write_alignment_tsv([alignment], path)
        text = path.read_text()
        assert text == "s2\tt2\t0.500000\ns1\tt1\t0.750000\n"
        again = read_alignment_tsv(path)
        assert {(p.src_id, p.tgt_id) for p in again} == alignment.pair_set
