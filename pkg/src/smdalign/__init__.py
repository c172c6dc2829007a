"""Cross-lingual document alignment with sentence mover's distance."""

from .baselines import DocEmbedding, cosine_distance, de_embedding, sa_embedding
from .corpus import (
    CorpusFormatError,
    Document,
    DomainCorpus,
    EmbeddingMatrix,
    SentenceRef,
    SentenceVocabulary,
    build_vocabulary,
    load_corpus,
    load_embeddings,
    load_gold,
    save_corpus,
    save_embeddings,
    save_gold,
)
from .evaluation import (
    ApproxReport,
    EvalReport,
    SynthSpec,
    compare_approximations,
    generate_synthetic,
    kendall_tau,
    mae,
    recall,
)
from .matching import (
    Alignment,
    ScoredPair,
    ScorerConfig,
    ScorerKind,
    competitive_match,
    hungarian_oracle,
    score_all_pairs,
    write_alignment_tsv,
)
from .transport import (
    InvariantError,
    SmdResult,
    Solver,
    TransportPlan,
    cost_matrix,
    exact_smd,
    greedy_smd,
    oracle_smd,
    relaxed_smd,
)
from .weighting import (
    DomainIdf,
    MassDistribution,
    WeightingScheme,
    build_domain_idf,
    idf_weights,
    sl_weights,
    slidf_weights,
    uniform_weights,
)

__version__ = "0.1.0"
