"""Unsupervised semantic sentence ranking for single documents."""

from .centrality import (
    BiasVector,
    LocationScorer,
    ScoreTable,
    pagerank_biased,
    pagerank_unbiased,
    sentence_bias,
    uniform_bias,
    word_bias,
)
from .clustering import ClusterAssignment, affinity_propagation, choose_k, spectral_cluster
from .distance import SentenceBag, bag_from_sentence, sim_rbf, sim_reciprocal, wmd_exact, wmd_relaxed
from .embeddings import EmbeddingTable, cosine, load_vectors
from .evaluation import (
    EvalDocument,
    RougeResult,
    combined_ranking,
    evaluate_selection,
    load_corpus,
    rouge_n,
    rouge_su4,
    run_ablation,
)
from .graphs import GraphConfig, SemanticGraph, build_spg, build_ssg, build_swg
from .pipeline import SentenceRanker
from .preprocess import (
    Document,
    LexicalUnit,
    Sentence,
    Token,
    build_document,
    document_from_sentences,
    load_phrase_lexicon,
    porter_stem,
    segment_phrases,
    split_sentences,
)
from .scoring import SalienceTable, combine_scores, sentence_salience, softplus
from .selection import RankedOutput, cut_budget, rank_sentences

__version__ = "0.1.0"

__all__ = [
    "BiasVector",
    "ClusterAssignment",
    "Document",
    "EmbeddingTable",
    "EvalDocument",
    "GraphConfig",
    "LexicalUnit",
    "LocationScorer",
    "RankedOutput",
    "RougeResult",
    "SalienceTable",
    "ScoreTable",
    "SemanticGraph",
    "Sentence",
    "SentenceBag",
    "SentenceRanker",
    "Token",
    "affinity_propagation",
    "bag_from_sentence",
    "build_document",
    "build_spg",
    "build_ssg",
    "build_swg",
    "choose_k",
    "combine_scores",
    "combined_ranking",
    "cosine",
    "cut_budget",
    "document_from_sentences",
    "evaluate_selection",
    "load_corpus",
    "load_phrase_lexicon",
    "load_vectors",
    "pagerank_biased",
    "pagerank_unbiased",
    "porter_stem",
    "rank_sentences",
    "rouge_n",
    "rouge_su4",
    "run_ablation",
    "segment_phrases",
    "sentence_bias",
    "sentence_salience",
    "sim_rbf",
    "sim_reciprocal",
    "softplus",
    "spectral_cluster",
    "split_sentences",
    "uniform_bias",
    "wmd_exact",
    "wmd_relaxed",
    "word_bias",
]
