"""PageRank scoring of graph nodes, unbiased and article-structure-biased.

The unbiased fixed point satisfies sum(W) = n; the biased variant
replaces the uniform jump with a location-derived teleport distribution
and satisfies sum(W') = 1. Iteration is Jacobi-style for determinism.
"""

import math
from dataclasses import dataclass
from typing import Dict, Hashable, Mapping, Optional, Sequence

import numpy as np

from .graphs import SemanticGraph
from .preprocess import Document

Node = Hashable

INVERTED_PYRAMID = "inverted_pyramid"
HOURGLASS = "hourglass"
UNIFORM = "uniform"


@dataclass(frozen=True)
class BiasVector:
    probs: Mapping[Node, float]

    def __post_init__(self):
        total = sum(self.probs.values())
        if self.probs and abs(total - 1.0) > 1e-9:
            raise ValueError(f"bias probabilities sum to {total}, expected 1")
        if any(p < 0 for p in self.probs.values()):
            raise ValueError("bias probabilities must be non-negative")


@dataclass(frozen=True)
class ScoreTable:
    scores: Dict[Node, float]
    iterations_used: int
    converged: bool

    def dump(self) -> str:
        return "\n".join(f"{k}\t{v:.12g}" for k, v in sorted(self.scores.items(), key=lambda kv: repr(kv[0])))


class LocationScorer:
    """Positive position weights under an article-structure prior.

    Inverted pyramid decays from the top (1/i for words,
    1/log10(1+i) for sentences); hourglass elevates head and tail
    symmetrically; uniform is the no-structure ablation.
    """

    def __init__(self, structure: str = INVERTED_PYRAMID):
        if structure not in (INVERTED_PYRAMID, HOURGLASS, UNIFORM):
            raise ValueError(f"unknown article structure {structure!r}")
        self.structure = structure

    def word_score(self, i: int, n: int) -> float:
        if self.structure == UNIFORM:
            return 1.0
        if self.structure == HOURGLASS:
            i = min(i, n + 1 - i)
        return 1.0 / i

    def sentence_score(self, i: int, n: int) -> float:
        if self.structure == UNIFORM:
            return 1.0
        if self.structure == HOURGLASS:
            i = min(i, n + 1 - i)
        return 1.0 / math.log10(1 + i)


def _transition_matrix(g: SemanticGraph) -> np.ndarray:
    """Column-stochastic matrix T with T[i, j] = w_ji / sum_k w_jk.

    Dangling nodes are repaired in the transition only: they spread
    uniformly over all other nodes.
    """
    nodes = g.nodes
    n = len(nodes)
    index = {v: i for i, v in enumerate(nodes)}
    t = np.zeros((n, n), dtype=np.float64)
    for j, vj in enumerate(nodes):
        neigh = g.neighbors(vj)
        total = sum(w for _, w in neigh)
        if total > 0:
            for vk, w in neigh:
                t[index[vk], j] += w / total
        elif n > 1:
            t[:, j] = 1.0 / (n - 1)
            t[j, j] = 0.0
    return t


def _iterate(
    t: np.ndarray, jump: np.ndarray, init: np.ndarray, d: float, tol: float, max_iter: int
):
    scores = init.copy()
    for it in range(1, max_iter + 1):
        new = d * (t @ scores) + jump
        if float(np.max(np.abs(new - scores))) < tol:
            return new, it, True
        scores = new
    return scores, max_iter, False


def pagerank_unbiased(
    g: SemanticGraph, d: float = 0.85, tol: float = 1e-8, max_iter: int = 100
) -> ScoreTable:
    """Power iteration for the uniform-jump fixed point (sum of scores = n)."""
    if not (0 < d < 1):
        raise ValueError("damping factor must lie in (0, 1)")
    t = _transition_matrix(g)
    n = len(g.nodes)
    jump = np.full(n, 1.0 - d)
    scores, its, ok = _iterate(t, jump, np.ones(n), d, tol, max_iter)
    return ScoreTable(dict(zip(g.nodes, scores)), iterations_used=its, converged=ok)


def pagerank_biased(
    g: SemanticGraph,
    bias: BiasVector,
    d: float = 0.85,
    tol: float = 1e-8,
    max_iter: int = 100,
) -> ScoreTable:
    """Power iteration with teleport distribution `bias` (sum of scores = 1)."""
    if not (0 < d < 1):
        raise ValueError("damping factor must lie in (0, 1)")
    missing = [v for v in g.nodes if v not in bias.probs]
    if missing:
        raise ValueError(f"bias is missing {len(missing)} graph nodes, e.g. {missing[0]!r}")
    t = _transition_matrix(g)
    n = len(g.nodes)
    p = np.array([bias.probs[v] for v in g.nodes])
    jump = (1.0 - d) * p
    scores, its, ok = _iterate(t, jump, np.full(n, 1.0 / n), d, tol, max_iter)
    return ScoreTable(dict(zip(g.nodes, scores)), iterations_used=its, converged=ok)


def word_bias(
    doc: Document, ls: LocationScorer, nodes: Optional[Sequence[str]] = None
) -> BiasVector:
    """Teleport distribution for unit nodes from sentence location scores.

    Each containing sentence contributes its word-location score once per
    unit (set-style sum), then the totals are normalized. `nodes`
    restricts and orders the result to a graph's node set.
    """
    raw: Dict[str, float] = {}
    for sent in doc.sentences:
        score = ls.word_score(sent.index, doc.n)
        for key in sent.distinct_keys:
            raw[key] = raw.get(key, 0.0) + score
    if nodes is not None:
        raw = {k: raw.get(k, 0.0) for k in nodes}
    total = sum(raw.values())
    if total <= 0:
        # no positional mass (e.g. all-empty sentences): fall back to uniform
        return BiasVector({k: 1.0 / len(raw) for k in raw} if raw else {})
    return BiasVector({k: v / total for k, v in raw.items()})


def sentence_bias(doc: Document, ls: LocationScorer) -> BiasVector:
    """Teleport distribution over sentence indices, normalized location scores."""
    raw = {s.index: ls.sentence_score(s.index, doc.n) for s in doc.sentences}
    total = sum(raw.values())
    return BiasVector({i: v / total for i, v in raw.items()})


def uniform_bias(nodes: Sequence[Node]) -> BiasVector:
    """Uniform teleport distribution (article-structure ablation)."""
    n = len(nodes)
    return BiasVector({v: 1.0 / n for v in nodes})
