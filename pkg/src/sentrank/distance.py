"""Sentence-level semantic distance: WMD, its linear-time relaxation, kernels.

Sentences are reduced to weighted bags of distinct embedded unit keys.
The production distance is the two-sided relaxed WMD (each side moves
whole weights to nearest counterparts); the exact transportation solve
exists as a test oracle. Ground cost is Euclidean distance between
embedding vectors.
"""

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from .embeddings import EmbeddingTable
from .errors import DistanceError
from .preprocess import Sentence

DEFAULT_UNIT_CAP = 30


@dataclass(frozen=True)
class SentenceBag:
    keys: Tuple[str, ...]
    weights: Tuple[float, ...]

    def __post_init__(self):
        if len(self.keys) != len(self.weights):
            raise ValueError("keys and weights lengths differ")
        if len(set(self.keys)) != len(self.keys):
            raise ValueError("bag keys must be distinct")
        if self.keys:
            if any(w < 0 for w in self.weights):
                raise ValueError("weights must be non-negative")
            if abs(sum(self.weights) - 1.0) > 1e-9:
                raise ValueError("weights must sum to 1")

    def __len__(self) -> int:
        return len(self.keys)


def bag_from_sentence(
    sent: Sentence, table: EmbeddingTable, cap: int = DEFAULT_UNIT_CAP
) -> Optional[SentenceBag]:
    """Build a frequency-weighted bag over the sentence's embedded units.

    Distinct keys are capped at `cap`, keeping the most frequent (ties by
    first occurrence). Returns None when no unit has an embedding.
    """
    counts = Counter()
    first_pos = {}
    for pos, unit in enumerate(sent.units):
        if unit.key in table:
            counts[unit.key] += 1
            first_pos.setdefault(unit.key, pos)
    if not counts:
        return None
    keys = sorted(counts, key=lambda k: (-counts[k], first_pos[k]))[:cap]
    total = sum(counts[k] for k in keys)
    return SentenceBag(keys=tuple(keys), weights=tuple(counts[k] / total for k in keys))


def _cost_matrix(a: SentenceBag, b: SentenceBag, table: EmbeddingTable) -> np.ndarray:
    va = table.matrix(a.keys)
    vb = table.matrix(b.keys)
    diff = va[:, None, :] - vb[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def _check_nonempty(a: SentenceBag, b: SentenceBag) -> None:
    if len(a) == 0 or len(b) == 0:
        raise DistanceError("WMD is undefined for an empty bag")


def wmd_exact(a: SentenceBag, b: SentenceBag, table: EmbeddingTable) -> float:
    """Optimal transportation cost between two bags (test oracle path).

    Solves the dense transportation LP with supplies a.weights and
    demands b.weights via linprog; quadratic-size, not for production.
    """
    _check_nonempty(a, b)
    cost = _cost_matrix(a, b, table)
    na, nb = len(a), len(b)
    # flow variables f_ij >= 0, row sums = supplies, column sums = demands
    a_eq = np.zeros((na + nb, na * nb))
    for i in range(na):
        a_eq[i, i * nb : (i + 1) * nb] = 1.0
    for j in range(nb):
        a_eq[na + j, j::nb] = 1.0
    b_eq = np.concatenate([a.weights, b.weights])
    res = linprog(cost.ravel(), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if not res.success:
        raise DistanceError(f"transportation solve failed: {res.message}")
    return float(res.fun)


def wmd_relaxed(a: SentenceBag, b: SentenceBag, table: EmbeddingTable) -> float:
    """Two-sided relaxed WMD: max of the one-sided nearest-neighbor moves.

    Each side sends every unit's whole weight to its nearest counterpart
    in the other bag; the outer max makes the result symmetric and keeps
    it a lower bound on the exact transport cost.
    """
    _check_nonempty(a, b)
    cost = _cost_matrix(a, b, table)
    left = float(np.dot(a.weights, cost.min(axis=1)))
    right = float(np.dot(b.weights, cost.min(axis=0)))
    return max(left, right)


def sim_reciprocal(a: SentenceBag, b: SentenceBag, table: EmbeddingTable) -> float:
    """Reciprocal similarity 1 / (1 + WMD), in (0, 1]."""
    return 1.0 / (1.0 + wmd_relaxed(a, b, table))


def sim_rbf(a: SentenceBag, b: SentenceBag, table: EmbeddingTable, gamma: float = 1.0) -> float:
    """RBF kernel similarity exp(-gamma * WMD^2), in (0, 1]."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return math.exp(-gamma * wmd_relaxed(a, b, table) ** 2)


def pairwise_similarity(
    bags: Sequence[Optional[SentenceBag]],
    table: EmbeddingTable,
    kernel: str = "reciprocal",
    gamma: float = 1.0,
) -> np.ndarray:
    """Symmetric similarity matrix over bags; None entries get similarity 0.

    The diagonal is 1. Kernel is "reciprocal" (Eq.-style 1/(1+WMD)) or
    "rbf" (exp(-gamma WMD^2)).
    """
    n = len(bags)
    sims = np.zeros((n, n), dtype=np.float64)
    np.fill_diagonal(sims, 1.0)
    for i in range(n):
        if bags[i] is None:
            continue
        for j in range(i + 1, n):
            if bags[j] is None:
                continue
            if kernel == "reciprocal":
                s = sim_reciprocal(bags[i], bags[j], table)
            elif kernel == "rbf":
                s = sim_rbf(bags[i], bags[j], table, gamma)
            else:
                raise ValueError(f"unknown kernel {kernel!r}")
            sims[i, j] = sims[j, i] = s
    return sims
