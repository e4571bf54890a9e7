"""Semantic subtopic clustering of sentences.

Two clusterers over WMD-derived similarities: spectral clustering on the
normalized Laplacian of the RBF affinity (cluster count fixed up front)
and affinity propagation over reciprocal similarities (cluster count
emerges from the message passing). Both are deterministic: seeding and
iteration order are fixed.
"""

import warnings
from dataclasses import dataclass
from typing import FrozenSet, Optional, Sequence

import numpy as np
from scipy.linalg import eigh

from .distance import SentenceBag, pairwise_similarity
from .embeddings import EmbeddingTable

DEFAULT_CLUSTER_CAP = 8


@dataclass(frozen=True)
class ClusterAssignment:
    labels: dict  # sentence index (1-based) -> cluster id, contiguous from 0
    k: int
    exemplars: Optional[FrozenSet[int]] = None


def choose_k(n: int, cap: int = DEFAULT_CLUSTER_CAP) -> int:
    """Cluster count floor(0.3 n) capped at `cap`, clamped to at least 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return max(1, min(int(0.3 * n), cap))


def single_cluster(n: int) -> ClusterAssignment:
    """All sentences in one cluster (the no-clustering ablation)."""
    return ClusterAssignment(labels={i: 0 for i in range(1, n + 1)}, k=1)


def _relabel(raw_labels: np.ndarray) -> dict:
    """Map raw labels to contiguous ids in order of first appearance."""
    mapping = {}
    labels = {}
    for pos, raw in enumerate(raw_labels):
        if raw not in mapping:
            mapping[raw] = len(mapping)
        labels[pos + 1] = mapping[raw]
    return labels


def _farthest_point_kmeans(points: np.ndarray, k: int, max_iter: int = 100) -> np.ndarray:
    """Deterministic k-means: seeds by farthest-point from row 0, Lloyd updates."""
    centers = [0]
    dist = np.linalg.norm(points - points[0], axis=1)
    while len(centers) < k:
        nxt = int(np.argmax(dist))
        centers.append(nxt)
        dist = np.minimum(dist, np.linalg.norm(points - points[nxt], axis=1))
    centroids = points[centers].copy()
    labels = None
    for _ in range(max_iter):
        d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_labels = np.argmin(d2, axis=1)  # argmin breaks ties toward lower id
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(k):
            members = points[labels == c]
            if len(members):
                centroids[c] = members.mean(axis=0)
    return labels


def spectral_cluster(
    bags: Sequence[Optional[SentenceBag]],
    table: EmbeddingTable,
    k: int,
    gamma: float = 1.0,
) -> ClusterAssignment:
    """Spectral clustering on the symmetric normalized Laplacian.

    Affinity is the RBF kernel of relaxed WMD; the embedding rows are the
    eigenvectors of the k smallest eigenvalues, row-normalized, clustered
    by deterministic k-means.
    """
    n = len(bags)
    if n < 2:
        raise ValueError("spectral clustering needs >= 2 sentences")
    if k > n:
        raise ValueError(f"k={k} exceeds number of sentences n={n}")
    affinity = pairwise_similarity(bags, table, kernel="rbf", gamma=gamma)
    deg = affinity.sum(axis=1)
    inv_sqrt = 1.0 / np.sqrt(np.maximum(deg, 1e-12))
    laplacian = np.eye(n) - inv_sqrt[:, None] * affinity * inv_sqrt[None, :]
    laplacian = 0.5 * (laplacian + laplacian.T)
    _, vecs = eigh(laplacian, subset_by_index=(0, k - 1))
    norms = np.linalg.norm(vecs, axis=1)
    rows = vecs / np.maximum(norms, 1e-12)[:, None]
    labels = _farthest_point_kmeans(rows, k)
    relabeled = _relabel(labels)
    return ClusterAssignment(labels=relabeled, k=len(set(relabeled.values())))


def affinity_propagation(
    bags: Sequence[Optional[SentenceBag]],
    table: EmbeddingTable,
    damping: float = 0.5,
    max_iter: int = 200,
    stable_iters: int = 15,
) -> ClusterAssignment:
    """Exemplar-based clustering via responsibility/availability passing.

    Similarities are reciprocal WMD similarities with the diagonal
    preference set to the median off-diagonal value. Updates are damped
    (new <- damping*old + (1-damping)*new); iteration stops once the
    exemplar set {i : r_ii + a_ii > 0} is unchanged for `stable_iters`
    rounds. If no exemplar emerges, falls back to a single cluster.
    """
    n = len(bags)
    if n < 1:
        raise ValueError("affinity propagation needs >= 1 sentence")
    if not (0 <= damping < 1):
        raise ValueError("damping must lie in [0, 1)")
    if n == 1:
        return ClusterAssignment(labels={1: 0}, k=1, exemplars=frozenset({1}))

    sims = pairwise_similarity(bags, table, kernel="reciprocal")
    off_diag = sims[~np.eye(n, dtype=bool)]
    preference = float(np.median(off_diag))
    # identical sentences make exemplar-hood a perfect tie (r_ii + a_ii
    # converges to exactly 0 for the whole duplicate group); a tiny
    # index-decreasing preference offset breaks the tie deterministically
    # toward earlier sentences
    jitter = 1e-9 * max(1.0, float(np.max(np.abs(sims))))
    np.fill_diagonal(sims, preference - jitter * np.arange(n))

    resp = np.zeros((n, n))
    avail = np.zeros((n, n))
    exemplars: FrozenSet[int] = frozenset()
    stable = 0
    for _ in range(max_iter):
        # responsibilities: r_ij = s_ij - max_{j' != j}(s_ij' + a_ij')
        msg = sims + avail
        idx = np.arange(n)
        best_j = np.argmax(msg, axis=1)
        best = msg[idx, best_j]
        msg[idx, best_j] = -np.inf
        second = np.max(msg, axis=1)
        new_resp = sims - best[:, None]
        new_resp[idx, best_j] = sims[idx, best_j] - second
        resp = damping * resp + (1 - damping) * new_resp

        # availabilities
        rp = np.maximum(resp, 0)
        np.fill_diagonal(rp, 0)
        colsum = rp.sum(axis=0)
        new_avail = np.minimum(0, np.diag(resp)[None, :] + colsum[None, :] - rp)
        np.fill_diagonal(new_avail, colsum)
        avail = damping * avail + (1 - damping) * new_avail

        current = frozenset(int(i) + 1 for i in np.nonzero(np.diag(resp) + np.diag(avail) > 0)[0])
        if current == exemplars and current:
            stable += 1
            if stable >= stable_iters:
                break
        else:
            stable = 0
            exemplars = current

    if not exemplars:
        warnings.warn("affinity propagation found no exemplars; using a single cluster")
        assignment = single_cluster(n)
        return ClusterAssignment(labels=assignment.labels, k=1, exemplars=None)

    ex_sorted = sorted(exemplars)
    cluster_of = {e: c for c, e in enumerate(ex_sorted)}
    labels = {}
    for i in range(1, n + 1):
        if i in cluster_of:
            labels[i] = cluster_of[i]
        else:
            best_e = max(ex_sorted, key=lambda e: (sims[i - 1, e - 1], -e))
            labels[i] = cluster_of[best_e]
    return ClusterAssignment(labels=labels, k=len(ex_sorted), exemplars=frozenset(ex_sorted))
