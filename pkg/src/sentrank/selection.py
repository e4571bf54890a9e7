"""Round-robin greedy sentence selection and budget cutting.

The multi-objective knapsack is approximated greedily: sentences are
scored per unit of character length, each cluster keeps its members
sorted by unit score, and rounds repeatedly take the best remaining
sentence of each cluster in order of cluster strength. Ties break
toward the lower sentence index everywhere.
"""

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .clustering import ClusterAssignment
from .preprocess import Document
from .scoring import SalienceTable

WORDS = "words"
CHARS = "chars"


@dataclass(frozen=True)
class RankedOutput:
    order: Tuple[int, ...]  # sentence indices, rank 1 first
    unit_scores: Dict[int, float]
    round: Dict[int, int]  # 1-based round-robin pass per sentence
    cluster: Dict[int, int]


def rank_sentences(
    sal: SalienceTable, clusters: ClusterAssignment, doc: Document
) -> RankedOutput:
    """Round-robin selection over clusters, producing a total ranking.

    Every round re-sorts the remaining clusters by their current best
    unit score and takes each cluster's top sentence once.
    """
    unit_scores = {}
    for sent in doc.sentences:
        length = max(sent.char_length, 1)
        unit_scores[sent.index] = sal.f_s[sent.index] / length

    # per-cluster queues sorted best-first, ties toward lower index
    queues: Dict[int, List[int]] = {}
    for idx, label in clusters.labels.items():
        queues.setdefault(label, []).append(idx)
    for members in queues.values():
        members.sort(key=lambda i: (-unit_scores[i], i))

    order: List[int] = []
    rounds: Dict[int, int] = {}
    pass_no = 0
    while any(queues.values()):
        pass_no += 1
        active = [label for label, members in queues.items() if members]
        active.sort(key=lambda label: (-unit_scores[queues[label][0]], queues[label][0]))
        for label in active:
            picked = queues[label].pop(0)
            order.append(picked)
            rounds[picked] = pass_no

    return RankedOutput(
        order=tuple(order),
        unit_scores=unit_scores,
        round=rounds,
        cluster=dict(clusters.labels),
    )


def cut_budget(
    ranked: RankedOutput, doc: Document, budget: int, unit: str = WORDS
) -> Tuple[List[int], bool]:
    """Longest ranked prefix fitting the budget, re-sorted to document order.

    Returns (indices, over_budget). When even the top sentence exceeds
    the budget it is returned alone with over_budget=True.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    if unit not in (WORDS, CHARS):
        raise ValueError(f"unknown budget unit {unit!r}")
    by_index = {s.index: s for s in doc.sentences}

    def length(idx: int) -> int:
        sent = by_index[idx]
        return len(sent.raw.split()) if unit == WORDS else sent.char_length

    chosen: List[int] = []
    used = 0
    for idx in ranked.order:
        cost = length(idx)
        if used + cost > budget:
            break
        chosen.append(idx)
        used += cost

    if not chosen and ranked.order:
        return [ranked.order[0]], True
    return sorted(chosen), False
