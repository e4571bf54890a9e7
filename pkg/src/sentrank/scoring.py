"""Sentence salience from node scores: Softplus elevation and score combination.

A sentence's raw salience is the mean node score over its distinct
units; Softplus elevation ln(1 + e^x) is applied per unit first so that
sentences with a few very strong units stay competitive against
uniformly mediocre ones.
"""

import math
from dataclasses import dataclass
from typing import Dict, Mapping, Optional

from .centrality import ScoreTable
from .errors import ConfigurationError
from .preprocess import Sentence

SSR = "ssr"
SPR = "spr"
SWR = "swr"

METHODS = (SSR, SPR, SWR)


@dataclass(frozen=True)
class SalienceTable:
    sal: Dict[int, float]
    sal_sp: Dict[int, float]
    w_sent: Optional[Dict[int, float]]
    f_s: Dict[int, float]


def softplus(x: float) -> float:
    """ln(1 + e^x), computed without overflow for large |x|."""
    return max(x, 0.0) + math.log1p(math.exp(-abs(x)))


def sentence_salience(sent: Sentence, scores: ScoreTable, elevate: bool = True) -> float:
    """Mean (optionally Softplus-elevated) node score over distinct units.

    Units without a score contribute softplus(0) when elevating and 0
    otherwise, and always count toward the normalizer. Sentences with no
    essential units score 0.
    """
    keys = sent.distinct_keys
    if not keys:
        return 0.0
    total = 0.0
    for key in keys:
        value = scores.scores.get(key, 0.0)
        total += softplus(value) if elevate else value
    return total / len(keys)


def combine_scores(
    sal_sp: Mapping[int, float],
    w_sent: Optional[Mapping[int, float]],
    mode: str = SSR,
    sal: Optional[Mapping[int, float]] = None,
) -> SalienceTable:
    """Final per-sentence scores: mean of sal_sp and sentence PageRank for
    the full model, plain sal_sp passthrough for the sub-models."""
    if mode not in METHODS:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == SSR:
        if w_sent is None:
            raise ConfigurationError("SSR mode requires sentence PageRank scores")
        f_s = {i: 0.5 * (sal_sp[i] + w_sent[i]) for i in sal_sp}
    else:
        f_s = dict(sal_sp)
    return SalienceTable(
        sal=dict(sal) if sal is not None else {},
        sal_sp=dict(sal_sp),
        w_sent=dict(w_sent) if w_sent is not None else None,
        f_s=f_s,
    )
