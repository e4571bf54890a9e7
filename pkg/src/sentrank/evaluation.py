"""ROUGE scoring, judge-ranking corpora, and the ablation harness.

ROUGE here is recall-oriented n-gram / skip-bigram overlap over
lowercased, punctuation-stripped tokens, averaged over references.
Corpora are JSON Lines files whose documents carry either abstractive
reference summaries or per-judge sentence ranking scores.
"""

import json
import math
import warnings
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .errors import DataError


@dataclass(frozen=True)
class EvalDocument:
    id: str
    sentences: List[str]
    references: Optional[List[str]] = None
    judge_scores: Optional[List[List[float]]] = None

    def __post_init__(self):
        if self.references is None and self.judge_scores is None:
            raise DataError(f"document {self.id!r} has neither references nor judge_scores")
        if self.judge_scores is not None:
            for j, scores in enumerate(self.judge_scores):
                if len(scores) != len(self.sentences):
                    raise DataError(
                        f"document {self.id!r}: judge {j + 1} has {len(scores)} scores "
                        f"for {len(self.sentences)} sentences"
                    )


@dataclass(frozen=True)
class RougeResult:
    r1: float
    r2: float
    rsu4: float

    def as_dict(self) -> Dict[str, float]:
        return {"r1": self.r1, "r2": self.r2, "rsu4": self.rsu4}


def _tokenize(text: str) -> List[str]:
    out = []
    word = []
    for ch in text.lower():
        if ch.isalnum():
            word.append(ch)
        elif word:
            out.append("".join(word))
            word = []
    if word:
        out.append("".join(word))
    return out


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _su4_units(tokens: Sequence[str], max_gap: int = 4) -> Counter:
    """Unigrams plus skip-bigrams with at most `max_gap` intervening tokens."""
    units = Counter((t,) for t in tokens)
    for i in range(len(tokens)):
        for j in range(i + 1, min(i + max_gap + 2, len(tokens))):
            units[(tokens[i], tokens[j])] += 1
    return units


def _clipped_recall(candidate: Counter, reference: Counter) -> Optional[float]:
    total = sum(reference.values())
    if total == 0:
        return None
    overlap = sum(min(count, candidate[unit]) for unit, count in reference.items())
    return overlap / total


def rouge_n(candidate: str, references: Sequence[str], n: int) -> float:
    """Mean n-gram recall against each reference (clipped overlap)."""
    if n not in (1, 2):
        raise ValueError("only ROUGE-1 and ROUGE-2 are supported")
    if not references:
        raise ValueError("references must be non-empty")
    cand = _ngrams(_tokenize(candidate), n)
    recalls = []
    for ref in references:
        recall = _clipped_recall(cand, _ngrams(_tokenize(ref), n))
        if recall is None:
            warnings.warn(f"reference shorter than {n} tokens contributes recall 0")
            recall = 0.0
        recalls.append(recall)
    return sum(recalls) / len(recalls)


def rouge_su4(candidate: str, references: Sequence[str]) -> float:
    """Mean skip-bigram (gap <= 4) plus unigram recall against references."""
    if not references:
        raise ValueError("references must be non-empty")
    cand = _su4_units(_tokenize(candidate))
    recalls = []
    for ref in references:
        recall = _clipped_recall(cand, _su4_units(_tokenize(ref)))
        if recall is None:
            warnings.warn("empty reference contributes recall 0")
            recall = 0.0
        recalls.append(recall)
    return sum(recalls) / len(recalls)


def rouge_all(candidate: str, references: Sequence[str]) -> RougeResult:
    return RougeResult(
        r1=rouge_n(candidate, references, 1),
        r2=rouge_n(candidate, references, 2),
        rsu4=rouge_su4(candidate, references),
    )


def combined_ranking(judge_scores: Sequence[Sequence[float]]) -> List[float]:
    """Per-sentence arithmetic mean of judge ranking scores."""
    if not judge_scores:
        raise ValueError("at least one judge is required")
    lengths = {len(scores) for scores in judge_scores}
    if len(lengths) > 1:
        raise DataError(f"judge score sequences have differing lengths {sorted(lengths)}")
    count = len(judge_scores)
    return [sum(scores[i] for scores in judge_scores) / count for i in range(lengths.pop())]


def top_k_by_score(scores: Sequence[float], k: int) -> List[int]:
    """Indices (1-based) of the k best scores, ties toward the lower index."""
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    return sorted(i + 1 for i in order[:k])


def selection_text(sentences: Sequence[str], indices: Sequence[int]) -> str:
    """Join the selected sentences (1-based indices) in document order."""
    return " ".join(sentences[i - 1] for i in sorted(indices))


def evaluate_selection(
    doc: EvalDocument,
    ranking_order: Sequence[int],
    pct: float,
    reference_judges: Optional[Sequence[int]] = None,
) -> RougeResult:
    """Score a method ranking's top-pct% selection against references.

    With judge scores, each reference judge's equally sized top selection
    (re-joined in document order) is a reference text; otherwise the
    document's abstractive references are used directly.
    """
    if not (0 < pct <= 100):
        raise ValueError("pct must lie in (0, 100]")
    n = len(doc.sentences)
    k = math.ceil(pct / 100.0 * n)
    if k == 0:
        raise ValueError("pct selects zero sentences")
    candidate = selection_text(doc.sentences, list(ranking_order)[:k])

    if doc.judge_scores is None and reference_judges:
        raise DataError(f"document {doc.id!r} has no judge_scores")
    if doc.judge_scores is not None:
        judges = reference_judges or list(range(1, len(doc.judge_scores) + 1))
        for j in judges:
            if not (1 <= j <= len(doc.judge_scores)):
                raise DataError(f"document {doc.id!r} has no judge {j}")
        references = [
            selection_text(doc.sentences, top_k_by_score(doc.judge_scores[j - 1], k))
            for j in judges
        ]
    else:
        references = list(doc.references)
    return rouge_all(candidate, references)


def load_corpus(path) -> List[EvalDocument]:
    """Read a JSON Lines corpus; schema violations name the line."""
    docs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            try:
                docs.append(
                    EvalDocument(
                        id=str(record["id"]),
                        sentences=list(record["sentences"]),
                        references=record.get("references"),
                        judge_scores=record.get("judge_scores"),
                    )
                )
            except (KeyError, TypeError) as exc:
                raise DataError(f"{path}:{lineno}: bad document record ({exc})") from None
            except DataError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
    return docs


ABLATION_FLAGS = ("NSE", "NAS", "NSC", "NSP")


def run_ablation(
    corpus: Sequence[EvalDocument],
    flags,
    ranker_factory,
    pct: float = 10.0,
    reference_judges: Optional[Sequence[int]] = None,
) -> RougeResult:
    """Mean ROUGE of one pipeline variant over a corpus.

    `flags` is a subset of NSE/NAS/NSC/NSP; `ranker_factory(flags)` must
    return an object whose rank_presplit(sentences) yields ranked
    sentence indices.
    """
    if not corpus:
        raise ValueError("corpus must be non-empty")
    flags = frozenset(f.upper() for f in flags)
    unknown = flags - set(ABLATION_FLAGS)
    if unknown:
        raise ValueError(f"unknown ablation flags {sorted(unknown)}")
    ranker = ranker_factory(flags)
    totals = [0.0, 0.0, 0.0]
    for doc in corpus:
        order = ranker.rank_presplit(doc.sentences)
        result = evaluate_selection(doc, order, pct, reference_judges)
        totals[0] += result.r1
        totals[1] += result.r2
        totals[2] += result.rsu4
    count = len(corpus)
    return RougeResult(r1=totals[0] / count, r2=totals[1] / count, rsu4=totals[2] / count)
