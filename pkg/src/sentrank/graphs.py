"""Weighted semantic graphs over words (SWG), phrases+words (SPG), sentences (SSG).

Every graph carries two separately normalized weight channels per edge:
a co-occurrence channel and an embedding-similarity channel, summed into
the final edge weight. Channels are normalized globally (each sums to 1
over the edges where it is present).
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .distance import DEFAULT_UNIT_CAP, SentenceBag, bag_from_sentence, sim_reciprocal
from .embeddings import EmbeddingTable, cosine
from .errors import DegenerateGraphError
from .preprocess import Document, PHRASE, WORD

SWG = "SWG"
SPG = "SPG"
SSG = "SSG"

Node = Hashable
EdgeKey = Tuple[Node, Node]

# floor for the log-length denominator of sentence co-occurrence weights,
# which is singular when both sentences have <= 1 essential unit
LOG_DENOM_FLOOR = 0.1


@dataclass(frozen=True)
class EdgeWeights:
    w_c: float
    w_s: float

    @property
    def w(self) -> float:
        return self.w_c + self.w_s


@dataclass(frozen=True)
class GraphConfig:
    window_swg: int = 2
    window_spg: int = 3
    delta_swg: float = 0.65
    delta_spg: float = 0.6
    gamma_pct: float = 30.0
    ablate_semantic_edges: bool = False

    def __post_init__(self):
        if self.window_swg < 2 or self.window_spg < 2:
            raise ValueError("window sizes must be >= 2")
        if not (0 < self.delta_swg < 1 and 0 < self.delta_spg < 1):
            raise ValueError("semantic thresholds must lie in (0, 1)")
        if not (0 < self.gamma_pct <= 100):
            raise ValueError("gamma_pct must lie in (0, 100]")


class SemanticGraph:
    """Undirected graph with dual-channel edge weights."""

    def __init__(self, kind: str, nodes: Sequence[Node], edges: Dict[EdgeKey, EdgeWeights]):
        self.kind = kind
        self.nodes: Tuple[Node, ...] = tuple(nodes)
        self._index = {v: i for i, v in enumerate(self.nodes)}
        self.edges = edges
        self._adj: Dict[Node, List[Tuple[Node, float]]] = {v: [] for v in self.nodes}
        for (u, v), wt in edges.items():
            self._adj[u].append((v, wt.w))
            self._adj[v].append((u, wt.w))

    def __contains__(self, node: Node) -> bool:
        return node in self._index

    def weights(self, u: Node, v: Node) -> Optional[EdgeWeights]:
        return self.edges.get(_edge_key(u, v))

    def neighbors(self, v: Node) -> List[Tuple[Node, float]]:
        return self._adj[v]

    def dump_edges(self) -> str:
        """Edge list as tab-separated lines, sorted lexicographically."""
        lines = []
        for (u, v), wt in self.edges.items():
            lines.append(f"{u}\t{v}\t{wt.w_c:.12g}\t{wt.w_s:.12g}\t{wt.w:.12g}")
        return "\n".join(sorted(lines))


def _edge_key(u: Node, v: Node) -> EdgeKey:
    # nodes are homogeneous per graph (str keys or int sentence indices)
    return (u, v) if u <= v else (v, u)


def _normalize_channels(
    kind: str,
    nodes: Sequence[Node],
    cooc: Dict[EdgeKey, float],
    sem: Dict[EdgeKey, float],
) -> SemanticGraph:
    total_c = sum(cooc.values())
    total_s = sum(sem.values())
    edges: Dict[EdgeKey, EdgeWeights] = {}
    for key in set(cooc) | set(sem):
        w_c = cooc.get(key, 0.0) / total_c if total_c > 0 else 0.0
        w_s = sem.get(key, 0.0) / total_s if total_s > 0 else 0.0
        edges[key] = EdgeWeights(w_c=w_c, w_s=w_s)
    return SemanticGraph(kind=kind, nodes=nodes, edges=edges)


def _window_cooccurrence(streams: Sequence[Sequence[Node]], window: int) -> Dict[EdgeKey, float]:
    """Count key pairs within `window` successive units; sentence-local."""
    counts: Dict[EdgeKey, float] = {}
    for stream in streams:
        for i in range(len(stream)):
            for j in range(i + 1, min(i + window, len(stream))):
                if stream[i] == stream[j]:
                    continue
                key = _edge_key(stream[i], stream[j])
                counts[key] = counts.get(key, 0.0) + 1.0
    return counts


def _semantic_pairs(
    nodes: Sequence[str], table: EmbeddingTable, threshold: float
) -> Dict[EdgeKey, float]:
    embedded = [v for v in nodes if v in table]
    sem: Dict[EdgeKey, float] = {}
    for i in range(len(embedded)):
        for j in range(i + 1, len(embedded)):
            value = cosine(embedded[i], embedded[j], table)
            if value > threshold:
                sem[_edge_key(embedded[i], embedded[j])] = value
    return sem


def _build_unit_graph(
    kind: str,
    streams: Sequence[Sequence[str]],
    table: EmbeddingTable,
    window: int,
    threshold: float,
    ablate_semantic: bool,
) -> SemanticGraph:
    seen = {}
    for stream in streams:
        for key in stream:
            seen.setdefault(key, None)
    nodes = list(seen)
    if len(nodes) < 2:
        raise DegenerateGraphError(f"{kind} needs >= 2 distinct units, got {len(nodes)}")
    cooc = _window_cooccurrence(streams, window)
    sem = {} if ablate_semantic else _semantic_pairs(nodes, table, threshold)
    return _normalize_channels(kind, nodes, cooc, sem)


def build_swg(doc: Document, table: EmbeddingTable, cfg: GraphConfig) -> SemanticGraph:
    """Word graph: sliding-window co-occurrence plus cosine > delta edges."""
    streams = [[u.key for u in s.units if u.kind == WORD] for s in doc.sentences]
    return _build_unit_graph(
        SWG, streams, table, cfg.window_swg, cfg.delta_swg, cfg.ablate_semantic_edges
    )


def build_spg(doc: Document, table: EmbeddingTable, cfg: GraphConfig) -> SemanticGraph:
    """Phrase-word graph over the mixed unit stream."""
    streams = [[u.key for u in s.units] for s in doc.sentences]
    return _build_unit_graph(
        SPG, streams, table, cfg.window_spg, cfg.delta_spg, cfg.ablate_semantic_edges
    )


def build_ssg(
    doc: Document,
    table: EmbeddingTable,
    cfg: GraphConfig,
    bags: Optional[Sequence[Optional[SentenceBag]]] = None,
    unit_cap: int = DEFAULT_UNIT_CAP,
) -> SemanticGraph:
    """Sentence graph: shared-unit co-occurrence plus top-gamma% similarity edges.

    Co-occurrence weight for sentences sharing any unit is
    (shared phrases + shared words) / (log10|S_i| + log10|S_j|), with the
    denominator clamped to a small floor. The semantic channel keeps the
    top gamma% reciprocal-similarity pairs, ties broken by lower (i, j).
    """
    n = doc.n
    if n < 2:
        raise DegenerateGraphError(f"SSG needs >= 2 sentences, got {n}")
    if bags is None:
        bags = [bag_from_sentence(s, table, unit_cap) for s in doc.sentences]

    phrase_keys = [frozenset(u.key for u in s.units if u.kind == PHRASE) for s in doc.sentences]
    word_keys = [frozenset(u.key for u in s.units if u.kind == WORD) for s in doc.sentences]

    cooc: Dict[EdgeKey, float] = {}
    for i in range(n):
        for j in range(i + 1, n):
            p_ij = len(phrase_keys[i] & phrase_keys[j])
            v_ij = len(word_keys[i] & word_keys[j])
            if p_ij + v_ij == 0:
                continue
            si = doc.sentences[i].essential_count
            sj = doc.sentences[j].essential_count
            denom = max(math.log10(max(si, 1)) + math.log10(max(sj, 1)), LOG_DENOM_FLOOR)
            cooc[(i + 1, j + 1)] = (p_ij + v_ij) / denom

    sem: Dict[EdgeKey, float] = {}
    if not cfg.ablate_semantic_edges:
        sims = []
        for i in range(n):
            for j in range(i + 1, n):
                if bags[i] is None or bags[j] is None:
                    continue
                sims.append((sim_reciprocal(bags[i], bags[j], table), i + 1, j + 1))
        keep = math.ceil(cfg.gamma_pct / 100.0 * n * (n - 1) / 2)
        sims.sort(key=lambda t: (-t[0], t[1], t[2]))
        for value, i, j in sims[:keep]:
            sem[(i, j)] = value

    return _normalize_channels(SSG, list(range(1, n + 1)), cooc, sem)
