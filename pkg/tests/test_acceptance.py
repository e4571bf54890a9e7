"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line on the real stdout so the result survives pytest capture.
"""

import math
import random
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from sentrank.centrality import (
    BiasVector,
    ScoreTable,
    pagerank_biased,
    pagerank_unbiased,
)
from sentrank.clustering import (
    affinity_propagation,
    choose_k,
    spectral_cluster,
)
from sentrank.distance import SentenceBag, wmd_exact, wmd_relaxed
from sentrank.embeddings import load_vectors
from sentrank.evaluation import evaluate_selection, load_corpus, rouge_n, rouge_su4
from sentrank.graphs import EdgeWeights, GraphConfig, SemanticGraph, build_spg, build_swg, build_ssg
from sentrank.pipeline import SentenceRanker
from sentrank.scoring import sentence_salience, softplus
from sentrank.selection import rank_sentences
from sentrank.clustering import ClusterAssignment
from sentrank.scoring import SalienceTable

from conftest import make_bag, make_document, make_sentence, make_table

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def report(capfd):
    """Emit one PASS/FAIL line per criterion on the real terminal."""

    def _report(num: int, desc: str, ok: bool) -> None:
        with capfd.disabled():
            print(f"{'PASS' if ok else 'FAIL'} criterion {num}: {desc}")
            sys.stdout.flush()
        assert ok, f"criterion {num} failed: {desc}"

    return _report


# ---------------------------------------------------------------------------
# 1. Softplus salience fixture values and the ordering flip
# ---------------------------------------------------------------------------

def test_criterion_1_salience_fixture(report):
    start = time.perf_counter()
    units = ["u1", "u2", "u3", "u4", "u5"]
    peaked = make_sentence(1, units)
    flat = make_sentence(2, units)
    tp = ScoreTable(dict(zip(units, (2.6, 2.2, 2.1, 0.3, 0.2))), 1, True)
    tf = ScoreTable(dict(zip(units, (1.6, 1.5, 1.5, 1.5, 1.4))), 1, True)

    sal_p = sentence_salience(peaked, tp, elevate=False)
    sal_f = sentence_salience(flat, tf, elevate=False)
    sp_p = sentence_salience(peaked, tp)
    sp_f = sentence_salience(flat, tf)
    elapsed = time.perf_counter() - start

    ok = (
        abs(sal_p - 1.48) <= 1e-6
        and abs(sal_f - 1.50) <= 1e-6
        and abs(sp_p - 1.768) <= 0.005
        and abs(sp_f - 1.702) <= 0.005
        and sal_p < sal_f
        and sp_p > sp_f
        and elapsed < 1.0
    )
    report(1, "salience fixture values and Softplus ordering flip", ok)


# ---------------------------------------------------------------------------
# 2. Power iteration vs dense linear solve on random graphs
# ---------------------------------------------------------------------------

def _random_graph(rng: random.Random):
    n = rng.randint(3, 50)
    nodes = [f"n{i}" for i in range(n)]
    edges = {}
    for i in range(1, n):  # spanning tree keeps every node connected
        j = rng.randrange(i)
        edges[(nodes[j], nodes[i])] = EdgeWeights(rng.uniform(0.1, 5.0), 0.0)
    for _ in range(n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            key = (nodes[min(i, j)], nodes[max(i, j)])
            edges[key] = EdgeWeights(rng.uniform(0.1, 5.0), 0.0)
    return SemanticGraph("test", nodes, edges)


def _dense_solve(g, d, bias=None):
    nodes = g.nodes
    n = len(nodes)
    index = {v: i for i, v in enumerate(nodes)}
    t = np.zeros((n, n))
    for j, vj in enumerate(nodes):
        neigh = g.neighbors(vj)
        total = sum(w for _, w in neigh)
        if total > 0:
            for vk, w in neigh:
                t[index[vk], j] += w / total
        elif n > 1:
            t[:, j] = 1.0 / (n - 1)
            t[j, j] = 0.0
    b = np.ones(n) if bias is None else np.array([bias.probs[v] for v in nodes])
    return dict(zip(nodes, np.linalg.solve(np.eye(n) - d * t, (1.0 - d) * b)))


def test_criterion_2_pagerank_oracle(report):
    start = time.perf_counter()
    rng = random.Random(20240819)
    ok = True
    for _ in range(25):
        g = _random_graph(rng)
        n = len(g.nodes)

        unb = pagerank_unbiased(g, tol=1e-13, max_iter=5000)
        expected = _dense_solve(g, 0.85)
        ok &= all(abs(unb.scores[v] - expected[v]) <= 1e-8 for v in g.nodes)
        ok &= abs(sum(unb.scores.values()) - n) <= 1e-6

        raw = [rng.uniform(0.01, 1.0) for _ in range(n)]
        total = sum(raw)
        bias = BiasVector({v: r / total for v, r in zip(g.nodes, raw)})
        b = pagerank_biased(g, bias, tol=1e-13, max_iter=5000)
        expected_b = _dense_solve(g, 0.85, bias)
        ok &= all(abs(b.scores[v] - expected_b[v]) <= 1e-8 for v in g.nodes)
        ok &= abs(sum(b.scores.values()) - 1.0) <= 1e-6
    ok &= (time.perf_counter() - start) < 10.0
    report(2, "power iteration matches dense solve on 25 random graphs", ok)


# ---------------------------------------------------------------------------
# 3. Relaxed WMD lower-bounds exact WMD
# ---------------------------------------------------------------------------

def _random_bag(rng: np.random.Generator, keys, max_units=4):
    size = int(rng.integers(1, max_units + 1))
    chosen = list(rng.choice(keys, size=size, replace=False))
    w = rng.uniform(0.1, 1.0, size=size)
    w = w / w.sum()
    w[-1] = 1.0 - float(w[:-1].sum())
    return SentenceBag(tuple(chosen), tuple(float(x) for x in w))


def test_criterion_3_relaxed_wmd_bound(report):
    start = time.perf_counter()
    rng = np.random.default_rng(20240820)
    keys = [f"w{i}" for i in range(9)]
    table = make_table({k: tuple(rng.normal(size=3)) for k in keys})

    ok = True
    for _ in range(110):
        a, b = _random_bag(rng, keys), _random_bag(rng, keys)
        ok &= wmd_relaxed(a, b, table) <= wmd_exact(a, b, table) + 1e-9
    for _ in range(30):
        a = _random_bag(rng, keys, max_units=1)
        b = _random_bag(rng, keys, max_units=1)
        ok &= abs(wmd_relaxed(a, b, table) - wmd_exact(a, b, table)) <= 1e-9
    ok &= (time.perf_counter() - start) < 10.0
    report(3, "relaxed WMD lower-bounds exact WMD on 140 random bag pairs", ok)


# ---------------------------------------------------------------------------
# 4. Graph construction vs brute-force enumeration
# ---------------------------------------------------------------------------

def _brute_cooccurrence(streams, window):
    counts = {}
    for stream in streams:
        for i in range(len(stream)):
            for j in range(i + 1, len(stream)):
                if j - i <= window - 1 and stream[i] != stream[j]:
                    key = tuple(sorted((stream[i], stream[j])))
                    counts[key] = counts.get(key, 0) + 1
    return counts


def test_criterion_4_graph_oracle(report):
    rng = np.random.default_rng(20240821)
    vocab = [f"g{i}" for i in range(14)]
    table = make_table({k: tuple(rng.normal(size=4)) for k in vocab})

    streams = [
        [vocab[int(rng.integers(len(vocab)))] for _ in range(int(rng.integers(3, 12)))]
        for _ in range(12)
    ]
    doc = make_document(streams)
    ok = True
    for builder, window in ((build_swg, 2), (build_spg, 3)):
        g = builder(doc, table, GraphConfig(ablate_semantic_edges=True))
        brute = _brute_cooccurrence(streams, window)
        total = sum(brute.values())
        ok &= set(g.edges) == set(brute)
        ok &= all(
            abs(g.weights(*k).w_c - v / total) <= 1e-12 for k, v in brute.items()
        )
        ok &= abs(sum(w.w_c for w in g.edges.values()) - 1.0) <= 1e-9

    # sentence graph: semantic edge set = the top 30% of all pairwise sims
    sem_doc = make_document(
        [[vocab[i % len(vocab)], vocab[(i + 3) % len(vocab)]] for i in range(10)]
    )
    ssg = build_ssg(sem_doc, table, GraphConfig(gamma_pct=30.0))
    sem_edges = {k for k, w in ssg.edges.items() if w.w_s > 0}
    ok &= len(sem_edges) == math.ceil(0.3 * 45)
    report(4, "graph edges match brute-force enumeration and top-30% rule", ok)


# ---------------------------------------------------------------------------
# 5. Clustering recovery fixtures
# ---------------------------------------------------------------------------

def test_criterion_5_clustering_oracles(report):
    table = make_table(
        {
            "a1": (10.0, 0.0, 0.0), "a2": (10.2, 0.1, 0.0),
            "b1": (0.0, 10.0, 0.0), "b2": (0.1, 10.1, 0.0),
            "c1": (0.0, 0.0, 10.0), "c2": (0.0, 0.1, 10.2),
        }
    )
    two = [make_bag({k: 1.0}) for k in ("a1", "a1", "a2", "b1", "b1", "b2")]
    three = [make_bag({k: 1.0}) for k in ("a1", "a2", "b1", "b2", "c1", "c2")]

    def groups(labels):
        out = {}
        for i, c in labels.items():
            out.setdefault(c, set()).add(i)
        return frozenset(frozenset(v) for v in out.values())

    two_expected = frozenset({frozenset({1, 2, 3}), frozenset({4, 5, 6})})
    three_expected = frozenset({frozenset({1, 2}), frozenset({3, 4}), frozenset({5, 6})})

    ok = groups(spectral_cluster(two, table, k=2).labels) == two_expected
    ok &= groups(spectral_cluster(three, table, k=3).labels) == three_expected
    ok &= groups(affinity_propagation(two, table).labels) == two_expected
    ok &= groups(affinity_propagation(three, table).labels) == three_expected
    ok &= affinity_propagation([make_bag({"a1": 1.0})], table).k == 1
    ok &= affinity_propagation([make_bag({"a1": 1.0})] * 6, table).k == 1
    ok &= choose_k(10) == 3 and choose_k(100) == 8
    report(5, "spectral and affinity-propagation recovery fixtures", ok)


# ---------------------------------------------------------------------------
# 6. Round-robin reference execution and ranking totality
# ---------------------------------------------------------------------------

def _reference_round_robin(f_s, labels):
    remaining = {c: [i for i in labels if labels[i] == c] for c in set(labels.values())}
    order = []
    while any(remaining.values()):
        bests = {
            c: min(m, key=lambda i: (-f_s[i], i)) for c, m in remaining.items() if m
        }
        for c in sorted(bests, key=lambda c: (-f_s[bests[c]], bests[c])):
            order.append(bests[c])
            remaining[c].remove(bests[c])
    return order


def test_criterion_6_round_robin_determinism(report):
    fixtures = [
        ({1: 0.9, 2: 0.8, 3: 0.85}, {1: 0, 2: 0, 3: 1}),
        ({1: 0.1, 2: 0.2, 3: 0.3, 4: 0.4}, {1: 0, 2: 1, 3: 0, 4: 1}),
        ({1: 1.0, 2: 1.0, 3: 1.0}, {1: 0, 2: 1, 3: 2}),
        ({1: 0.5, 2: 0.5, 3: 0.4, 4: 0.6, 5: 0.3}, {1: 0, 2: 0, 3: 1, 4: 1, 5: 2}),
        ({1: 2.0, 2: 0.1, 3: 0.2, 4: 0.3}, {1: 0, 2: 0, 3: 0, 4: 0}),
        ({1: 0.3, 2: 0.9, 3: 0.5, 4: 0.7, 5: 0.1, 6: 0.6},
         {1: 0, 2: 1, 3: 2, 4: 0, 5: 1, 6: 2}),
        ({1: 0.9, 2: 0.9, 3: 0.9, 4: 0.1}, {1: 0, 2: 0, 3: 0, 4: 1}),
        ({1: 0.0, 2: 0.0}, {1: 0, 2: 1}),
        ({1: 0.4, 2: 0.8, 3: 0.8, 4: 0.4}, {1: 0, 2: 0, 3: 1, 4: 1}),
        ({1: 0.7, 2: 0.6, 3: 0.5, 4: 0.4, 5: 0.3}, {1: 0, 2: 1, 3: 1, 4: 1, 5: 1}),
    ]
    ok = True
    for f_s, labels in fixtures:
        doc = make_document([[f"u{i}"] for i in f_s], raws=["x"] * len(f_s))
        sal = SalienceTable(sal={}, sal_sp=dict(f_s), w_sent=None, f_s=dict(f_s))
        cl = ClusterAssignment(labels=dict(labels), k=len(set(labels.values())))
        ok &= list(rank_sentences(sal, cl, doc).order) == _reference_round_robin(f_s, labels)

    # totality: 200 random full pipelines across every ablation combination
    table = load_vectors(FIXTURES / "ablation_vectors.txt")
    vocab = list(table.keys())
    rng = random.Random(20240822)
    combos = [
        [f for b, f in enumerate(("NSE", "NAS", "NSC", "NSP")) if r >> b & 1]
        for r in range(16)
    ]
    for trial in range(200):
        n = rng.randint(2, 8)
        sents = [
            "The " + " ".join(rng.sample(vocab, rng.randint(2, 5))) + "."
            for _ in range(n)
        ]
        ranker = SentenceRanker(
            embeddings=table,
            method=rng.choice(["ssr", "spr", "swr"]),
            ablations=combos[trial % 16],
        )
        ok &= sorted(ranker.rank(sents).order) == list(range(1, n + 1))
    report(6, "round-robin matches reference; 200 random pipelines rank totally", ok)


# ---------------------------------------------------------------------------
# 7. ROUGE hand counts and the trivial full-selection limit
# ---------------------------------------------------------------------------

def test_criterion_7_rouge_correctness(report):
    ok = abs(rouge_n("a b c", ["a b d"], 1) - 2 / 3) <= 1e-12
    ok &= abs(rouge_n("a b c", ["a b d"], 2) - 1 / 2) <= 1e-12
    ok &= rouge_n("x y", ["x y"], 1) == 1.0
    ok &= rouge_su4("one two three", ["one two three"]) == 1.0
    ok &= rouge_su4("a b", ["a"]) == 1.0

    corpus = load_corpus(FIXTURES / "ablation_corpus.jsonl")
    for doc in corpus:
        n = len(doc.sentences)
        result = evaluate_selection(doc, list(range(1, n + 1)), pct=100)
        ok &= result.r1 == result.r2 == result.rsu4 == 1.0
    report(7, "ROUGE hand counts exact; 100% selection scores 1.0 everywhere", ok)


# ---------------------------------------------------------------------------
# 8. Ablation directionality on the front-loaded fixture corpus
# ---------------------------------------------------------------------------

def _mean_r1(corpus, table, flags, pct):
    ranker = SentenceRanker(embeddings=table, method="swr", ablations=flags)
    total = 0.0
    for doc in corpus:
        order = ranker.rank_presplit(doc.sentences)
        total += evaluate_selection(doc, order, pct).r1
    return total / len(corpus)


def test_criterion_8_ablation_directionality(report):
    start = time.perf_counter()
    table = load_vectors(FIXTURES / "ablation_vectors.txt")
    corpus = load_corpus(FIXTURES / "ablation_corpus.jsonl")

    base_10 = _mean_r1(corpus, table, [], 10)
    nas_10 = _mean_r1(corpus, table, ["NAS"], 10)
    base_70 = _mean_r1(corpus, table, [], 70)
    nse_70 = _mean_r1(corpus, table, ["NSE"], 70)
    elapsed = time.perf_counter() - start

    ok = base_10 > nas_10 and base_70 > nse_70 and elapsed < 60.0
    report(
        8,
        f"structure bias helps at 10% ({base_10:.3f} > {nas_10:.3f}), "
        f"semantic edges at 70% ({base_70:.3f} > {nse_70:.3f})",
        ok,
    )


# ---------------------------------------------------------------------------
# 9. Quadratic complexity guard
# ---------------------------------------------------------------------------

def _timing_doc(table, n_sentences, rng):
    vocab = list(table.keys())
    return [
        "The " + " ".join(rng.sample(vocab, 5)) + "." for _ in range(n_sentences)
    ]


def test_criterion_9_complexity_guard(report):
    table = load_vectors(FIXTURES / "ablation_vectors.txt")
    rng = random.Random(20240823)
    short = _timing_doc(table, 60, rng)
    long = short + _timing_doc(table, 60, rng)

    def timed(sents, runs=5):
        ranker = SentenceRanker(embeddings=table)
        samples = []
        for _ in range(runs):
            t0 = time.perf_counter()
            ranker.rank(sents)
            samples.append(time.perf_counter() - t0)
        return sum(samples) / len(samples)

    timed(short, runs=1)  # warm caches before measuring
    timed(long, runs=1)
    t_short = timed(short)
    t_long = timed(long)
    ratio = t_long / t_short
    ok = ratio <= 4.5
    report(9, f"doubling the document scales wall time by {ratio:.2f}x (<= 4.5x)", ok)
