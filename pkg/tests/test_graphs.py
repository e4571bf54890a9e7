import math

import pytest

from sentrank.distance import bag_from_sentence, sim_reciprocal
from sentrank.embeddings import cosine
from sentrank.errors import DegenerateGraphError
from sentrank.graphs import GraphConfig, build_spg, build_ssg, build_swg

from conftest import make_document, make_table


def enumerate_cooccurrence(streams, window):
    """Independent brute force: every in-sentence position pair at distance < window."""
    counts = {}
    for stream in streams:
        for i in range(len(stream)):
            for j in range(len(stream)):
                if i < j and j - i <= window - 1 and stream[i] != stream[j]:
                    key = tuple(sorted((stream[i], stream[j])))
                    counts[key] = counts.get(key, 0) + 1
    return counts


def enumerate_semantic(node_keys, table, threshold):
    pairs = {}
    embedded = [k for k in node_keys if k in table]
    for u in embedded:
        for v in embedded:
            if u < v:
                c = cosine(u, v, table)
                if c > threshold:
                    pairs[(u, v)] = c
    return pairs


@pytest.fixture
def word_table():
    return make_table(
        {
            "storm": (1.0, 0.1, 0.0),
            "hurrican": (0.95, 0.2, 0.0),  # cosine(storm) ~ 0.987
            "wind": (0.0, 1.0, 0.0),
            "coast": (0.0, 0.0, 1.0),
            "rain": (0.1, 0.9, 0.3),
            "storm_surg": (0.8, 0.3, 0.2),
        }
    )


def channel_sums(graph):
    return (
        sum(w.w_c for w in graph.edges.values()),
        sum(w.w_s for w in graph.edges.values()),
    )


def test_swg_single_edge_normalizes_to_one(word_table):
    doc = make_document([["wind", "coast", "wind"]])
    cfg = GraphConfig(ablate_semantic_edges=True)
    g = build_swg(doc, word_table, cfg)
    wt = g.weights("wind", "coast")
    assert wt.w_c == pytest.approx(1.0, abs=1e-9)
    assert wt.w_s == 0.0


def test_swg_pure_semantic_edge(word_table):
    # storm and hurrican never co-occur in-window but cosine > 0.65
    doc = make_document([["storm", "coast"], ["coast", "hurrican"]])
    g = build_swg(doc, word_table, GraphConfig())
    wt = g.weights("storm", "hurrican")
    assert wt is not None
    assert wt.w_c == 0.0
    assert wt.w_s == pytest.approx(1.0, abs=1e-9)


def test_swg_matches_enumeration_oracle(word_table):
    streams = [
        ["storm", "wind", "coast", "storm", "rain"],
        ["hurrican", "wind", "wind", "rain", "coast", "storm"],
        ["coast", "rain"],
    ]
    doc = make_document(streams)
    cfg = GraphConfig(window_swg=2, delta_swg=0.65)
    g = build_swg(doc, word_table, cfg)

    cooc = enumerate_cooccurrence(streams, 2)
    sem = enumerate_semantic(sorted({k for s in streams for k in s}), word_table, 0.65)
    total_c, total_s = sum(cooc.values()), sum(sem.values())

    assert set(g.edges) == set(cooc) | set(sem)
    for key, count in cooc.items():
        assert g.weights(*key).w_c == pytest.approx(count / total_c, abs=1e-12)
    for key, value in sem.items():
        assert g.weights(*key).w_s == pytest.approx(value / total_s, abs=1e-12)

    sums = channel_sums(g)
    assert sums[0] == pytest.approx(1.0, abs=1e-9)
    assert sums[1] == pytest.approx(1.0, abs=1e-9)


def test_spg_window_examples(word_table):
    stream = [["storm_surg", "wind", "coast"]]
    doc = make_document(stream)
    g3 = build_spg(doc, word_table, GraphConfig(window_spg=3, ablate_semantic_edges=True))
    assert set(g3.edges) == {
        ("storm_surg", "wind"), ("coast", "storm_surg"), ("coast", "wind"),
    }
    g2 = build_spg(doc, word_table, GraphConfig(window_spg=2, ablate_semantic_edges=True))
    assert set(g2.edges) == {("storm_surg", "wind"), ("coast", "wind")}


def test_spg_matches_enumeration_oracle(word_table):
    streams = [
        ["storm_surg", "wind", "coast", "rain"],
        ["storm", "storm_surg", "hurrican"],
    ]
    doc = make_document(streams)
    cfg = GraphConfig(window_spg=3, delta_spg=0.6)
    g = build_spg(doc, word_table, cfg)
    cooc = enumerate_cooccurrence(streams, 3)
    sem = enumerate_semantic(sorted({k for s in streams for k in s}), word_table, 0.6)
    assert set(g.edges) == set(cooc) | set(sem)


def test_degenerate_graph_raises(word_table):
    with pytest.raises(DegenerateGraphError):
        build_swg(make_document([["wind"]]), word_table, GraphConfig())


def test_ablate_semantic_edges_property(word_table):
    streams = [["storm", "wind", "hurrican", "coast"]]
    doc = make_document(streams)
    g = build_swg(doc, word_table, GraphConfig(ablate_semantic_edges=True))
    for wt in g.edges.values():
        assert wt.w_s == 0.0
        assert wt.w == wt.w_c


def test_ssg_cooccurrence_formula(word_table):
    # shared phrase + 2 shared words, |S_i|=|S_j|=10 -> initial w_c = 3/2
    keys_i = ["storm_surg", "wind", "coast"] + [f"ui{k}" for k in range(7)]
    keys_j = ["storm_surg", "wind", "coast"] + [f"uj{k}" for k in range(7)]
    doc = make_document([keys_i, keys_j])
    g = build_ssg(doc, word_table, GraphConfig(ablate_semantic_edges=True))
    # only one edge: normalized to 1; verify against the raw formula by adding a
    # second pair with a different raw weight
    assert g.weights(1, 2).w_c == pytest.approx(1.0, abs=1e-9)


def test_ssg_two_identical_sentences(word_table):
    doc = make_document([["wind", "coast"], ["wind", "coast"]])
    g = build_ssg(doc, word_table, GraphConfig())
    wt = g.weights(1, 2)
    assert wt.w_c == pytest.approx(1.0, abs=1e-9)
    assert wt.w_s == pytest.approx(1.0, abs=1e-9)
    assert wt.w == pytest.approx(2.0, abs=1e-9)


def test_ssg_raw_cooccurrence_ratio(word_table):
    # sentences 1-2 share 3 units; sentences 1-3 share 1; same lengths, so the
    # normalized weights keep the 3:1 ratio
    s1 = ["storm", "wind", "coast", "x1", "x2"]
    s2 = ["storm", "wind", "coast", "y1", "y2"]
    s3 = ["storm", "z1", "z2", "z3", "z4"]
    doc = make_document([s1, s2, s3])
    g = build_ssg(doc, word_table, GraphConfig(ablate_semantic_edges=True))
    w12 = g.weights(1, 2).w_c
    w13 = g.weights(1, 3).w_c
    assert w12 / w13 == pytest.approx(3.0, abs=1e-9)


def test_ssg_semantic_edges_top_gamma(word_table):
    # 10 sentences -> 45 pairs -> ceil(0.3*45) = 14 semantic edges
    vocab = ["storm", "hurrican", "wind", "coast", "rain"]
    unit_lists = [[vocab[i % 5], vocab[(i + 1) % 5]] for i in range(10)]
    doc = make_document(unit_lists)
    g = build_ssg(doc, word_table, GraphConfig(gamma_pct=30.0))
    sem_edges = {k for k, wt in g.edges.items() if wt.w_s > 0}
    assert len(sem_edges) == math.ceil(0.3 * 45)

    # oracle: sort all 45 pairwise similarities
    bags = [bag_from_sentence(s, word_table) for s in doc.sentences]
    sims = []
    for i in range(10):
        for j in range(i + 1, 10):
            sims.append((sim_reciprocal(bags[i], bags[j], word_table), i + 1, j + 1))
    sims.sort(key=lambda t: (-t[0], t[1], t[2]))
    expected = {(i, j) for _, i, j in sims[:14]}
    assert sem_edges == expected


def test_ssg_needs_two_sentences(word_table):
    with pytest.raises(DegenerateGraphError):
        build_ssg(make_document([["wind", "coast"]]), word_table, GraphConfig())


def test_dump_edges_format(word_table):
    doc = make_document([["wind", "coast", "rain"]])
    g = build_swg(doc, word_table, GraphConfig(ablate_semantic_edges=True))
    lines = g.dump_edges().splitlines()
    assert lines == sorted(lines)
    for line in lines:
        parts = line.split("\t")
        assert len(parts) == 5
        assert float(parts[4]) == pytest.approx(float(parts[2]) + float(parts[3]))
