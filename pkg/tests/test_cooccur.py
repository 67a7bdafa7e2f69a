import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chancekit.cooccur import (
    CooccurrenceGraph,
    GraphConfig,
    build_graph,
    connected_components,
    cooccurrence,
    item_frequencies,
)
from chancekit.ingest import Event, EventStream
from chancekit.oracle import naive_cooccurrence

import synth


def stream_of(*baskets):
    return EventStream.from_events(Event(i, b if isinstance(b, dict) else dict.fromkeys(b, 1))
                                   for i, b in enumerate(baskets))


item = st.sampled_from(list("abcdefg"))
streams = st.lists(st.dictionaries(item, st.integers(1, 3), min_size=1, max_size=5), max_size=25).map(
    lambda bs: stream_of(*bs))


def test_frequencies():
    assert item_frequencies(stream_of("ab", "a")) == {"a": 2, "b": 1}
    assert item_frequencies(EventStream()) == {}


def test_min_rule():
    s = stream_of({"a": 2, "b": 1}, {"a": 1})
    assert cooccurrence(s, "a", "b") == 1


def test_same_item_is_an_error():
    with pytest.raises(ValueError):
        cooccurrence(stream_of("ab"), "a", "a")


def test_random_stream_matches_oracle():
    rng = np.random.default_rng(20)
    s = synth.random_stream(rng, max_events=20)
    s = EventStream(s.events[:20])
    table = naive_cooccurrence(s)
    vocab = sorted(s.vocabulary())
    for i, a in enumerate(vocab):
        for b in vocab[i + 1:]:
            assert cooccurrence(s, a, b) == table.get((a, b), 0)


@given(streams, item, item)
def test_symmetry_and_bound(s, a, b):
    if a == b:
        return
    co = cooccurrence(s, a, b)
    assert co == cooccurrence(s, b, a)
    freq = item_frequencies(s)
    assert co <= min(freq[a], freq[b])


def test_toy_graph():
    g = build_graph(synth.toy_corpus(), GraphConfig(top_nodes=4, top_edges=2))
    assert set(g.nodes) == {"a", "b", "d", "e"}
    assert g.edges == {("a", "b"): 4, ("d", "e"): 4}


def test_single_node():
    g = build_graph(synth.toy_corpus(), GraphConfig(top_nodes=1))
    assert len(g.nodes) == 1 and g.edges == {}


def test_fewer_items_than_n():
    g = build_graph(stream_of("ab"), GraphConfig(top_nodes=30))
    assert set(g.nodes) == {"a", "b"} and g.edges == {("a", "b"): 1}


def test_default_edge_budget():
    assert GraphConfig(top_nodes=30).edge_budget == 29
    with pytest.raises(ValueError):
        GraphConfig(top_nodes=0)
    with pytest.raises(ValueError):
        GraphConfig(top_edges=0)


def test_frequency_ties_are_lexicographic():
    g = build_graph(stream_of("zy", "ab"), GraphConfig(top_nodes=2, top_edges=1))
    assert set(g.nodes) == {"a", "b"}


def test_edge_ties_are_lexicographic():
    g = build_graph(stream_of("ab", "cd"), GraphConfig(top_nodes=4, top_edges=1))
    assert g.edges == {("a", "b"): 1}


@settings(max_examples=50)
@given(streams, st.integers(2, 4))
def test_duplication_keeps_nodes_and_edges(s, k):
    cfg = GraphConfig(top_nodes=4, top_edges=3)
    dup = EventStream.from_events([e for e in s for _ in range(k)])
    g1, gk = build_graph(s, cfg), build_graph(dup, cfg)
    assert set(g1.nodes) == set(gk.nodes)
    assert set(g1.edges) == set(gk.edges)


@settings(max_examples=50)
@given(streams)
def test_renaming_is_equivariant(s):
    # an order-preserving rename keeps every tie-break intact
    rename = {c: "n" + c for c in "abcdefg"}
    renamed = EventStream.from_events(Event(e.t, {rename[i]: m for i, m in e.items.items()}) for e in s)
    cfg = GraphConfig(top_nodes=4, top_edges=3)
    g, h = build_graph(s, cfg), build_graph(renamed, cfg)
    assert {rename[n]: f for n, f in g.nodes.items()} == h.nodes
    assert {(rename[a], rename[b]): w for (a, b), w in g.edges.items()} == h.edges


def test_components_examples():
    g = CooccurrenceGraph({"a": 2, "b": 2, "d": 1}, {("a", "b"): 1})
    assert connected_components(g) == [frozenset("ab"), frozenset("d")]
    edgeless = CooccurrenceGraph({"x": 1, "y": 1}, {})
    assert connected_components(edgeless) == [frozenset("x"), frozenset("y")]


@settings(max_examples=50)
@given(streams, st.integers(1, 7), st.integers(1, 10))
def test_components_partition(s, n, m):
    g = build_graph(s, GraphConfig(top_nodes=n, top_edges=m))
    comps = connected_components(g)
    assert set().union(*comps) == set(g.nodes) if comps else not g.nodes
    assert sum(len(c) for c in comps) == len(g.nodes)
    home = {x: i for i, c in enumerate(comps) for x in c}
    for a, b in g.edges:
        assert home[a] == home[b]
    for c in comps:
        # internally connected: a walk from one member reaches them all
        reach, stack = set(), [min(c)]
        while stack:
            x = stack.pop()
            if x not in reach:
                reach.add(x)
                stack.extend(g.neighbors(x))
        assert reach == set(c)


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        CooccurrenceGraph({"a": 1}, {("a", "a"): 1})
    with pytest.raises(ValueError):
        CooccurrenceGraph({"a": 1}, {("a", "b"): 1})
