import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from npkg.errors import (
    GraphSealed,
    NodeNotFound,
    RegistryMismatch,
    RelationNotRegistered,
    UndefinedChange,
    UnknownEndpoint,
)
from npkg.graph import (
    Category,
    EdgeRecord,
    EvidenceRecord,
    EvidenceSource,
    GraphStats,
    KnowledgeGraph,
    NodeRecord,
    compute_stats,
    merge_graphs,
    namespace_of,
    percent_change,
)
from npkg.relations import INHIBITS, INTERACTS_WITH, RelationId, RelationRegistry
from tests.conftest import ev, lit, make_graph


def test_namespace_from_curie_and_obo_style_ids():
    assert namespace_of("CHEBI:23053") == "CHEBI"
    assert namespace_of("PR_000006130") == "PR"


def test_node_namespace_must_match_id():
    with pytest.raises(ValueError):
        NodeRecord("CHEBI:1", "x", "PR", Category.CHEMICAL)


def test_literature_evidence_needs_pmid():
    with pytest.raises(ValueError):
        EvidenceRecord(EvidenceSource.SEMREP, "SemRep", None, 2010)


def test_inferred_evidence_has_no_sentence():
    with pytest.raises(ValueError):
        EvidenceRecord(EvidenceSource.INFERRED, "symmetric closure", sentence="x")


def test_confidence_range():
    with pytest.raises(ValueError):
        EvidenceRecord(EvidenceSource.ONTOLOGY, "o", confidence=1.5)


def test_time_bounds():
    assert ev(2001).time_bound() == 2001
    assert ev().time_bound() == -math.inf
    assert EvidenceRecord(EvidenceSource.SEMREP, "SemRep", "1").time_bound() == math.inf


def test_add_edge_merges_evidence(registry):
    g = make_graph(registry, [("A:1", INHIBITS, "B:1", lit(2013)), ("A:1", INHIBITS, "B:1", lit(2017))])
    assert g.edge_count == 1
    assert g.get_edge("A:1", INHIBITS, "B:1").years() == [2013, 2017]


def test_unregistered_relation_rejected(registry):
    g = KnowledgeGraph(registry)
    with pytest.raises(RelationNotRegistered):
        g.add_edge(EdgeRecord("A:1", RelationId("RO_9999999", "made up"), "B:1", (ev(),)))


def test_registered_id_with_wrong_label_is_canonicalized(registry):
    g = KnowledgeGraph(registry)
    e = g.add_edge(EdgeRecord("A:1", RelationId(INHIBITS, "blocks"), "B:1", (ev(),)))
    assert e.relation == registry.get(INHIBITS)


def test_strict_mode_requires_declared_endpoints(registry):
    g = KnowledgeGraph(registry, strict=True)
    with pytest.raises(UnknownEndpoint):
        g.add_edge(EdgeRecord.make("A:1", registry.get(INHIBITS), "B:1", ev()))


def test_lenient_mode_creates_placeholders_that_real_nodes_replace(registry):
    g = make_graph(registry, [("A:1", INHIBITS, "B:1")])
    assert g.node("A:1").category is Category.OTHER
    g.add_node(NodeRecord("A:1", "alpha", "A", Category.CHEMICAL))
    assert g.node("A:1").label == "alpha"
    g.add_node(NodeRecord("A:1", "other", "A", Category.CHEMICAL))
    assert g.node("A:1").label == "alpha"


def test_sealed_graph_rejects_writes(registry):
    g = make_graph(registry, [("A:1", INHIBITS, "B:1")]).seal()
    with pytest.raises(GraphSealed):
        g.add_node(NodeRecord("C:1", "c", "C", Category.OTHER))
    g2 = g.copy()
    g2.add_node(NodeRecord("C:1", "c", "C", Category.OTHER))
    assert g.node_count == 2 and g2.node_count == 3


def test_node_lookup_errors(registry):
    g = make_graph(registry, [])
    with pytest.raises(NodeNotFound):
        g.node("nope")


def test_negated_edges_are_stored_apart(registry):
    g = make_graph(registry, [("A:1", INHIBITS, "B:1")])
    g.add_edge(EdgeRecord.make("A:1", registry.get(INHIBITS), "B:1", lit(2015), negated=True))
    assert g.edge_count == 1 and g.negated_edge_count == 1
    assert g.out_edges("A:1") == [g.get_edge("A:1", INHIBITS, "B:1")]


def test_stats_formulas():
    s = GraphStats(745_250, 7_224_186)
    assert round(s.average_degree, 2) == 9.69
    assert s.node_density == pytest.approx(1.301e-5, abs=1e-8)
    assert GraphStats(1, 0).node_density == 0.0 and GraphStats(0, 0).average_degree == 0.0


def test_percent_change_identity_and_zero_baseline():
    s = GraphStats(10, 20)
    assert all(v == 0 for v in percent_change(s, s).values())
    with pytest.raises(UndefinedChange):
        percent_change(GraphStats(0, 0), s)


def test_merge_requires_same_registry(registry):
    other = RelationRegistry([RelationId(INHIBITS, "inhibits")])
    with pytest.raises(RegistryMismatch):
        merge_graphs(KnowledgeGraph(registry), KnowledgeGraph(other))


def test_merge_unions_edges(registry):
    a = make_graph(registry, [("A:1", INHIBITS, "B:1", lit(2010))])
    b = make_graph(registry, [("A:1", INHIBITS, "B:1", lit(2012)), ("B:1", INTERACTS_WITH, "C:1")])
    m = merge_graphs(a, b)
    assert m.edge_count == 2 and m.get_edge("A:1", INHIBITS, "B:1").years() == [2010, 2012]
    assert a.edge_count == 1


triples = st.lists(
    st.tuples(st.integers(0, 5), st.sampled_from([INHIBITS, INTERACTS_WITH]), st.integers(0, 5),
              st.integers(2000, 2003)),
    max_size=25,
)


@settings(max_examples=60, deadline=None)
@given(triples)
def test_adding_twice_equals_adding_once(registry, items):
    rows = [(f"N:{s}", r, f"N:{o}", lit(y)) for s, r, o, y in items]
    once = make_graph(registry, rows)
    twice = make_graph(registry, rows + rows)
    assert once == twice


@settings(max_examples=60, deadline=None)
@given(triples)
def test_out_and_in_indexes_agree(registry, items):
    g = make_graph(registry, [(f"N:{s}", r, f"N:{o}", lit(y)) for s, r, o, y in items])
    outs = sorted(e.key for n in g.nodes for e in g.out_edges(n))
    ins = sorted(e.key for n in g.nodes for e in g.in_edges(n))
    assert outs == ins == sorted(e.key for e in g.edges())
    assert compute_stats(g).edge_count == len(outs)
