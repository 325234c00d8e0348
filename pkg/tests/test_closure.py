import random

import pytest

from npkg.closure import ClosureConfig, apply_closure, count_inferred, inferred_by_relation
from npkg.errors import ParseError
from npkg.graph import EvidenceSource
from npkg.relations import INHIBITS, INTERACTS_WITH, PART_OF, POSITIVELY_REGULATES
from tests.conftest import lit, make_graph
from tests.oracles import matrix_closure


def keys(g, rel=None):
    return {e.key for e in g.edges() if rel is None or e.relation.id == rel}


def test_symmetric_pair_gains_reverse(registry):
    g = make_graph(registry, [("CHEBI:23053", INTERACTS_WITH, "X:nadolol", lit(2010))]).seal()
    c = apply_closure(g)
    inferred = [e for e in c.edges() if e.inferred]
    assert [e.key for e in inferred] == [("X:nadolol", INTERACTS_WITH, "CHEBI:23053")]
    (evidence,) = inferred[0].evidence
    assert evidence.source is EvidenceSource.INFERRED and evidence.source_name == "symmetric closure"
    assert evidence.year == 2010
    assert evidence.note == f"derived_from=CHEBI:23053|{INTERACTS_WITH}|X:nadolol"


def test_chain_derives_with_latest_premise_year(registry):
    g = make_graph(registry, [("A:1", PART_OF, "A:2", lit(2001)), ("A:2", PART_OF, "A:3", lit(2005)),
                              ("A:3", PART_OF, "A:4", lit(2003))])
    c = apply_closure(g)
    assert keys(c, PART_OF) - keys(g) == {("A:1", PART_OF, "A:3"), ("A:2", PART_OF, "A:4"),
                                          ("A:1", PART_OF, "A:4")}
    assert c.get_edge("A:1", PART_OF, "A:4").evidence[0].year == 2005


def test_undated_curated_premises_give_undated_inference(registry):
    g = make_graph(registry, [("A:1", PART_OF, "A:2"), ("A:2", PART_OF, "A:3")])
    e = apply_closure(g).get_edge("A:1", PART_OF, "A:3")
    assert e.evidence[0].year is None and e.time_bound() == float("-inf")


def test_witness_is_smallest_intermediate(registry):
    g = make_graph(registry, [("A:1", PART_OF, "A:3"), ("A:3", PART_OF, "A:9"),
                              ("A:1", PART_OF, "A:2"), ("A:2", PART_OF, "A:9")])
    note = apply_closure(g).get_edge("A:1", PART_OF, "A:9").evidence[0].note
    assert note == f"derived_from=A:1|{PART_OF}|A:2;A:2|{PART_OF}|A:9"


def test_existing_edges_untouched_and_other_relations_ignored(registry):
    g = make_graph(registry, [("A:1", PART_OF, "A:2"), ("A:2", PART_OF, "A:3"), ("A:1", PART_OF, "A:3"),
                              ("A:1", INHIBITS, "A:2"), ("A:2", INHIBITS, "A:3")])
    c = apply_closure(g)
    assert c.get_edge("A:1", PART_OF, "A:3") == g.get_edge("A:1", PART_OF, "A:3")
    assert count_inferred(c) == 0


def test_negated_edges_are_not_premises(registry):
    g = make_graph(registry, [("A:1", POSITIVELY_REGULATES, "A:2")])
    from npkg.graph import EdgeRecord
    g.add_edge(EdgeRecord.make("A:2", registry.get(POSITIVELY_REGULATES), "A:3", lit(2011), negated=True))
    c = apply_closure(g)
    assert count_inferred(c) == 0 and c.negated_edge_count == 1


def test_mixed_symmetric_transitive_relation(registry):
    cfg = ClosureConfig(frozenset({PART_OF}), frozenset({PART_OF}))
    g = make_graph(registry, [("A:1", PART_OF, "A:2"), ("A:2", PART_OF, "A:3")])
    c = apply_closure(g, cfg)
    nodes = ["A:1", "A:2", "A:3"]
    assert keys(c, PART_OF) == {(a, PART_OF, b) for a in nodes for b in nodes}


def test_config_file(tmp_path):
    p = tmp_path / "c.tsv"
    p.write_text("relation_id\trule\nRO_0002434\tsymmetric\nBFO_0000050\tTRANSITIVE\n")
    cfg = ClosureConfig.load(p)
    assert cfg.symmetric_relations == {INTERACTS_WITH} and cfg.transitive_relations == {PART_OF}
    p.write_text("relation_id\trule\nRO_0002434\treflexive\n")
    with pytest.raises(ParseError):
        ClosureConfig.load(p)


def test_inferred_counts(registry):
    g = make_graph(registry, [("A:1", INTERACTS_WITH, "A:2"), ("A:1", PART_OF, "A:2"), ("A:2", PART_OF, "A:3")])
    c = apply_closure(g)
    assert inferred_by_relation(c) == {PART_OF: 1, INTERACTS_WITH: 1}


@pytest.mark.parametrize("seed", range(40))
def test_matches_matrix_oracle(registry, seed):
    rnd = random.Random(seed)
    n = rnd.randint(1, 8)
    cfg = ClosureConfig(frozenset({INTERACTS_WITH, PART_OF}), frozenset({PART_OF, POSITIVELY_REGULATES}))
    rels = [INTERACTS_WITH, PART_OF, POSITIVELY_REGULATES, INHIBITS]
    rows = [(f"N:{rnd.randrange(n)}", rnd.choice(rels), f"N:{rnd.randrange(n)}", lit(rnd.randint(1990, 2020)))
            for _ in range(rnd.randint(0, 14))]
    g = make_graph(registry, rows)
    c = apply_closure(g, cfg)
    for rel in rels:
        pairs = [(int(s[2:]), int(o[2:])) for s, r, o in keys(g, rel)]
        expect = matrix_closure(pairs, n, rel in cfg.symmetric_relations, rel in cfg.transitive_relations)
        assert keys(c, rel) == {(f"N:{a}", rel, f"N:{b}") for a, b in expect}
    assert apply_closure(c, cfg) == c
