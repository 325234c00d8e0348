import pytest

from npkg.data import fixture_dir
from npkg.graph import Category, EdgeRecord, EvidenceRecord, EvidenceSource, KnowledgeGraph, NodeRecord
from npkg.pipeline import RunConfig, build
from npkg.relations import RelationMap

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def relation_map():
    return RelationMap.default()


@pytest.fixture(scope="session")
def registry(relation_map):
    return relation_map.registry


@pytest.fixture(scope="session")
def fixture_config():
    return RunConfig.load(fixture_dir("npdi") / "config.json")


@pytest.fixture(scope="session")
def fixture_graph(fixture_config):
    g, _ = build(fixture_config)
    return g


def ev(year=None, source=EvidenceSource.ONTOLOGY, name="test ontology", pmid=None):
    if source in (EvidenceSource.SEMREP, EvidenceSource.REACH) and pmid is None:
        pmid = f"T{year}"
    return EvidenceRecord(source, name, pmid, year)


def lit(year, pmid=None):
    return ev(year, EvidenceSource.SEMREP, "SemRep", pmid)


def make_graph(registry, triples, nodes=(), strict=False):
    """Graph from (subject, relation_id, object[, evidence]) tuples."""
    g = KnowledgeGraph(registry, strict=strict)
    for nid in nodes:
        g.add_node(NodeRecord(nid, nid, nid.split(":")[0], Category.OTHER))
    for t in triples:
        s, r, o = t[:3]
        evidence = t[3] if len(t) > 3 else ev()
        g.add_edge(EdgeRecord.make(s, registry.get(r), o, evidence))
    return g
