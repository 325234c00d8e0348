import pytest
from hypothesis import given
from hypothesis import strategies as st

from npkg.errors import DataError, ParseError
from npkg.graph import EdgeRecord, EvidenceRecord, EvidenceSource
from npkg.relations import INHIBITS, INTERACTS_WITH
from npkg.snapshot import escape, read_snapshot, unescape, write_snapshot
from tests.conftest import lit, make_graph


def sample_graph(registry):
    g = make_graph(registry, [("A:1", INHIBITS, "B:1", lit(2013)), ("A:1", INHIBITS, "B:1", lit(2017)),
                              ("B:1", INTERACTS_WITH, "C:1")])
    weird = EvidenceRecord(EvidenceSource.REACH, "REACH", "99", 2019, 0.25, "tab\there\nnewline \\ slash")
    g.add_edge(EdgeRecord.make("C:1", registry.get(INHIBITS), "A:1", weird))
    g.add_edge(EdgeRecord.make("A:1", registry.get(INHIBITS), "C:1", lit(2010), negated=True))
    return g.seal()


@given(st.text())
def test_escape_round_trip(text):
    assert unescape(escape(text)) == text
    assert "\t" not in escape(text) and "\n" not in escape(text)


def test_round_trip(tmp_path, registry, fixture_graph):
    for i, g in enumerate([sample_graph(registry), fixture_graph]):
        manifest = write_snapshot(g, tmp_path / str(i), config={"k": 1})
        back, m2 = read_snapshot(tmp_path / str(i))
        assert back == g and m2 == manifest
        assert back.negated_edge_count == g.negated_edge_count


def test_bytes_are_deterministic(tmp_path, registry):
    write_snapshot(sample_graph(registry), tmp_path / "a")
    write_snapshot(sample_graph(registry), tmp_path / "b")
    for name in ("nodes.tsv", "edges.tsv", "relations.tsv", "manifest.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_tampering_is_detected(tmp_path, registry):
    write_snapshot(sample_graph(registry), tmp_path)
    edges = (tmp_path / "edges.tsv").read_text().splitlines(keepends=True)
    (tmp_path / "edges.tsv").write_text("".join(edges[:-1]))
    with pytest.raises(DataError, match="manifest"):
        read_snapshot(tmp_path)


def test_registry_tampering_is_detected(tmp_path, registry):
    write_snapshot(sample_graph(registry), tmp_path)
    p = tmp_path / "relations.tsv"
    p.write_text(p.read_text().replace("inhibits", "blocks"))
    with pytest.raises(DataError, match="digest"):
        read_snapshot(tmp_path)


def test_bad_flag(tmp_path, registry):
    write_snapshot(sample_graph(registry), tmp_path)
    p = tmp_path / "edges.tsv"
    lines = p.read_text().splitlines(keepends=True)
    lines[1] = lines[1].replace("\tfalse\n", "\tmaybe\n")
    p.write_text("".join(lines))
    with pytest.raises(ParseError, match=":2:"):
        read_snapshot(tmp_path)


def test_missing_snapshot(tmp_path):
    with pytest.raises(DataError):
        read_snapshot(tmp_path / "none")
