"""On-disk graph snapshots.

A snapshot is a directory::

    nodes.tsv       id, label, namespace, category
    edges.tsv       the edge-file columns plus source, note, inferred, negated;
                    one row per evidence record
    relations.tsv   the relation registry (relation_id, label)
    manifest.json   format version, registry and config digests, stats

Free-text cells escape backslash, tab, CR and LF so every record stays on one
line. Rows are sorted and nothing time-dependent is written, so identical
graphs produce byte-identical snapshots.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Optional

from npkg.errors import DataError, ParseError
from npkg.graph import (
    Category,
    EdgeRecord,
    EvidenceRecord,
    EvidenceSource,
    KnowledgeGraph,
    NodeRecord,
    compute_stats,
)
from npkg.ingest import EDGE_HEADER, NODE_HEADER
from npkg.relations import RelationId, RelationRegistry

FORMAT_VERSION = 1
SNAPSHOT_EDGE_HEADER = EDGE_HEADER + ["source", "note", "inferred", "negated"]
RELATIONS_HEADER = ["relation_id", "label"]

_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}


def escape(text: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in text)


def unescape(text: str) -> str:
    if "\\" not in text:
        return text
    out, it = [], iter(text)
    for ch in it:
        if ch == "\\":
            nxt = next(it, "")
            out.append(_UNESCAPES.get(nxt, "\\" + nxt))
        else:
            out.append(ch)
    return "".join(out)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return escape(str(value))


def _write_rows(path: Path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write("\t".join(_cell(v) for v in row) + "\n")


def _read_rows(path: Path, header):
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc.strerror}") from None
    with fh:
        first = fh.readline().rstrip("\r\n")
        if first.split("\t") != header:
            raise ParseError(path, 1, "expected header " + "\\t".join(header))
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\r\n")
            if not line:
                continue
            row = line.split("\t")
            if len(row) != len(header):
                raise ParseError(path, lineno, f"expected {len(header)} columns, got {len(row)}")
            yield lineno, [unescape(c) for c in row]


def config_digest(config: Optional[dict]) -> str:
    blob = json.dumps(config or {}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _edge_rows(edges):
    for e in edges:
        for ev in e.evidence:
            yield (e.subject, e.relation.id, e.relation.label, e.object,
                   ev.source_name, ev.pmid, ev.year, ev.confidence, ev.sentence,
                   ev.source.value, ev.note, e.inferred, e.negated)


def write_snapshot(g: KnowledgeGraph, out_dir, config: Optional[dict] = None,
                   extra: Optional[dict] = None) -> dict:
    """Write ``g`` to ``out_dir`` and return the manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_rows(out / "nodes.tsv", NODE_HEADER,
                ((n.id, n.label, n.namespace, n.category.value) for _, n in sorted(g.nodes.items())))
    edges = g.sorted_edges() + g.sorted_edges(negated=True)
    edges.sort(key=EdgeRecord.sort_key)
    _write_rows(out / "edges.tsv", SNAPSHOT_EDGE_HEADER, _edge_rows(edges))
    _write_rows(out / "relations.tsv", RELATIONS_HEADER, ((r.id, r.label) for r in sorted(g.registry)))
    manifest = {
        "format_version": FORMAT_VERSION,
        "registry_digest": g.registry.digest(),
        "config_digest": config_digest(config),
        "stats": compute_stats(g).as_dict(),
        "negated_edge_count": g.negated_edge_count,
        "inferred_edge_count": sum(1 for e in g.edges() if e.inferred),
    }
    if extra:
        manifest.update(extra)
    (out / "manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return manifest


def _flag(text, path, lineno, name) -> bool:
    if text not in ("true", "false"):
        raise ParseError(path, lineno, f"{name} must be true or false, got {text!r}")
    return text == "true"


def read_snapshot(snap_dir) -> tuple[KnowledgeGraph, dict]:
    """Load a snapshot as a sealed graph, checking it against its manifest."""
    d = Path(snap_dir)
    manifest_path = d / "manifest.json"
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataError(f"cannot open {manifest_path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(manifest_path, exc.lineno, exc.msg) from None
    if manifest.get("format_version") != FORMAT_VERSION:
        raise DataError(f"{manifest_path}: unsupported format_version {manifest.get('format_version')!r}")

    rel_path = d / "relations.tsv"
    try:
        registry = RelationRegistry(RelationId(r, label) for _, (r, label) in _read_rows(rel_path, RELATIONS_HEADER))
    except ValueError as exc:
        raise DataError(f"{rel_path}: {exc}") from None
    if registry.digest() != manifest.get("registry_digest"):
        raise DataError(f"{rel_path}: registry digest does not match manifest")

    g = KnowledgeGraph(registry, strict=True)
    nodes_path = d / "nodes.tsv"
    for lineno, (nid, label, ns, cat) in _read_rows(nodes_path, NODE_HEADER):
        try:
            g.add_node(NodeRecord(nid, label, ns, Category(cat)))
        except ValueError as exc:
            raise ParseError(nodes_path, lineno, str(exc)) from None

    edges_path = d / "edges.tsv"
    grouped: dict[tuple, list] = {}
    for lineno, row in _read_rows(edges_path, SNAPSHOT_EDGE_HEADER):
        subj, rel_id, _label, obj, src_name, pmid, year, conf, sentence, source, note, _inf, neg = row
        negated = _flag(neg, edges_path, lineno, "negated")
        try:
            ev = EvidenceRecord(EvidenceSource(source), src_name, pmid or None,
                                int(year) if year else None, float(conf) if conf else None,
                                sentence or None, note or None)
        except ValueError as exc:
            raise ParseError(edges_path, lineno, str(exc)) from None
        grouped.setdefault((subj, rel_id, obj, negated), []).append(ev)
    for (subj, rel_id, obj, negated), evidence in grouped.items():
        g.add_edge(EdgeRecord.make(subj, registry.get(rel_id), obj, evidence, negated))
    g.seal()

    if compute_stats(g).as_dict() != manifest.get("stats"):
        raise DataError(f"{d}: graph contents do not match manifest stats")
    return g, manifest
