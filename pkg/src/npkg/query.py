"""Hypothesis queries over a sealed graph.

All queries ignore negated edges. Among equal-length shortest paths the one
with the lexicographically smallest node-id sequence is returned.
"""
from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from npkg import kernels
from npkg.errors import DataError, ParseError
from npkg.graph import EdgeRecord, KnowledgeGraph
from npkg.index import adjacency, graph_index, qualifies
from npkg import relations as R


def _edge_json(e: EdgeRecord) -> dict:
    return {
        "subject": e.subject,
        "relation_id": e.relation.id,
        "relation_label": e.relation.label,
        "object": e.object,
        "inferred": e.inferred,
        "evidence": [
            {k: v for k, v in (
                ("source", ev.source.value), ("source_name", ev.source_name), ("pmid", ev.pmid),
                ("year", ev.year), ("confidence", ev.confidence), ("sentence", ev.sentence),
                ("note", ev.note)) if v not in (None, "")}
            for ev in e.evidence
        ],
    }


edge_to_json = _edge_json


def direct_edges(g: KnowledgeGraph, a: str, b: str, directed: bool = True,
                 year_cutoff: Optional[int] = None) -> list[EdgeRecord]:
    g.require(a, b)
    found = g.edges_between(a, b)
    if not directed and a != b:
        found = found + g.edges_between(b, a)
    return [e for e in found if qualifies(e, year_cutoff)]


# -- shortest paths ---------------------------------------------------------------

@dataclass(frozen=True)
class PathResult:
    nodes: tuple
    steps: tuple  # per hop, every qualifying parallel edge between the two nodes

    @property
    def length(self) -> int:
        return len(self.nodes) - 1

    @property
    def edges(self) -> tuple:
        """One representative edge per hop (the first in canonical order)."""
        return tuple(step[0] for step in self.steps)

    def as_dict(self) -> dict:
        return {
            "length": self.length,
            "nodes": list(self.nodes),
            "steps": [[_edge_json(e) for e in step] for step in self.steps],
        }


def _layered_path(adj, s, t):
    """Single-direction variant of the kernel's reconstruction, used as a cross-check."""
    dist = kernels.bfs_distances(adj.bptr, adj.bidx, t)
    length = int(dist[s])
    if length < 0:
        return np.empty(0, dtype=np.int64)
    path = [s]
    u = s
    for i in range(length):
        nbrs = adj.fidx[adj.fptr[u]:adj.fptr[u + 1]]
        # on-path successors are exactly those one hop closer to the target
        u = int(nbrs[np.argmax(dist[nbrs] == length - i - 1)])
        path.append(u)
    return np.asarray(path, dtype=np.int64)


def shortest_path(g: KnowledgeGraph, src: str, dst: str, directed: bool = True,
                  year_cutoff: Optional[int] = None, method: str = "bidirectional") -> Optional[PathResult]:
    """Minimum-hop path from ``src`` to ``dst``, or None when unreachable.

    Among equal-length paths the smallest node-id sequence wins.
    """
    g.require(src, dst)
    if src == dst:
        return PathResult((src,), ())
    idx = graph_index(g)
    adj = adjacency(g, directed, year_cutoff)
    s, t = idx.pos[src], idx.pos[dst]
    if method == "bidirectional":
        path = kernels.shortest_path_nodes(adj.fptr, adj.fidx, adj.bptr, adj.bidx, s, t)
    elif method == "bfs":
        path = _layered_path(adj, s, t)
    else:
        raise ValueError(f"unknown search method {method!r}")
    if not len(path):
        return None
    nodes = tuple(idx.ids[i] for i in path.tolist())
    steps = tuple(tuple(direct_edges(g, a, b, directed, year_cutoff)) for a, b in zip(nodes, nodes[1:]))
    return PathResult(nodes, steps)


def shortest_path_length(g, src, dst, directed=True, year_cutoff=None, method="bidirectional") -> int:
    """Hop count, -1 when unreachable."""
    g.require(src, dst)
    if src == dst:
        return 0
    idx = graph_index(g)
    adj = adjacency(g, directed, year_cutoff)
    s, t = idx.pos[src], idx.pos[dst]
    if method == "bfs":
        return int(kernels.bfs_distances(adj.fptr, adj.fidx, s)[t])
    return kernels.bidirectional_bfs(adj.fptr, adj.fidx, adj.bptr, adj.bidx, s, t)[0]


# -- meta-paths -------------------------------------------------------------------

class Shape(str, enum.Enum):
    NP_TO_DRUG_DIRECT = "NP_TO_DRUG_DIRECT"
    DRUG_TO_NP_DIRECT = "DRUG_TO_NP_DIRECT"
    NP_VIA_TARGET_TO_DRUG = "NP_VIA_TARGET_TO_DRUG"
    CONVERGENT_TARGET = "CONVERGENT_TARGET"


class TargetKind(str, enum.Enum):
    ENZYME = "ENZYME"
    TRANSPORTER = "TRANSPORTER"


DEFAULT_WHITELIST = frozenset({
    R.INTERACTS_WITH, R.MOLECULARLY_INTERACTS_WITH, R.CORRELATED_WITH,
    R.DIRECTLY_REGULATES_ACTIVITY_OF, R.POSITIVELY_REGULATES, R.INHIBITS,
    R.CAPABLE_OF_REGULATING, R.CAPABLE_OF_POSITIVELY_REGULATING,
    R.IS_SUBSTRATE_OF, R.TRANSPORTS, R.REGULATES_ACTIVITY_OF,
})


@dataclass(frozen=True)
class MetaPathTemplate:
    """One search shape. ``slot_a``/``slot_b`` narrow the first/second hop
    below the shared whitelist when set."""

    shape: Shape
    relation_whitelist: frozenset = DEFAULT_WHITELIST
    slot_a: Optional[frozenset] = None
    slot_b: Optional[frozenset] = None

    def allowed_a(self) -> frozenset:
        return self.relation_whitelist if self.slot_a is None else self.relation_whitelist & self.slot_a

    def allowed_b(self) -> frozenset:
        return self.relation_whitelist if self.slot_b is None else self.relation_whitelist & self.slot_b


def default_templates(whitelist: frozenset = DEFAULT_WHITELIST) -> list[MetaPathTemplate]:
    return [MetaPathTemplate(shape, whitelist) for shape in Shape]


@dataclass(frozen=True)
class TargetSet:
    enzymes: frozenset = frozenset()
    transporters: frozenset = frozenset()

    def kinds(self, node_id: str) -> list[TargetKind]:
        out = []
        if node_id in self.enzymes:
            out.append(TargetKind.ENZYME)
        if node_id in self.transporters:
            out.append(TargetKind.TRANSPORTER)
        return out

    def __contains__(self, node_id):
        return node_id in self.enzymes or node_id in self.transporters

    @classmethod
    def load(cls, path) -> "TargetSet":
        enz, trans = set(), set()
        try:
            fh = open(path, encoding="utf-8", newline="")
        except OSError as exc:
            raise DataError(f"cannot open {path}: {exc.strerror}") from None
        with fh:
            reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["node_id", "kind"]:
                raise ParseError(path, 1, "expected header node_id<TAB>kind")
            for lineno, row in enumerate(reader, start=2):
                if not row or not "".join(row).strip():
                    continue
                if len(row) != 2:
                    raise ParseError(path, lineno, f"expected 2 columns, got {len(row)}")
                nid, kind = row[0].strip(), row[1].strip().upper()
                if kind == TargetKind.ENZYME:
                    enz.add(nid)
                elif kind == TargetKind.TRANSPORTER:
                    trans.add(nid)
                else:
                    raise ParseError(path, lineno, f"kind must be ENZYME or TRANSPORTER, got {row[1]!r}")
        return cls(frozenset(enz), frozenset(trans))


@dataclass(frozen=True)
class MetaPathHit:
    shape: Shape
    np_node: str
    target: Optional[str]
    kind: Optional[TargetKind]
    edges: tuple

    def as_dict(self) -> dict:
        return {
            "shape": self.shape.value,
            "np_node": self.np_node,
            "target": self.target,
            "kind": self.kind.value if self.kind else None,
            "edges": [_edge_json(e) for e in self.edges],
        }


@dataclass
class MetaPathResult:
    np_nodes: tuple
    drug: str
    hits: list = field(default_factory=list)

    def targets(self, kind: TargetKind) -> set[str]:
        return {h.target for h in self.hits if h.kind is kind}

    @property
    def enzymes(self) -> set[str]:
        return self.targets(TargetKind.ENZYME)

    @property
    def transporters(self) -> set[str]:
        return self.targets(TargetKind.TRANSPORTER)

    def as_dict(self) -> dict:
        grouped = {"direct": [], TargetKind.ENZYME.value: [], TargetKind.TRANSPORTER.value: []}
        for h in self.hits:
            grouped[h.kind.value if h.kind else "direct"].append(h.as_dict())
        return {
            "np_nodes": list(self.np_nodes),
            "drug": self.drug,
            "enzymes": sorted(self.enzymes),
            "transporters": sorted(self.transporters),
            "hits": grouped,
        }


def _hop(g, a, b, allowed, directed, year_cutoff):
    return [e for e in direct_edges(g, a, b, directed, year_cutoff) if e.relation.id in allowed]


def _neighbors(g, node, directed):
    out = {e.object for e in g.out_edges(node)}
    if not directed:
        out |= {e.subject for e in g.in_edges(node)}
    out.discard(node)
    return sorted(out)


def find_metapaths(g: KnowledgeGraph, np_nodes: Iterable[str], drug: str,
                   targets: TargetSet, templates: Optional[list] = None,
                   directed: bool = True, year_cutoff: Optional[int] = None) -> MetaPathResult:
    np_nodes = tuple(sorted(set(np_nodes)))
    g.require(*np_nodes, drug)
    templates = default_templates() if templates is None else templates
    result = MetaPathResult(np_nodes, drug)
    for tpl in templates:
        a_ok, b_ok = tpl.allowed_a(), tpl.allowed_b()
        for np_node in np_nodes:
            if np_node == drug:
                continue
            if tpl.shape is Shape.NP_TO_DRUG_DIRECT:
                edges = _hop(g, np_node, drug, a_ok, directed, year_cutoff)
                if edges:
                    result.hits.append(MetaPathHit(tpl.shape, np_node, None, None, tuple(edges)))
            elif tpl.shape is Shape.DRUG_TO_NP_DIRECT:
                edges = _hop(g, drug, np_node, a_ok, directed, year_cutoff)
                if edges:
                    result.hits.append(MetaPathHit(tpl.shape, np_node, None, None, tuple(edges)))
            else:
                for target in _neighbors(g, np_node, directed):
                    if target == drug or target not in targets:
                        continue
                    first = _hop(g, np_node, target, a_ok, directed, year_cutoff)
                    if not first:
                        continue
                    if tpl.shape is Shape.NP_VIA_TARGET_TO_DRUG:
                        second = _hop(g, target, drug, b_ok, directed, year_cutoff)
                    else:
                        second = _hop(g, drug, target, b_ok, directed, year_cutoff)
                    if not second:
                        continue
                    for kind in targets.kinds(target):
                        result.hits.append(MetaPathHit(tpl.shape, np_node, target, kind,
                                                       tuple(first + second)))
    return result


# -- time slicing -----------------------------------------------------------------

def time_slice(g: KnowledgeGraph, year_cutoff: int) -> KnowledgeGraph:
    """Sealed graph holding the edges known by ``year_cutoff``.

    An edge stays when any evidence record is dated at or before the cutoff,
    or is undated curated data. All nodes are kept.
    """
    out = KnowledgeGraph(g.registry, strict=g.strict)
    out.nodes = dict(g.nodes)
    for e in g.sorted_edges():
        if qualifies(e, year_cutoff):
            out.add_edge(e)
    for e in g.sorted_edges(negated=True):
        if qualifies(e, year_cutoff):
            out.add_edge(e)
    return out.seal()
