"""Typed directed multigraph with per-edge evidence.

One logical edge exists per (subject, relation id, object, negated). Repeated
assertions of the same triple merge their evidence, so an edge annotated
"inhibits (2013, 2017)" is a single EdgeRecord carrying two EvidenceRecords.
Negated edges live in their own collection and are invisible to closure and
queries.
"""
from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from npkg.errors import (
    GraphSealed,
    NodeNotFound,
    RegistryMismatch,
    UndefinedChange,
    UnknownEndpoint,
)
from npkg.relations import RelationId, RelationRegistry


class Category(str, enum.Enum):
    CHEMICAL = "CHEMICAL"
    PROTEIN = "PROTEIN"
    GENE = "GENE"
    PATHWAY = "PATHWAY"
    DISEASE = "DISEASE"
    PHENOTYPE = "PHENOTYPE"
    ANATOMY = "ANATOMY"
    CELL = "CELL"
    PROCESS = "PROCESS"
    FUNCTION = "FUNCTION"
    OTHER = "OTHER"


_NAMESPACE_CATEGORIES = {
    "CHEBI": Category.CHEMICAL,
    "PR": Category.PROTEIN,
    "NCBIGENE": Category.GENE,
    "SO": Category.GENE,
    "PW": Category.PATHWAY,
    "REACT": Category.PATHWAY,
    "MONDO": Category.DISEASE,
    "DOID": Category.DISEASE,
    "HP": Category.PHENOTYPE,
    "UBERON": Category.ANATOMY,
    "CL": Category.CELL,
    "CLO": Category.CELL,
    "GO": Category.PROCESS,
}


def namespace_of(node_id: str) -> str:
    """Prefix of a CURIE. Accepts both ``CHEBI:23053`` and OBO-style ``PR_000006130``."""
    for sep in (":", "_"):
        prefix, found, local = node_id.partition(sep)
        if found and prefix and local:
            return prefix
    return ""


def category_for_namespace(namespace: str) -> Category:
    return _NAMESPACE_CATEGORIES.get(namespace.upper(), Category.OTHER)


@dataclass(frozen=True, slots=True)
class NodeRecord:
    id: str
    label: str = ""
    namespace: str = ""
    category: Category = Category.OTHER

    def __post_init__(self):
        if not self.id:
            raise ValueError("node id must be non-empty")
        prefix = namespace_of(self.id)
        if prefix and self.namespace != prefix:
            raise ValueError(f"namespace {self.namespace!r} does not match id prefix of {self.id!r}")

    @classmethod
    def placeholder(cls, node_id: str) -> "NodeRecord":
        ns = namespace_of(node_id)
        return cls(node_id, node_id, ns, Category.OTHER)


class EvidenceSource(str, enum.Enum):
    ONTOLOGY = "ONTOLOGY"
    DATABASE = "DATABASE"
    SEMREP = "SEMREP"
    REACH = "REACH"
    INFERRED = "INFERRED"


LITERATURE_SOURCES = frozenset({EvidenceSource.SEMREP, EvidenceSource.REACH})
CURATED_SOURCES = frozenset({EvidenceSource.ONTOLOGY, EvidenceSource.DATABASE})


@dataclass(frozen=True, slots=True)
class EvidenceRecord:
    """Provenance for one assertion of an edge.

    ``note`` carries audit text that is not part of the source record, e.g. the
    premises an inferred edge was derived from.
    """

    source: EvidenceSource
    source_name: str = ""
    pmid: Optional[str] = None
    year: Optional[int] = None
    confidence: Optional[float] = None
    sentence: Optional[str] = None
    note: Optional[str] = None

    def __post_init__(self):
        if self.source in LITERATURE_SOURCES and not self.pmid:
            raise ValueError(f"{self.source.value} evidence requires a pmid")
        if self.source is EvidenceSource.INFERRED and (self.pmid or self.sentence):
            raise ValueError("inferred evidence carries no pmid or sentence")
        if self.confidence is not None and not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")

    def sort_key(self):
        return (
            self.source.value,
            self.source_name,
            self.pmid or "",
            -1 if self.year is None else self.year,
            -1.0 if self.confidence is None else self.confidence,
            self.sentence or "",
            self.note or "",
        )

    def time_bound(self) -> float:
        """Earliest cutoff year at which this record counts as known.

        -inf means always known (undated curated data, or inference from
        undated premises); +inf means never (undated literature).
        """
        if self.year is not None:
            return float(self.year)
        if self.source in CURATED_SOURCES or self.source is EvidenceSource.INFERRED:
            return -math.inf
        return math.inf


EdgeKey = tuple  # (subject, relation id, object)


@dataclass(frozen=True, slots=True)
class EdgeRecord:
    subject: str
    relation: RelationId
    object: str
    evidence: tuple
    negated: bool = False

    def __post_init__(self):
        if not self.evidence:
            raise ValueError("an edge needs at least one evidence record")

    @property
    def key(self) -> EdgeKey:
        return (self.subject, self.relation.id, self.object)

    @property
    def inferred(self) -> bool:
        return all(ev.source is EvidenceSource.INFERRED for ev in self.evidence)

    def time_bound(self) -> float:
        return min(ev.time_bound() for ev in self.evidence)

    def years(self) -> list[int]:
        return sorted({ev.year for ev in self.evidence if ev.year is not None})

    def sort_key(self):
        return (self.subject, self.relation.id, self.object, self.negated)

    def with_evidence(self, evidence: Iterable[EvidenceRecord]) -> "EdgeRecord":
        return EdgeRecord(self.subject, self.relation, self.object,
                          canonical_evidence(evidence), self.negated)

    @classmethod
    def make(cls, subject, relation, obj, evidence, negated=False) -> "EdgeRecord":
        if isinstance(evidence, EvidenceRecord):
            evidence = (evidence,)
        return cls(subject, relation, obj, canonical_evidence(evidence), negated)


def canonical_evidence(evidence: Iterable[EvidenceRecord]) -> tuple:
    return tuple(sorted(set(evidence), key=EvidenceRecord.sort_key))


class KnowledgeGraph:
    """Mutable during the build phase; call :meth:`seal` before querying."""

    def __init__(self, registry: RelationRegistry, *, strict: bool = False):
        self.registry = registry
        self.strict = strict
        self.nodes: dict[str, NodeRecord] = {}
        self._edges: dict[EdgeKey, EdgeRecord] = {}
        self._negated: dict[EdgeKey, EdgeRecord] = {}
        self._out: dict[str, list] = {}
        self._in: dict[str, list] = {}
        self._sealed = False
        self._cache: dict = {}
        self._lock = threading.Lock()

    # -- build phase --------------------------------------------------------

    def _check_writable(self):
        if self._sealed:
            raise GraphSealed("graph is sealed; copy() it to modify")

    def add_node(self, node: NodeRecord) -> NodeRecord:
        """Insert ``node``; an existing record wins unless it is an auto-created placeholder."""
        self._check_writable()
        prev = self.nodes.get(node.id)
        if prev is None or (prev == NodeRecord.placeholder(node.id) and node != prev):
            self.nodes[node.id] = node
            return node
        return prev

    def _ensure_node(self, node_id: str):
        if node_id not in self.nodes:
            if self.strict:
                raise UnknownEndpoint(node_id)
            self.nodes[node_id] = NodeRecord.placeholder(node_id)

    def add_edge(self, edge: EdgeRecord) -> EdgeRecord:
        """Insert ``edge``, merging evidence into an existing edge with the same identity."""
        self._check_writable()
        if edge.relation not in self.registry:
            # unregistered id, or a registered id under a different label
            self.registry.get(edge.relation.id)
            edge = EdgeRecord(edge.subject, self.registry.get(edge.relation.id), edge.object,
                              edge.evidence, edge.negated)
        self._ensure_node(edge.subject)
        self._ensure_node(edge.object)
        key = edge.key
        store = self._negated if edge.negated else self._edges
        prev = store.get(key)
        if prev is None:
            store[key] = edge
            if not edge.negated:
                self._out.setdefault(edge.subject, []).append(key)
                self._in.setdefault(edge.object, []).append(key)
            return edge
        if set(edge.evidence) <= set(prev.evidence):
            return prev
        merged = prev.with_evidence(prev.evidence + edge.evidence)
        store[key] = merged
        return merged

    def seal(self) -> "KnowledgeGraph":
        self._sealed = True
        return self

    @property
    def sealed(self) -> bool:
        return self._sealed

    def copy(self) -> "KnowledgeGraph":
        """Unsealed copy sharing the immutable node and edge records."""
        g = KnowledgeGraph(self.registry, strict=self.strict)
        g.nodes = dict(self.nodes)
        g._edges = dict(self._edges)
        g._negated = dict(self._negated)
        g._out = {k: list(v) for k, v in self._out.items()}
        g._in = {k: list(v) for k, v in self._in.items()}
        return g

    # -- read access --------------------------------------------------------

    def has_node(self, node_id: str) -> bool:
        return node_id in self.nodes

    def node(self, node_id: str) -> NodeRecord:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise NodeNotFound(node_id) from None

    def require(self, *node_ids: str):
        for nid in node_ids:
            if nid not in self.nodes:
                raise NodeNotFound(nid)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def negated_edge_count(self) -> int:
        return len(self._negated)

    def edges(self) -> Iterator[EdgeRecord]:
        return iter(self._edges.values())

    def negated_edges(self) -> Iterator[EdgeRecord]:
        return iter(self._negated.values())

    def get_edge(self, subject, relation_id, obj, negated=False) -> Optional[EdgeRecord]:
        store = self._negated if negated else self._edges
        return store.get((subject, relation_id, obj))

    def out_edges(self, node_id: str) -> list[EdgeRecord]:
        return [self._edges[k] for k in self._out.get(node_id, ())]

    def in_edges(self, node_id: str) -> list[EdgeRecord]:
        return [self._edges[k] for k in self._in.get(node_id, ())]

    def edges_between(self, a: str, b: str) -> list[EdgeRecord]:
        """Non-negated edges a -> b, in canonical order."""
        out = self._out.get(a)
        inc = self._in.get(b)
        if not out or not inc:
            return []
        if len(out) > len(inc):
            keys = [k for k in inc if k[0] == a]
        else:
            keys = [k for k in out if k[2] == b]
        return sorted((self._edges[k] for k in keys), key=EdgeRecord.sort_key)

    def sorted_edges(self, negated=False) -> list[EdgeRecord]:
        store = self._negated if negated else self._edges
        return [store[k] for k in sorted(store)]

    def __eq__(self, other):
        if not isinstance(other, KnowledgeGraph):
            return NotImplemented
        return (self.registry == other.registry and self.nodes == other.nodes
                and self._edges == other._edges and self._negated == other._negated)

    def __repr__(self):
        return (f"KnowledgeGraph(nodes={self.node_count}, edges={self.edge_count}, "
                f"negated={self.negated_edge_count}, sealed={self._sealed})")

    def cached(self, key, build):
        """Memoize a derived read-only structure; safe under concurrent readers.

        Nothing is memoized before the graph is sealed.
        """
        if not self._sealed:
            return build()
        try:
            return self._cache[key]
        except KeyError:
            pass
        with self._lock:
            if key not in self._cache:
                self._cache[key] = build()
            return self._cache[key]


# -- statistics ---------------------------------------------------------------

@dataclass(frozen=True)
class GraphStats:
    node_count: int
    edge_count: int
    average_degree: float = field(init=False)
    node_density: float = field(init=False)

    def __post_init__(self):
        n, e = self.node_count, self.edge_count
        object.__setattr__(self, "average_degree", e / n if n > 0 else 0.0)
        object.__setattr__(self, "node_density", e / (n * (n - 1)) if n > 1 else 0.0)

    def as_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "average_degree": self.average_degree,
            "node_density": self.node_density,
        }


STAT_FIELDS = ("node_count", "edge_count", "average_degree", "node_density")


def compute_stats(g: KnowledgeGraph) -> GraphStats:
    """Counts over non-negated edges; average degree is E/N and density E/(N(N-1))."""
    return GraphStats(g.node_count, g.edge_count)


def percent_change(before: GraphStats, after: GraphStats) -> dict[str, float]:
    out = {}
    for name in STAT_FIELDS:
        b, a = getattr(before, name), getattr(after, name)
        if b == 0:
            raise UndefinedChange(f"{name} is zero in the baseline")
        out[name] = 100.0 * (a - b) / b
    return out


def merge_graphs(base: KnowledgeGraph, overlay: KnowledgeGraph, *, in_place: bool = False) -> KnowledgeGraph:
    """Union of two graphs; shared edges merge their evidence, base node records win.

    ``in_place`` adds into ``base`` itself instead of a copy (base must be unsealed).
    """
    if base.registry != overlay.registry:
        raise RegistryMismatch("graphs were built against different relation registries")
    out = base if in_place else base.copy()
    for nid in sorted(overlay.nodes):
        out.add_node(overlay.nodes[nid])
    for edge in overlay.sorted_edges():
        out.add_edge(edge)
    for edge in overlay.sorted_edges(negated=True):
        out.add_edge(edge)
    return out
