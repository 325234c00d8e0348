"""Readers for node, edge and predication files, and literature-graph assembly.

Literature predications go through filter -> relation normalization ->
entity linking on both endpoints. Anything rejected along the way is counted
in the :class:`IngestionReport`, never silently lost.
"""
from __future__ import annotations

import csv
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Optional

from npkg.errors import DataError, DuplicateNode, ParseError, RelationNotRegistered
from npkg.graph import (
    Category,
    EdgeRecord,
    EvidenceRecord,
    EvidenceSource,
    KnowledgeGraph,
    NodeRecord,
    category_for_namespace,
    namespace_of,
)
from npkg.relations import Disposition, RelationMap, RelationRegistry

logger = logging.getLogger(__name__)

NODE_HEADER = ["id", "label", "namespace", "category"]
EDGE_HEADER = ["subject", "relation_id", "relation_label", "object",
               "source_name", "pmid", "year", "confidence", "sentence"]
ENTITY_MAP_HEADER = ["key", "mapped_id", "mapped_label"]

# source_name values that denote curated databases; anything else is ontology-derived
DATABASE_SOURCES = frozenset(s.casefold() for s in (
    "DIKB", "Drug Central", "DrugCentral", "FDA Drug Interaction database", "FDA",
    "CTD", "STRING", "STRING database", "Reactome", "Reactome Pathway Database",
    "UniProt", "DisGeNET", "GTEx", "GTEEx", "Human Protein Atlas", "HPA",
))

LITERATURE_SOURCE_NAMES = {EvidenceSource.SEMREP: "SemRep", EvidenceSource.REACH: "REACH"}


def _tsv_rows(path, header) -> Iterator[tuple[int, list[str]]]:
    path = Path(path)
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc.strerror}") from None
    with fh:
        reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
        first = next(reader, None)
        if first is None or [h.strip() for h in first] != header:
            raise ParseError(path, 1, "expected header " + "\\t".join(header))
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            yield lineno, row


def parse_node_file(path) -> list[NodeRecord]:
    seen: set[str] = set()
    nodes = []
    for lineno, row in _tsv_rows(path, NODE_HEADER):
        if len(row) != 4:
            raise ParseError(path, lineno, f"expected 4 columns, got {len(row)}")
        nid, label, ns, cat = (c.strip() for c in row)
        if nid in seen:
            raise DuplicateNode(nid, path, lineno)
        try:
            nodes.append(NodeRecord(nid, label, ns, Category(cat.upper())))
        except ValueError as exc:
            raise ParseError(path, lineno, str(exc)) from None
        seen.add(nid)
    return nodes


def source_for_name(source_name: str) -> EvidenceSource:
    if source_name.casefold() in DATABASE_SOURCES:
        return EvidenceSource.DATABASE
    return EvidenceSource.ONTOLOGY


def _opt_int(text, path, lineno, name):
    if not text:
        return None
    try:
        return int(text)
    except ValueError:
        raise ParseError(path, lineno, f"{name} must be an integer, got {text!r}") from None


def _opt_float(text, path, lineno, name):
    if not text:
        return None
    try:
        return float(text)
    except ValueError:
        raise ParseError(path, lineno, f"{name} must be a number, got {text!r}") from None


def parse_edge_file(path, registry: RelationRegistry) -> list[EdgeRecord]:
    """Ontology/database edges, one evidence record per row."""
    edges = []
    # bulk ontology rows repeat the same few relations and provenance cells
    relations: dict[tuple[str, str], object] = {}
    evidence: dict[tuple, EvidenceRecord] = {}
    for lineno, row in _tsv_rows(path, EDGE_HEADER):
        if len(row) != 9:
            raise ParseError(path, lineno, f"expected 9 columns, got {len(row)}")
        subj, rel_id, rel_label, obj, src_name, pmid, year, conf, sentence = [c.strip() for c in row]
        if not subj or not obj or not rel_id:
            raise ParseError(path, lineno, "subject, relation_id and object are required")
        relation = relations.get((rel_id, rel_label))
        if relation is None:
            try:
                relation = registry.get(rel_id)
            except RelationNotRegistered:
                raise RelationNotRegistered(rel_id, path, lineno) from None
            if rel_label and rel_label != relation.label:
                logger.debug("%s:%d: label %r differs from registered %r", path, lineno, rel_label, relation.label)
            relations[(rel_id, rel_label)] = relation
        cells = (src_name, pmid, year, conf, sentence)
        ev = evidence.get(cells)
        if ev is None:
            try:
                ev = EvidenceRecord(
                    source_for_name(src_name), src_name, pmid or None,
                    _opt_int(year, path, lineno, "year"),
                    _opt_float(conf, path, lineno, "confidence"),
                    sentence or None,
                )
            except ValueError as exc:
                raise ParseError(path, lineno, str(exc)) from None
            if len(evidence) < 100_000:
                evidence[cells] = ev
        edges.append(EdgeRecord(subj, relation, obj, (ev,)))
    return edges


@dataclass(frozen=True)
class Predication:
    subject_text: str
    relation_raw: str
    object_text: str
    source: EvidenceSource
    pmid: str
    year: int
    sentence: str
    subject_id: Optional[str] = None
    object_id: Optional[str] = None
    confidence: Optional[float] = None
    subject_semtype: Optional[str] = None
    object_semtype: Optional[str] = None

    def evidence(self) -> EvidenceRecord:
        return EvidenceRecord(self.source, LITERATURE_SOURCE_NAMES[self.source], self.pmid,
                              self.year, self.confidence, self.sentence)


_REQUIRED = ("subject_text", "relation_raw", "object_text", "source", "pmid", "year", "sentence")


def _predication_from_json(obj, path, lineno) -> Predication:
    if not isinstance(obj, dict):
        raise ParseError(path, lineno, "expected a JSON object")
    for name in _REQUIRED:
        value = obj.get(name)
        if value is None or (isinstance(value, str) and not value.strip()):
            raise ParseError(path, lineno, f"missing required field {name!r}")
    try:
        source = EvidenceSource(str(obj["source"]).upper())
    except ValueError:
        source = None
    if source not in LITERATURE_SOURCE_NAMES:
        raise ParseError(path, lineno, f"source must be SEMREP or REACH, got {obj['source']!r}")
    year = obj["year"]
    if isinstance(year, bool) or not isinstance(year, (int, str)):
        raise ParseError(path, lineno, f"year must be an integer, got {year!r}")
    year = _opt_int(str(year).strip(), path, lineno, "year")
    conf = obj.get("confidence")
    if conf is not None:
        if isinstance(conf, bool) or not isinstance(conf, (int, float)) or not 0.0 <= conf <= 1.0:
            raise ParseError(path, lineno, f"confidence must lie in [0, 1], got {conf!r}")
        conf = float(conf)
    opt = {k: (str(obj[k]).strip() or None) if obj.get(k) is not None else None
           for k in ("subject_id", "object_id", "subject_semtype", "object_semtype")}
    return Predication(
        subject_text=str(obj["subject_text"]).strip(),
        relation_raw=str(obj["relation_raw"]).strip(),
        object_text=str(obj["object_text"]).strip(),
        source=source,
        pmid=str(obj["pmid"]).strip(),
        year=year,
        sentence=str(obj["sentence"]),
        confidence=conf,
        **opt,
    )


def parse_predication_file(path) -> list[Predication]:
    path = Path(path)
    preds = []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc.strerror}") from None
    with fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, lineno, f"invalid JSON: {exc.msg}") from None
            preds.append(_predication_from_json(obj, path, lineno))
    return preds


def write_predication_file(preds: Iterable[Predication], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in preds:
            obj = {k: v for k, v in asdict(p).items() if v is not None}
            obj["source"] = p.source.value
            fh.write(json.dumps(obj, sort_keys=True) + "\n")


# -- entity linking -------------------------------------------------------------

@dataclass(frozen=True)
class EntityMapping:
    key: str
    mapped: str
    mapped_label: str


class EntityMap:
    """Curated mention -> CURIE table. Lookup ignores case and nothing else."""

    def __init__(self, mappings: Iterable[EntityMapping] = ()):
        self._by_key: dict[str, EntityMapping] = {}
        labels: dict[str, set[str]] = {}
        for m in mappings:
            k = m.key.casefold()
            prev = self._by_key.get(k)
            if prev is not None and prev.mapped != m.mapped:
                raise DataError(f"entity map key {m.key!r} maps to both {prev.mapped} and {m.mapped}")
            self._by_key[k] = m
            labels.setdefault(m.mapped, set()).add(m.mapped_label)
        self._labels = {cid: min(ls) for cid, ls in labels.items()}

    def __len__(self):
        return len(self._by_key)

    def lookup(self, mention: str) -> Optional[str]:
        hit = self._by_key.get(mention.strip().casefold())
        return hit.mapped if hit else None

    def label_for(self, curie: str) -> Optional[str]:
        return self._labels.get(curie)

    @classmethod
    def load(cls, path) -> "EntityMap":
        maps = []
        seen: dict[str, int] = {}
        for lineno, row in _tsv_rows(path, ENTITY_MAP_HEADER):
            if len(row) != 3:
                raise ParseError(path, lineno, f"expected 3 columns, got {len(row)}")
            key, mid, label = (c.strip() for c in row)
            if not key or not mid:
                raise ParseError(path, lineno, "key and mapped_id are required")
            if key.casefold() in seen:
                raise ParseError(path, lineno, f"duplicate key {key!r} (first on line {seen[key.casefold()]})")
            seen[key.casefold()] = lineno
            maps.append(EntityMapping(key, mid, label))
        return cls(maps)


def link_entity(mention: str, entity_map: EntityMap, pre_linked: Optional[str] = None) -> Optional[str]:
    """CURIE for a predication endpoint, or None when it cannot be linked."""
    if pre_linked:
        return pre_linked
    return entity_map.lookup(mention)


# -- filtering ----------------------------------------------------------------

FILTER_FILES = {
    "excluded_relations": "excluded_relations.txt",
    "excluded_semtypes": "excluded_semtypes.txt",
    "excluded_generics": "excluded_generics.txt",
}


@dataclass(frozen=True)
class FilterConfig:
    excluded_relations: frozenset = frozenset()
    excluded_semtypes: frozenset = frozenset()
    excluded_generic_concepts: frozenset = frozenset()
    min_confidence: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "excluded_relations",
                           frozenset(s.casefold() for s in self.excluded_relations))
        object.__setattr__(self, "excluded_generic_concepts",
                           frozenset(s.casefold() for s in self.excluded_generic_concepts))

    @classmethod
    def load(cls, path, min_confidence=None) -> "FilterConfig":
        """Either a directory holding the three list files, or one TSV of ``section<TAB>entry`` rows."""
        path = Path(path)
        sections: dict[str, set[str]] = {k: set() for k in FILTER_FILES}
        if path.is_dir():
            for section, fname in FILTER_FILES.items():
                f = path / fname
                if f.exists():
                    sections[section] = {ln.strip() for ln in f.read_text(encoding="utf-8").splitlines()
                                         if ln.strip() and not ln.startswith("#")}
        else:
            try:
                text = path.read_text(encoding="utf-8")
            except OSError as exc:
                raise DataError(f"cannot open {path}: {exc.strerror}") from None
            for lineno, line in enumerate(text.splitlines(), start=1):
                if not line.strip() or line.startswith("#"):
                    continue
                section, _, entry = line.partition("\t")
                if section.strip() not in sections or not entry.strip():
                    raise ParseError(path, lineno, "expected <section>\\t<entry>")
                sections[section.strip()].add(entry.strip())
        return cls(frozenset(sections["excluded_relations"]),
                   frozenset(sections["excluded_semtypes"]),
                   frozenset(sections["excluded_generics"]),
                   min_confidence)


class FilterResult(NamedTuple):
    accepted: bool
    reason: Optional[str] = None


ACCEPT = FilterResult(True)


def filter_predication(p: Predication, cfg: FilterConfig) -> FilterResult:
    if p.relation_raw.casefold() in cfg.excluded_relations:
        return FilterResult(False, "excluded-relation")
    if p.subject_semtype in cfg.excluded_semtypes or p.object_semtype in cfg.excluded_semtypes:
        return FilterResult(False, "excluded-semtype")
    generics = cfg.excluded_generic_concepts
    if p.subject_text.casefold() in generics or p.object_text.casefold() in generics:
        return FilterResult(False, "generic-concept")
    if cfg.min_confidence is not None and p.confidence is not None and p.confidence < cfg.min_confidence:
        return FilterResult(False, "low-confidence")
    return ACCEPT


# -- assembly -------------------------------------------------------------------

@dataclass
class IngestionReport:
    input: int = 0
    accepted: int = 0
    rejected_by_filter: int = 0
    dropped_unmapped: int = 0
    negated: int = 0
    deduplicated: int = 0
    reasons: dict = field(default_factory=dict)

    def reject(self, reason):
        self.rejected_by_filter += 1
        self.reasons[reason] = self.reasons.get(reason, 0) + 1

    def as_dict(self) -> dict:
        d = asdict(self)
        d["reasons"] = dict(sorted(self.reasons.items()))
        return d


def build_literature_graph(
    preds: Iterable[Predication],
    relation_map: RelationMap,
    entity_map: EntityMap,
    cfg: FilterConfig | None = None,
) -> tuple[KnowledgeGraph, IngestionReport]:
    cfg = cfg or FilterConfig()
    report = IngestionReport()
    accepted = []
    for p in preds:
        report.input += 1
        verdict = filter_predication(p, cfg)
        if not verdict.accepted:
            report.reject(verdict.reason)
            continue
        norm = relation_map.normalize(p.relation_raw, p.source)
        if norm.disposition is Disposition.EXCLUDE:
            report.reject("excluded-relation")
            continue
        subj = link_entity(p.subject_text, entity_map, p.subject_id)
        obj = link_entity(p.object_text, entity_map, p.object_id)
        if subj is None or obj is None:
            report.dropped_unmapped += 1
            continue
        report.accepted += 1
        negated = norm.disposition is Disposition.NEGATED
        report.negated += negated
        accepted.append((subj, obj, norm.relation, negated, p))

    # node labels are chosen from all mentions at once so input order cannot leak in
    mentions: dict[str, set[str]] = {}
    for subj, obj, _, _, p in accepted:
        mentions.setdefault(subj, set()).add(p.subject_text)
        mentions.setdefault(obj, set()).add(p.object_text)
    g = KnowledgeGraph(relation_map.registry)
    for cid in sorted(mentions):
        label = entity_map.label_for(cid) or min(mentions[cid])
        ns = namespace_of(cid)
        g.add_node(NodeRecord(cid, label, ns, category_for_namespace(ns)))

    for subj, obj, relation, negated, p in accepted:
        key = (subj, relation.id, obj)
        if g.get_edge(*key, negated=negated) is not None:
            report.deduplicated += 1
        g.add_edge(EdgeRecord(subj, relation, obj, (p.evidence(),), negated))
    return g, report


def build_ontology_graph(node_files, edge_files, registry: RelationRegistry, *, strict=False) -> KnowledgeGraph:
    g = KnowledgeGraph(registry, strict=strict)
    seen: dict[str, str] = {}
    for path in node_files:
        for node in parse_node_file(path):
            if node.id in seen:
                raise DuplicateNode(node.id, path)
            seen[node.id] = str(path)
            g.add_node(node)
    for path in edge_files:
        for edge in parse_edge_file(path, registry):
            g.add_edge(edge)
    return g
