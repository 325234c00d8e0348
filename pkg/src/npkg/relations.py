"""Relation registry and the raw-relation normalization map.

The registry is closed: every edge relation must be one of the (id, label)
pairs declared by the relation-map file. Extraction systems emit raw relation
strings ("stimulates", "activation", "neg_inhibits"); the map turns those into
registered relations together with a disposition telling ingestion whether to
keep, negate, or drop the predication.
"""
from __future__ import annotations

import csv
import enum
import hashlib
import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Optional

from npkg.errors import DataError, ParseError, RelationNotRegistered

logger = logging.getLogger(__name__)

# Relation identifiers used by the embedded defaults (closure rules, polarity
# table, meta-path whitelist).
INTERACTS_WITH = "RO_0002434"
MOLECULARLY_INTERACTS_WITH = "RO_0002436"
CORRELATED_WITH = "RO_0002610"
DIRECTLY_REGULATES_ACTIVITY_OF = "RO_0002448"
REGULATES_ACTIVITY_OF = "RO_0011002"
POSITIVELY_REGULATES = "RO_0002213"
NEGATIVELY_REGULATES = "RO_0002212"
INHIBITS = "RO_0002449"
CAPABLE_OF_REGULATING = "RO_0002596"
CAPABLE_OF_POSITIVELY_REGULATING = "RO_0002598"
DIRECTLY_POSITIVELY_REGULATES_QUANTITY_OF = "RO_0011009"
DIRECTLY_NEGATIVELY_REGULATES_QUANTITY_OF = "RO_0011010"
IS_SUBSTRATE_OF = "NPKG:is_substrate_of"
TRANSPORTS = "RO_0002313"
PART_OF = "BFO_0000050"
PRECEDES = "BFO_0000063"

RELATION_MAP_HEADER = ["raw", "source", "mapped_id", "mapped_label", "disposition"]


@dataclass(frozen=True, order=True)
class RelationId:
    id: str
    label: str

    def __str__(self):
        return f"{self.label} ({self.id})"


class MappingSource(str, enum.Enum):
    SEMREP = "SEMREP"
    REACH = "REACH"
    ANY = "ANY"


class Disposition(str, enum.Enum):
    KEEP = "KEEP"
    NEGATED = "NEGATED"
    EXCLUDE = "EXCLUDE"


@dataclass(frozen=True)
class RelationMapping:
    raw: str
    source: MappingSource
    mapped: Optional[RelationId]
    disposition: Disposition

    def __post_init__(self):
        if self.disposition is Disposition.NEGATED and not self.raw.startswith("neg_"):
            raise ValueError(f"NEGATED disposition requires a 'neg_' relation, got {self.raw!r}")
        if self.disposition is not Disposition.EXCLUDE and self.mapped is None:
            raise ValueError(f"{self.raw!r}: KEEP/NEGATED mappings need a mapped relation")


class NormalizedRelation(NamedTuple):
    disposition: Disposition
    relation: Optional[RelationId]


class RelationRegistry:
    """Closed set of relations, indexed by id."""

    def __init__(self, relations: Iterable[RelationId]):
        by_id: dict[str, RelationId] = {}
        for rel in relations:
            prev = by_id.get(rel.id)
            if prev is not None and prev.label != rel.label:
                raise ValueError(
                    f"relation {rel.id} registered with two labels: {prev.label!r} and {rel.label!r}"
                )
            by_id[rel.id] = rel
        self._by_id = dict(sorted(by_id.items()))

    def __contains__(self, relation_id) -> bool:
        if type(relation_id) is str:
            return relation_id in self._by_id
        reg = self._by_id.get(getattr(relation_id, "id", None))
        return reg is relation_id or reg == relation_id

    def __iter__(self) -> Iterator[RelationId]:
        return iter(self._by_id.values())

    def __len__(self):
        return len(self._by_id)

    def __eq__(self, other):
        if not isinstance(other, RelationRegistry):
            return NotImplemented
        return self._by_id == other._by_id

    def __hash__(self):
        return hash(tuple(self._by_id.values()))

    def get(self, relation_id: str) -> RelationId:
        try:
            return self._by_id[relation_id]
        except KeyError:
            raise RelationNotRegistered(relation_id) from None

    def ids(self) -> list[str]:
        return list(self._by_id)

    def digest(self) -> str:
        h = hashlib.sha256()
        for rel in self._by_id.values():
            h.update(f"{rel.id}\t{rel.label}\n".encode())
        return h.hexdigest()


class RelationMap:
    """Lookup table from (raw relation, extraction source) to a disposition.

    The registry of the whole build is the set of relations this map names.
    """

    def __init__(self, mappings: Iterable[RelationMapping]):
        self._table: dict[tuple[str, MappingSource], RelationMapping] = {}
        for m in mappings:
            key = (m.raw.casefold(), m.source)
            if key in self._table:
                raise ValueError(f"duplicate relation mapping for {m.raw!r} / {m.source.value}")
            self._table[key] = m
        self.registry = RelationRegistry(m.mapped for m in self._table.values() if m.mapped is not None)
        self._warned: set[tuple[str, str]] = set()

    def __iter__(self) -> Iterator[RelationMapping]:
        return iter(self._table.values())

    def __len__(self):
        return len(self._table)

    def lookup(self, raw: str, source) -> Optional[RelationMapping]:
        # raw relations compare case-insensitively: INHIBITS and inhibits are one predicate
        raw = raw.strip().casefold()
        source = MappingSource(getattr(source, "value", source))
        hit = self._table.get((raw, source))
        if hit is None:
            hit = self._table.get((raw, MappingSource.ANY))
        return hit

    def normalize(self, raw: str, source) -> NormalizedRelation:
        hit = self.lookup(raw, source)
        if hit is None:
            key = (raw, str(getattr(source, "value", source)))
            if key not in self._warned:
                self._warned.add(key)
                logger.warning("unmapped relation %r from %s; excluding", raw, key[1])
            return NormalizedRelation(Disposition.EXCLUDE, None)
        if hit.disposition is Disposition.EXCLUDE:
            return NormalizedRelation(Disposition.EXCLUDE, None)
        return NormalizedRelation(hit.disposition, hit.mapped)

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("\t".join(RELATION_MAP_HEADER) + "\n")
            for m in sorted(self._table.values(), key=lambda m: (m.raw, m.source.value)):
                mid = m.mapped.id if m.mapped else ""
                mlabel = m.mapped.label if m.mapped else ""
                fh.write(f"{m.raw}\t{m.source.value}\t{mid}\t{mlabel}\t{m.disposition.value}\n")

    @classmethod
    def load(cls, path) -> "RelationMap":
        path = Path(path)
        with open(path, encoding="utf-8", newline="") as fh:
            try:
                return cls(_read_relation_rows(fh, path))
            except ValueError as exc:
                raise DataError(f"{path}: {exc}") from None

    @classmethod
    def default(cls) -> "RelationMap":
        ref = resources.files("npkg.data").joinpath("relation_map.tsv")
        with resources.as_file(ref) as path:
            return cls.load(path)


def normalize_relation(raw: str, source, relation_map: RelationMap) -> NormalizedRelation:
    return relation_map.normalize(raw, source)


def _read_relation_rows(fh, path) -> Iterator[RelationMapping]:
    reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != RELATION_MAP_HEADER:
        raise ParseError(path, 1, f"expected header {RELATION_MAP_HEADER}")
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 5:
            raise ParseError(path, lineno, f"expected 5 columns, got {len(row)}")
        raw, source, mid, mlabel, disp = (c.strip() for c in row)
        try:
            mapped = RelationId(mid, mlabel) if mid else None
            yield RelationMapping(raw, MappingSource(source), mapped, Disposition(disp))
        except ValueError as exc:
            raise ParseError(path, lineno, str(exc)) from None
