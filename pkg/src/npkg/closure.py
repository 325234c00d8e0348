"""Symmetric and transitive entailment over designated relations.

Each relation closes independently: a symmetric relation gains every reverse
edge, a transitive relation gains every pair connected by a chain of its own
edges. Transitive rounds are semi-naive (see ``kernels.transitive_closure``).
New edges carry exactly one INFERRED evidence record naming the two premises
they were derived from.
"""
from __future__ import annotations

import csv
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from npkg import kernels
from npkg.errors import ParseError
from npkg.graph import EdgeRecord, EvidenceRecord, EvidenceSource, KnowledgeGraph
from npkg.relations import (
    INTERACTS_WITH,
    MOLECULARLY_INTERACTS_WITH,
    PART_OF,
    POSITIVELY_REGULATES,
    PRECEDES,
)

logger = logging.getLogger(__name__)

SYMMETRIC = "SYMMETRIC"
TRANSITIVE = "TRANSITIVE"
RULE_SOURCE_NAMES = {SYMMETRIC: "symmetric closure", TRANSITIVE: "transitive closure"}


@dataclass(frozen=True)
class ClosureConfig:
    symmetric_relations: frozenset = field(
        default_factory=lambda: frozenset({INTERACTS_WITH, MOLECULARLY_INTERACTS_WITH}))
    transitive_relations: frozenset = field(
        default_factory=lambda: frozenset({PART_OF, PRECEDES, POSITIVELY_REGULATES}))

    @classmethod
    def load(cls, path) -> "ClosureConfig":
        """Read a ``relation_id<TAB>rule`` file; it replaces the defaults entirely."""
        path = Path(path)
        sym, trans = set(), set()
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["relation_id", "rule"]:
                raise ParseError(path, 1, "expected header relation_id<TAB>rule")
            for lineno, row in enumerate(reader, start=2):
                if not row or not "".join(row).strip():
                    continue
                if len(row) != 2:
                    raise ParseError(path, lineno, f"expected 2 columns, got {len(row)}")
                rel, rule = row[0].strip(), row[1].strip().upper()
                if rule == SYMMETRIC:
                    sym.add(rel)
                elif rule == TRANSITIVE:
                    trans.add(rel)
                else:
                    raise ParseError(path, lineno, f"unknown rule {rule!r}")
        return cls(frozenset(sym), frozenset(trans))

    def relations(self) -> list[str]:
        return sorted(self.symmetric_relations | self.transitive_relations)


def _year_of(bound: float):
    # +inf (undated literature premise) cannot be expressed as a year; leave it undated
    return None if math.isinf(bound) else int(bound)


def _premise_note(*keys) -> str:
    return "derived_from=" + ";".join("|".join(k) for k in keys)


def apply_closure(g: KnowledgeGraph, cfg: ClosureConfig | None = None) -> KnowledgeGraph:
    """Return a copy of ``g`` extended with every entailed edge, run to fixpoint.

    Edges that are already present are left untouched. Negated edges are
    neither premises nor conclusions.
    """
    cfg = cfg or ClosureConfig()
    out = g.copy()
    for rel_id in cfg.relations():
        if rel_id not in g.registry:
            logger.debug("closure relation %s not in registry; skipping", rel_id)
            continue
        relation = g.registry.get(rel_id)
        for edge in _close_relation(
            g, relation,
            symmetric=rel_id in cfg.symmetric_relations,
            transitive=rel_id in cfg.transitive_relations,
        ):
            out.add_edge(edge)
    return out


def _close_relation(g, relation, *, symmetric, transitive):
    premises = [e for e in g.edges() if e.relation.id == relation.id]
    if not premises:
        return []
    ids = sorted({e.subject for e in premises} | {e.object for e in premises})
    pos = {nid: i for i, nid in enumerate(ids)}
    n = len(ids)
    bound = {}
    for e in premises:
        bound[(pos[e.subject], pos[e.object])] = e.time_bound()
    derived = []

    def emit(a, c, rule, p1, p2):
        b = max(bound[p1], bound[p2]) if p2 is not None else bound[p1]
        bound[(a, c)] = b
        keys = [(ids[p[0]], relation.id, ids[p[1]]) for p in (p1, p2) if p is not None]
        ev = EvidenceRecord(EvidenceSource.INFERRED, RULE_SOURCE_NAMES[rule],
                            year=_year_of(b), note=_premise_note(*keys))
        derived.append(EdgeRecord(ids[a], relation, ids[c], (ev,)))

    changed = True
    while changed:
        changed = False
        if symmetric:
            for (a, b) in sorted(bound):
                if (b, a) not in bound:
                    emit(b, a, SYMMETRIC, (a, b), None)
                    changed = True
        if transitive:
            pairs = np.array(sorted(bound), dtype=np.int64).reshape(-1, 2)
            new_a, new_c, wit = kernels.transitive_closure(pairs[:, 0], pairs[:, 1], n)
            for a, c, w in zip(new_a.tolist(), new_c.tolist(), wit.tolist()):
                emit(a, c, TRANSITIVE, (a, w), (w, c))
            changed = bool(len(new_a)) and symmetric
    return derived


def count_inferred(g: KnowledgeGraph) -> int:
    return sum(1 for e in g.edges() if e.inferred)


def inferred_by_relation(g: KnowledgeGraph) -> dict[str, int]:
    counts = Counter(e.relation.id for e in g.edges() if e.inferred)
    return dict(sorted(counts.items()))
