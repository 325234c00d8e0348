"""Congruence of graph knowledge with curated ground-truth interactions.

Relations carry a polarity. For an expected inhibition, negative relations
support the assertion and positive ones oppose it; induction is the mirror
image. Neutral relations (interacts_with and the like) only show that the two
nodes are connected.
"""
from __future__ import annotations

import csv
import enum
from collections import Counter
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Optional

from npkg import relations as R
from npkg.errors import DataError, ParseError
from npkg.graph import EdgeRecord, KnowledgeGraph
from npkg.query import PathResult, direct_edges, edge_to_json, shortest_path
from npkg.relations import RelationRegistry


class Interaction(str, enum.Enum):
    INHIBITS = "INHIBITS"
    INDUCES = "INDUCES"
    NO_INTERACTION = "NO_INTERACTION"


class Polarity(str, enum.Enum):
    POSITIVE = "POSITIVE"
    NEGATIVE = "NEGATIVE"
    NEUTRAL = "NEUTRAL"


class Verdict(str, enum.Enum):
    CONGRUENT = "CONGRUENT"
    CONTRADICTORY = "CONTRADICTORY"
    INDETERMINATE = "INDETERMINATE"
    BOTH = "BOTH"
    NO_PATH = "NO_PATH"


SUMMARY_ORDER = (Verdict.CONGRUENT, Verdict.CONTRADICTORY, Verdict.INDETERMINATE,
                 Verdict.BOTH, Verdict.NO_PATH)


@dataclass(frozen=True)
class GroundTruthAssertion:
    np_node: str
    target_node: str
    interaction: Interaction
    evidence_type: str = ""

    def __post_init__(self):
        if self.np_node == self.target_node:
            raise ValueError(f"assertion relates {self.np_node!r} to itself")

    def flipped(self) -> "GroundTruthAssertion":
        swap = {Interaction.INHIBITS: Interaction.INDUCES, Interaction.INDUCES: Interaction.INHIBITS}
        return GroundTruthAssertion(self.np_node, self.target_node,
                                    swap.get(self.interaction, self.interaction), self.evidence_type)


GROUND_TRUTH_HEADER = ("np_node", "target_node", "interaction", "evidence_type")


def _read_tsv(path, header):
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc.strerror}") from None
    with fh:
        reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
        first = next(reader, None)
        if first is None or tuple(h.strip() for h in first) != header:
            raise ParseError(path, 1, "expected header " + "<TAB>".join(header))
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            if len(row) != len(header):
                raise ParseError(path, lineno, f"expected {len(header)} columns, got {len(row)}")
            yield lineno, [c.strip() for c in row]


def load_ground_truth(path) -> list[GroundTruthAssertion]:
    out = []
    for lineno, (np_node, target, interaction, evidence_type) in _read_tsv(path, GROUND_TRUTH_HEADER):
        try:
            out.append(GroundTruthAssertion(np_node, target, Interaction(interaction.upper()), evidence_type))
        except ValueError as exc:
            raise ParseError(path, lineno, str(exc)) from None
    return out


DEFAULT_NEGATIVE = frozenset({R.INHIBITS, R.NEGATIVELY_REGULATES, R.DIRECTLY_NEGATIVELY_REGULATES_QUANTITY_OF})
DEFAULT_POSITIVE = frozenset({R.POSITIVELY_REGULATES, R.DIRECTLY_POSITIVELY_REGULATES_QUANTITY_OF,
                              R.CAPABLE_OF_POSITIVELY_REGULATING})


@dataclass(frozen=True)
class PolarityTable:
    """Relation polarity partition. Anything not listed positive or negative is neutral."""

    positive: frozenset
    negative: frozenset
    neutral: frozenset = frozenset()

    def __post_init__(self):
        overlap = (self.positive & self.negative) | (self.positive & self.neutral) | (self.negative & self.neutral)
        if overlap:
            raise ValueError(f"relations with two polarities: {sorted(overlap)}")

    @classmethod
    def default(cls, registry: Optional[RelationRegistry] = None) -> "PolarityTable":
        return cls.covering(DEFAULT_POSITIVE, DEFAULT_NEGATIVE, registry)

    @classmethod
    def covering(cls, positive, negative, registry=None) -> "PolarityTable":
        neutral = frozenset(registry.ids()) - positive - negative if registry is not None else frozenset()
        return cls(frozenset(positive), frozenset(negative), neutral)

    @classmethod
    def load(cls, path, registry: Optional[RelationRegistry] = None) -> "PolarityTable":
        sets = {p: set() for p in Polarity}
        for lineno, (rel, pol) in _read_tsv(path, ("relation_id", "polarity")):
            try:
                sets[Polarity(pol.upper())].add(rel)
            except ValueError:
                raise ParseError(path, lineno, f"polarity must be POSITIVE, NEGATIVE or NEUTRAL, got {pol!r}") from None
        try:
            table = cls(frozenset(sets[Polarity.POSITIVE]), frozenset(sets[Polarity.NEGATIVE]),
                        frozenset(sets[Polarity.NEUTRAL]))
        except ValueError as exc:
            raise DataError(f"{path}: {exc}") from None
        if registry is not None:
            table = cls(table.positive, table.negative,
                        table.neutral | (frozenset(registry.ids()) - table.positive - table.negative))
        return table

    def of(self, relation_id: str) -> Polarity:
        if relation_id in self.positive:
            return Polarity.POSITIVE
        if relation_id in self.negative:
            return Polarity.NEGATIVE
        return Polarity.NEUTRAL


@dataclass
class CongruenceVerdict:
    assertion: GroundTruthAssertion
    verdict: Verdict
    supporting: list = field(default_factory=list)
    opposing: list = field(default_factory=list)
    edges: list = field(default_factory=list)  # every edge examined, polar or not
    path: Optional[PathResult] = None
    note: str = ""

    def as_dict(self) -> dict:
        a = self.assertion
        return {
            "np_node": a.np_node,
            "target_node": a.target_node,
            "interaction": a.interaction.value,
            "evidence_type": a.evidence_type,
            "verdict": self.verdict.value,
            "basis": "none" if not self.edges else ("direct" if self.path is None else "shortest_path"),
            "path": list(self.path.nodes) if self.path is not None else None,
            "supporting": [edge_to_json(e) for e in self.supporting],
            "opposing": [edge_to_json(e) for e in self.opposing],
            "neutral": [edge_to_json(e) for e in self.edges
                        if e not in self.supporting and e not in self.opposing],
            "note": self.note,
        }


def classify_assertion(g: KnowledgeGraph, a: GroundTruthAssertion, pol: PolarityTable,
                       directed: bool = True, year_cutoff: Optional[int] = None) -> CongruenceVerdict:
    missing = [n for n in (a.np_node, a.target_node) if not g.has_node(n)]
    if missing:
        return CongruenceVerdict(a, Verdict.NO_PATH, note="missing node: " + ", ".join(missing))

    path = None
    edges = direct_edges(g, a.np_node, a.target_node, directed, year_cutoff)
    if not edges:
        path = shortest_path(g, a.np_node, a.target_node, directed, year_cutoff)
        if path is not None:
            # sign composition along a path is undefined; judge by the hop into the target
            edges = list(path.steps[-1])

    negative = [e for e in edges if pol.of(e.relation.id) is Polarity.NEGATIVE]
    positive = [e for e in edges if pol.of(e.relation.id) is Polarity.POSITIVE]
    if a.interaction is Interaction.INHIBITS:
        supporting, opposing = negative, positive
    elif a.interaction is Interaction.INDUCES:
        supporting, opposing = positive, negative
    else:
        supporting, opposing = [], negative + positive

    if not edges:
        verdict = Verdict.CONGRUENT if a.interaction is Interaction.NO_INTERACTION else Verdict.NO_PATH
    elif supporting and opposing:
        verdict = Verdict.BOTH
    elif supporting:
        verdict = Verdict.CONGRUENT
    elif opposing:
        verdict = Verdict.CONTRADICTORY
    else:
        verdict = Verdict.INDETERMINATE
    return CongruenceVerdict(a, verdict, supporting, opposing, edges, path)


def _percent(count: int, total: int) -> float:
    q = (Decimal(100) * count / Decimal(total)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)
    return float(q)


def summarize_evaluation(verdicts: Iterable) -> dict:
    """Counts and percentages per verdict class.

    Accepts CongruenceVerdict objects or bare Verdict values. Percentages are
    omitted when there is nothing to divide by.
    """
    counts = Counter(getattr(v, "verdict", v) for v in verdicts)
    total = sum(counts.values())
    rows = {}
    for v in SUMMARY_ORDER:
        row = {"count": counts.get(v, 0)}
        if total:
            row["percent"] = _percent(row["count"], total)
        rows[v.value] = row
    return {"total": total, "rows": rows}


def find_contradictory_edge_pairs(g: KnowledgeGraph, pol: PolarityTable) -> list[tuple]:
    """Every (positive, negative) edge pair sharing subject and object."""
    by_pair: dict[tuple, tuple[list, list]] = {}
    for e in g.edges():
        p = pol.of(e.relation.id)
        if p is Polarity.NEUTRAL:
            continue
        slot = by_pair.setdefault((e.subject, e.object), ([], []))
        slot[0 if p is Polarity.POSITIVE else 1].append(e)
    out = []
    for key in sorted(by_pair):
        pos, neg = by_pair[key]
        for x in sorted(pos, key=EdgeRecord.sort_key):
            for y in sorted(neg, key=EdgeRecord.sort_key):
                out.append((x, y))
    return out


def contradiction_pair_json(pair) -> dict:
    positive, negative = pair
    return {
        "subject": positive.subject,
        "object": positive.object,
        "positive": edge_to_json(positive),
        "negative": edge_to_json(negative),
    }
