"""Run configuration and the end-to-end build.

A config is a JSON object; relative paths resolve against the file's own
directory. Keys:

    nodes, edges, predications   lists of input files
    entity_map, relation_map     single files (relation_map defaults to the bundled one)
    filters                      directory or section file, see FilterConfig.load
    closure_config               relation_id<TAB>rule file (defaults built in)
    targets, ground_truth, polarity
    closure                      "literature" | "merged" | "none"
    strict                       bool, unknown ontology endpoints are errors
    directed                     bool
    year_cutoff                  int or null
    min_confidence               float or null
    whitelist, slot_a, slot_b    relation id lists for meta-path templates
"""
from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

from npkg.closure import ClosureConfig, apply_closure
from npkg.errors import DataError
from npkg.graph import KnowledgeGraph, merge_graphs
from npkg.ingest import (
    EntityMap,
    FilterConfig,
    IngestionReport,
    build_literature_graph,
    build_ontology_graph,
    parse_predication_file,
)
from npkg.relations import RelationMap

logger = logging.getLogger(__name__)

CLOSURE_SCOPES = ("literature", "merged", "none")
_PATH_LISTS = ("nodes", "edges", "predications")
_PATHS = ("entity_map", "relation_map", "filters", "closure_config", "targets", "ground_truth", "polarity")


@dataclass
class RunConfig:
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    predications: list = field(default_factory=list)
    entity_map: Optional[Path] = None
    relation_map: Optional[Path] = None
    filters: Optional[Path] = None
    closure_config: Optional[Path] = None
    targets: Optional[Path] = None
    ground_truth: Optional[Path] = None
    polarity: Optional[Path] = None
    closure: str = "literature"
    strict: bool = False
    directed: bool = True
    year_cutoff: Optional[int] = None
    min_confidence: Optional[float] = None
    whitelist: Optional[list] = None
    slot_a: Optional[list] = None
    slot_b: Optional[list] = None

    @classmethod
    def from_dict(cls, raw: dict, base: Path = Path(".")) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise DataError(f"unknown config keys: {', '.join(unknown)}")
        values = dict(raw)
        for key in _PATH_LISTS:
            if key in values:
                items = values[key]
                if isinstance(items, str):
                    items = [items]
                values[key] = [base / p for p in items]
        for key in _PATHS:
            if values.get(key) is not None:
                values[key] = base / values[key]
        cfg = cls(**values)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "RunConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise DataError(f"cannot open {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from None
        if not isinstance(raw, dict):
            raise DataError(f"{path}: config must be a JSON object")
        return cls.from_dict(raw, path.parent)

    def validate(self) -> None:
        if self.closure not in CLOSURE_SCOPES:
            raise DataError(f"closure must be one of {', '.join(CLOSURE_SCOPES)}, got {self.closure!r}")
        for p in self.input_paths():
            if not p.exists():
                raise DataError(f"input file not found: {p}")

    def input_paths(self) -> list[Path]:
        out = [*self.nodes, *self.edges, *self.predications]
        out += [getattr(self, k) for k in _PATHS if getattr(self, k) is not None]
        return out

    def fingerprint(self) -> dict:
        """JSON-safe view with every file replaced by its content hash.

        Two runs over the same inputs fingerprint identically wherever the
        files live on disk.
        """
        d = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name in _PATH_LISTS:
                v = [_content_hash(p) for p in v]
            elif isinstance(v, Path):
                v = _content_hash(v)
            d[f.name] = v
        return d


def _content_hash(path: Path) -> str:
    h = hashlib.sha256()
    files = sorted(p for p in path.rglob("*") if p.is_file()) if path.is_dir() else [path]
    for p in files:
        h.update(p.relative_to(path).as_posix().encode() if path.is_dir() else b"")
        h.update(p.read_bytes())
    return h.hexdigest()


def load_relation_map(cfg: RunConfig) -> RelationMap:
    return RelationMap.load(cfg.relation_map) if cfg.relation_map else RelationMap.default()


def build(cfg: RunConfig) -> tuple[KnowledgeGraph, IngestionReport]:
    """Ontology graph + literature graph, closed according to ``cfg.closure``. Returns a sealed graph."""
    rmap = load_relation_map(cfg)
    closure_cfg = ClosureConfig.load(cfg.closure_config) if cfg.closure_config else ClosureConfig()
    ontology = build_ontology_graph(cfg.nodes, cfg.edges, rmap.registry, strict=cfg.strict)

    preds = [p for path in cfg.predications for p in parse_predication_file(path)]
    if preds and cfg.entity_map is None:
        raise DataError("predications given without an entity_map")
    entity_map = EntityMap.load(cfg.entity_map) if cfg.entity_map else EntityMap()
    filters = FilterConfig.load(cfg.filters, cfg.min_confidence) if cfg.filters else FilterConfig(
        min_confidence=cfg.min_confidence)
    literature, report = build_literature_graph(preds, rmap, entity_map, filters)

    if cfg.closure == "literature":
        literature = apply_closure(literature, closure_cfg)
        g = merge_graphs(ontology, literature, in_place=True)
    else:
        g = merge_graphs(ontology, literature, in_place=True)
        if cfg.closure == "merged":
            g = apply_closure(g, closure_cfg)
    logger.info("built graph: %d nodes, %d edges (%d negated)", g.node_count, g.edge_count,
                g.negated_edge_count)
    return g.seal(), report
