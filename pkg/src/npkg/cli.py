"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data error. Every report is JSON with
sorted keys, written to ``--out`` (when given) and echoed to stdout.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional

from npkg import __version__
from npkg.closure import inferred_by_relation
from npkg.data import fixture_dir
from npkg.errors import DataError, NodeNotFound, NpkgError
from npkg.evaluate import (
    PolarityTable,
    classify_assertion,
    contradiction_pair_json,
    find_contradictory_edge_pairs,
    load_ground_truth,
    summarize_evaluation,
)
from npkg.graph import GraphStats, KnowledgeGraph, compute_stats, percent_change
from npkg.pipeline import CLOSURE_SCOPES, RunConfig, build
from npkg.query import (
    DEFAULT_WHITELIST,
    MetaPathTemplate,
    Shape,
    TargetSet,
    find_metapaths,
    shortest_path,
    time_slice,
)
from npkg.snapshot import read_snapshot, write_snapshot

logger = logging.getLogger("npkg")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; 2 is reserved for data errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit(args, name: str, report: dict) -> None:
    text = dump(report)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{name}.json").write_text(text, encoding="utf-8")
    sys.stdout.write(text)


# -- shared resolution --------------------------------------------------------

def load_config(args) -> RunConfig:
    if args.config is None:
        cfg = RunConfig()
    elif args.config.startswith("@"):
        # "@npdi" names a bundled fixture
        try:
            cfg = RunConfig.load(fixture_dir(args.config[1:]) / "config.json")
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    else:
        cfg = RunConfig.load(args.config)
    if args.directed is not None:
        cfg.directed = args.directed
    if args.year_cutoff is not None:
        cfg.year_cutoff = args.year_cutoff
    return cfg


def load_graph(args, cfg: RunConfig) -> KnowledgeGraph:
    """The snapshot named by ``--graph``, or a fresh in-memory build from the config."""
    if getattr(args, "graph", None):
        g, _ = read_snapshot(args.graph)
    elif args.config is not None:
        g, _ = build(cfg)
    else:
        raise UsageError("give --graph <snapshot dir> or --config <file>")
    return g


def resolve_node(g: KnowledgeGraph, ref: str) -> str:
    """Node id for ``ref``: an exact id, else a unique case-insensitive label."""
    ref = ref.strip()
    if g.has_node(ref):
        return ref
    hits = sorted(nid for nid, n in g.nodes.items() if n.label.casefold() == ref.casefold())
    if len(hits) == 1:
        return hits[0]
    if hits:
        raise DataError(f"label {ref!r} is ambiguous: {', '.join(hits)}")
    raise NodeNotFound(ref)


def _mode(cfg: RunConfig) -> dict:
    return {"directed": cfg.directed, "year_cutoff": cfg.year_cutoff}


# -- subcommands ----------------------------------------------------------------

def cmd_build(args) -> int:
    cfg = load_config(args)
    if args.config is None:
        raise UsageError("build needs --config")
    if args.closure is not None:
        cfg.closure = args.closure
    if args.strict:
        cfg.strict = True
    if not args.out:
        raise UsageError("build needs --out <dir>")
    g, report = build(cfg)
    fp = cfg.fingerprint()
    manifest = write_snapshot(g, args.out, fp, extra={"closure": cfg.closure, "strict": cfg.strict})
    result = {"manifest": manifest, "ingestion": report.as_dict()}
    emit(args, "build_report", result)
    return EXIT_OK


def cmd_stats(args) -> int:
    if args.node_count is not None or args.edge_count is not None:
        if args.node_count is None or args.edge_count is None:
            raise UsageError("--node-count and --edge-count go together")
        stats = GraphStats(args.node_count, args.edge_count)
    else:
        cfg = load_config(args)
        g = load_graph(args, cfg)
        if cfg.year_cutoff is not None:
            g = time_slice(g, cfg.year_cutoff)
        stats = compute_stats(g)
    report = {"stats": stats.as_dict()}
    baseline = None
    if args.baseline_node_count is not None or args.baseline_edge_count is not None:
        if args.baseline_node_count is None or args.baseline_edge_count is None:
            raise UsageError("--baseline-node-count and --baseline-edge-count go together")
        baseline = GraphStats(args.baseline_node_count, args.baseline_edge_count)
    elif args.baseline:
        baseline = compute_stats(read_snapshot(args.baseline)[0])
    if baseline is not None:
        report["baseline"] = baseline.as_dict()
        report["percent_change"] = percent_change(baseline, stats)
    emit(args, "stats", report)
    return EXIT_OK


def cmd_path(args) -> int:
    cfg = load_config(args)
    g = load_graph(args, cfg)
    src, dst = resolve_node(g, args.src), resolve_node(g, args.dst)
    path = shortest_path(g, src, dst, cfg.directed, cfg.year_cutoff, method=args.method)
    report = {"src": src, "dst": dst, **_mode(cfg), "found": path is not None,
              "path": path.as_dict() if path is not None else None}
    emit(args, "path", report)
    return EXIT_OK


def _templates(cfg: RunConfig) -> list[MetaPathTemplate]:
    whitelist = frozenset(cfg.whitelist) if cfg.whitelist is not None else DEFAULT_WHITELIST
    slot_a = frozenset(cfg.slot_a) if cfg.slot_a is not None else None
    slot_b = frozenset(cfg.slot_b) if cfg.slot_b is not None else None
    return [MetaPathTemplate(shape, whitelist, slot_a, slot_b) for shape in Shape]


def cmd_metapath(args) -> int:
    cfg = load_config(args)
    targets_path = args.targets or cfg.targets
    if targets_path is None:
        raise UsageError("metapath needs --targets or a config with 'targets'")
    g = load_graph(args, cfg)
    nps = sorted({resolve_node(g, ref) for ref in args.np.split(",") if ref.strip()})
    drug = resolve_node(g, args.drug)
    result = find_metapaths(g, nps, drug, TargetSet.load(targets_path), _templates(cfg),
                            cfg.directed, cfg.year_cutoff)
    report = {**result.as_dict(), **_mode(cfg),
              "labels": {nid: g.node(nid).label for nid in sorted({*nps, drug, *result.enzymes,
                                                                    *result.transporters})}}
    emit(args, "metapath", report)
    return EXIT_OK


def _polarity(args, cfg, g) -> PolarityTable:
    path = args.polarity or cfg.polarity
    return PolarityTable.load(path, g.registry) if path else PolarityTable.default(g.registry)


def cmd_evaluate(args) -> int:
    cfg = load_config(args)
    gt_path = args.ground_truth or cfg.ground_truth
    if gt_path is None:
        raise UsageError("evaluate needs --ground-truth or a config with 'ground_truth'")
    assertions = load_ground_truth(gt_path)
    g = load_graph(args, cfg)
    pol = _polarity(args, cfg, g)
    verdicts = [classify_assertion(g, a, pol, cfg.directed, cfg.year_cutoff) for a in assertions]
    report = {**_mode(cfg), "verdicts": [v.as_dict() for v in verdicts],
              "summary": summarize_evaluation(verdicts)}
    emit(args, "evaluation", report)
    return EXIT_OK


def cmd_contradictions(args) -> int:
    cfg = load_config(args)
    g = load_graph(args, cfg)
    if cfg.year_cutoff is not None:
        g = time_slice(g, cfg.year_cutoff)
    pairs = find_contradictory_edge_pairs(g, _polarity(args, cfg, g))
    emit(args, "contradictions", {"count": len(pairs), "pairs": [contradiction_pair_json(p) for p in pairs]})
    return EXIT_OK


def cmd_closure_report(args) -> int:
    cfg = load_config(args)
    g = load_graph(args, cfg)
    by_rule: dict[str, int] = {}
    for e in g.edges():
        if e.inferred:
            name = e.evidence[0].source_name
            by_rule[name] = by_rule.get(name, 0) + 1
    by_relation = inferred_by_relation(g)
    report = {
        "edge_count": g.edge_count,
        "inferred_edge_count": sum(by_relation.values()),
        "by_relation": {rid: {"label": g.registry.get(rid).label, "count": n} for rid, n in by_relation.items()},
        "by_rule": dict(sorted(by_rule.items())),
    }
    emit(args, "closure_report", report)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="JSON run config, or @npdi for the bundled fixture")
    direction = p.add_mutually_exclusive_group()
    direction.add_argument("--directed", dest="directed", action="store_const", const=True, default=None,
                           help="follow edges subject -> object only (default)")
    direction.add_argument("--undirected", dest="directed", action="store_const", const=False,
                           help="traverse every edge both ways")
    p.add_argument("--year-cutoff", type=int, help="only use evidence dated at or before this year")
    p.add_argument("--out", help="directory for reports (build: the snapshot directory)")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def _graph_arg(p):
    p.add_argument("--graph", help="snapshot directory written by 'build' (default: build from --config)")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="npkg", description="Natural product-drug interaction knowledge graph tools.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("build", parents=[common], help="ingest inputs, close, write a snapshot")
    p.add_argument("--closure", choices=CLOSURE_SCOPES, help="override the config's closure scope")
    p.add_argument("--strict", action="store_true", help="unknown ontology endpoints are errors")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("stats", parents=[common], help="graph counts, degree and density")
    _graph_arg(p)
    p.add_argument("--node-count", type=int, help="compute from raw counts instead of a graph")
    p.add_argument("--edge-count", type=int)
    p.add_argument("--baseline", help="snapshot to report percent change against")
    p.add_argument("--baseline-node-count", type=int)
    p.add_argument("--baseline-edge-count", type=int)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("path", parents=[common], help="shortest path between two nodes")
    _graph_arg(p)
    p.add_argument("--src", required=True, help="node id or label")
    p.add_argument("--dst", required=True, help="node id or label")
    p.add_argument("--method", choices=("bidirectional", "bfs"), default="bidirectional")
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("metapath", parents=[common], help="meta-path search for a natural product and a drug")
    _graph_arg(p)
    p.add_argument("--np", required=True, help="comma-separated natural product node ids or labels")
    p.add_argument("--drug", required=True, help="drug node id or label")
    p.add_argument("--targets", help="node_id<TAB>kind target file")
    p.set_defaults(func=cmd_metapath)

    p = sub.add_parser("evaluate", parents=[common], help="congruence with ground-truth interactions")
    _graph_arg(p)
    p.add_argument("--ground-truth", help="np_node<TAB>target_node<TAB>interaction<TAB>evidence_type file")
    p.add_argument("--polarity", help="relation_id<TAB>polarity file")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("contradictions", parents=[common], help="edge pairs of opposite polarity")
    _graph_arg(p)
    p.add_argument("--polarity", help="relation_id<TAB>polarity file")
    p.set_defaults(func=cmd_contradictions)

    p = sub.add_parser("closure-report", parents=[common], help="inferred edge counts")
    _graph_arg(p)
    p.set_defaults(func=cmd_closure_report)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"npkg {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NpkgError as exc:
        print(f"npkg {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
