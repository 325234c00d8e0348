"""Synthetic inputs for scale tests and kernel benchmarks.

The generated ontology part is a uniform random multigraph. The literature
part draws endpoints inside small blocks of entities, so transitive closure
stays bounded by block size while symmetric closure still has real work.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from npkg import relations as R
from npkg.ingest import EDGE_HEADER, ENTITY_MAP_HEADER, NODE_HEADER
from npkg.pipeline import RunConfig

ONTOLOGY_RELATIONS = (
    (R.PART_OF, "part of"),
    (R.INTERACTS_WITH, "interacts with"),
    (R.POSITIVELY_REGULATES, "positively regulates"),
    (R.IS_SUBSTRATE_OF, "is substrate of"),
    ("RO_0000056", "participates in"),
)
LITERATURE_RELATIONS = ("STIMULATES", "INTERACTS_WITH", "INHIBITS", "NEG_INHIBITS")
LITERATURE_WEIGHTS = (0.4, 0.3, 0.28, 0.02)


def node_id(i: int) -> str:
    return f"SYN:{i:08d}"


def random_edges(n_nodes: int, n_edges: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Uniform random directed pairs without self-loops."""
    rng = np.random.default_rng(seed)
    src = rng.integers(0, n_nodes, n_edges, dtype=np.int64)
    dst = rng.integers(0, n_nodes - 1, n_edges, dtype=np.int64)
    dst[dst >= src] += 1
    return src, dst


def write_synthetic_inputs(out_dir, n_nodes: int = 150_000, n_ontology_edges: int = 975_000,
                           n_predications: int = 25_000, block: int = 10, seed: int = 0) -> RunConfig:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    with open(out / "nodes.tsv", "w", encoding="utf-8") as fh:
        fh.write("\t".join(NODE_HEADER) + "\n")
        fh.writelines(f"{node_id(i)}\tentity {i}\tSYN\tOTHER\n" for i in range(n_nodes))

    src, dst = random_edges(n_nodes, n_ontology_edges, seed)
    rel = rng.integers(0, len(ONTOLOGY_RELATIONS), n_ontology_edges)
    with open(out / "edges.tsv", "w", encoding="utf-8") as fh:
        fh.write("\t".join(EDGE_HEADER) + "\n")
        fh.writelines(
            f"{node_id(s)}\t{ONTOLOGY_RELATIONS[r][0]}\t{ONTOLOGY_RELATIONS[r][1]}\t{node_id(d)}\tsynthetic ontology\t\t\t\t\n"
            for s, d, r in zip(src.tolist(), dst.tolist(), rel.tolist()))

    # literature endpoints: pick a block, then two distinct members of it
    n_blocks = max(1, n_nodes // block)
    b = rng.integers(0, n_blocks, n_predications)
    a_off = rng.integers(0, block, n_predications)
    c_off = rng.integers(0, block - 1, n_predications)
    c_off[c_off >= a_off] += 1
    subj = np.minimum(b * block + a_off, n_nodes - 1)
    obj = np.minimum(b * block + c_off, n_nodes - 1)
    kinds = rng.choice(len(LITERATURE_RELATIONS), n_predications, p=LITERATURE_WEIGHTS)
    years = rng.integers(1990, 2023, n_predications)
    mentioned = np.unique(np.concatenate((subj, obj)))
    with open(out / "entity_map.tsv", "w", encoding="utf-8") as fh:
        fh.write("\t".join(ENTITY_MAP_HEADER) + "\n")
        fh.writelines(f"entity {i}\t{node_id(i)}\tentity {i}\n" for i in mentioned.tolist())
    with open(out / "predications.jsonl", "w", encoding="utf-8") as fh:
        for i, (s, o, k, y) in enumerate(zip(subj.tolist(), obj.tolist(), kinds.tolist(), years.tolist())):
            if s == o:
                continue
            fh.write(json.dumps({
                "subject_text": f"entity {s}", "relation_raw": LITERATURE_RELATIONS[k],
                "object_text": f"entity {o}", "source": "SEMREP", "pmid": f"SYN{i}",
                "year": y, "sentence": f"synthetic sentence {i}",
            }) + "\n")

    return RunConfig(nodes=[out / "nodes.tsv"], edges=[out / "edges.tsv"],
                     predications=[out / "predications.jsonl"], entity_map=out / "entity_map.tsv",
                     closure="literature")
