"""Integer CSR view of a sealed graph for the traversal kernels.

Nodes are numbered in sorted id order, so "smallest index" and
"lexicographically smallest id" coincide; path tie-breaking relies on that.
Parallel edges collapse to one node pair, and a pair carries the earliest
time bound among its edges so year cutoffs become a mask over pairs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from npkg.kernels import build_csr


@dataclass(frozen=True)
class Adjacency:
    fptr: np.ndarray
    fidx: np.ndarray
    bptr: np.ndarray
    bidx: np.ndarray


class GraphIndex:
    def __init__(self, graph):
        self.ids = sorted(graph.nodes)
        self.pos = {nid: i for i, nid in enumerate(self.ids)}
        n = self.n = len(self.ids)
        pos = self.pos
        src = np.empty(graph.edge_count, dtype=np.int64)
        dst = np.empty(graph.edge_count, dtype=np.int64)
        bound = np.empty(graph.edge_count, dtype=np.float64)
        for i, edge in enumerate(graph.edges()):
            src[i] = pos[edge.subject]
            dst[i] = pos[edge.object]
            bound[i] = edge.time_bound()
        loops = src == dst
        src, dst, bound = src[~loops], dst[~loops], bound[~loops]
        keys = src * n + dst if n else src
        order = np.lexsort((bound, keys))
        keys, bound = keys[order], bound[order]
        first = np.ones(keys.size, dtype=bool)
        first[1:] = keys[1:] != keys[:-1]
        keys = keys[first]
        self.pair_src = keys // n if n else keys
        self.pair_dst = keys % n if n else keys
        self.pair_bound = bound[first]

    def adjacency(self, directed: bool = True, year_cutoff: Optional[int] = None) -> Adjacency:
        s, d = self.pair_src, self.pair_dst
        if year_cutoff is not None:
            keep = self.pair_bound <= year_cutoff
            s, d = s[keep], d[keep]
        if not directed:
            s, d = np.concatenate((s, d)), np.concatenate((d, s))
        fptr, fidx = build_csr(s, d, self.n)
        if directed:
            bptr, bidx = build_csr(d, s, self.n)
        else:
            bptr, bidx = fptr, fidx
        return Adjacency(fptr, fidx, bptr, bidx)


def graph_index(graph) -> GraphIndex:
    """Shared, lazily built index of ``graph``; build once the graph is sealed."""
    return graph.cached("index", lambda: GraphIndex(graph))


def adjacency(graph, directed=True, year_cutoff=None) -> Adjacency:
    idx = graph_index(graph)
    return graph.cached(("adj", directed, year_cutoff), lambda: idx.adjacency(directed, year_cutoff))


def qualifies(edge, year_cutoff) -> bool:
    return year_cutoff is None or edge.time_bound() <= year_cutoff

