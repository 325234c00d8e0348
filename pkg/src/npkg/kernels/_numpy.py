"""Vectorized numpy implementations of the graph kernels.

Same contracts as the numba backend; layer-at-a-time frontier expansion
instead of per-node loops.
"""
import numpy as np

from npkg.kernels._csr import build_csr, gather_neighbors


def bfs_distances(indptr, indices, source, max_depth=-1):
    n = len(indptr) - 1
    dist = np.full(n, -1, dtype=np.int32)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    depth = 0
    while frontier.size and (max_depth < 0 or depth < max_depth):
        nbrs = gather_neighbors(indptr, indices, frontier)
        nbrs = np.unique(nbrs[dist[nbrs] < 0])
        depth += 1
        dist[nbrs] = depth
        frontier = nbrs
    return dist


def bidirectional_bfs(fptr, fidx, bptr, bidx, source, target):
    """Layer-synchronous bidirectional BFS.

    Returns ``(length, forward_radius, dist_fwd, dist_bwd)``; ``length`` is -1
    when ``target`` is unreachable. Both distance arrays are complete for the
    layers expanded, which the path reconstruction relies on.
    """
    n = len(fptr) - 1
    df = np.full(n, -1, dtype=np.int32)
    db = np.full(n, -1, dtype=np.int32)
    df[source] = 0
    db[target] = 0
    if source == target:
        return 0, 0, df, db
    ff = np.array([source], dtype=np.int64)
    bf = np.array([target], dtype=np.int64)
    kf = kb = 0
    while ff.size and bf.size:
        if ff.size <= bf.size:
            nbrs = gather_neighbors(fptr, fidx, ff)
            nbrs = np.unique(nbrs[df[nbrs] < 0])
            kf += 1
            df[nbrs] = kf
            ff = nbrs
            if nbrs.size and (db[nbrs] >= 0).any():
                return kf + kb, kf, df, db
        else:
            nbrs = gather_neighbors(bptr, bidx, bf)
            nbrs = np.unique(nbrs[db[nbrs] < 0])
            kb += 1
            db[nbrs] = kb
            bf = nbrs
            if nbrs.size and (df[nbrs] >= 0).any():
                return kf + kb, kf, df, db
    return -1, kf, df, db


def transitive_closure(src, dst, n):
    """Semi-naive closure of one relation given as edge arrays over ``n`` nodes.

    Each round joins only the pairs derived in the previous round with the
    base edges. Returns the derived pairs ``(a, c, witness)`` in derivation
    order (round by round, sorted by ``a * n + c`` within a round); ``witness``
    is the smallest intermediate node among the derivations of the round that
    first produced the pair.
    """
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    indptr, indices = build_csr(src, dst, n)
    known = np.unique(src * n + dst)
    da, db = src, dst
    out_a, out_c, out_w = [], [], []
    while da.size:
        counts = indptr[db + 1] - indptr[db]
        a = np.repeat(da, counts)
        w = np.repeat(db, counts)
        c = gather_neighbors(indptr, indices, db)
        keys = a * n + c
        pos = np.searchsorted(known, keys)
        pos[pos == known.size] = 0
        fresh = known[pos] != keys if known.size else np.ones(keys.size, dtype=bool)
        keys, w = keys[fresh], w[fresh]
        order = np.lexsort((w, keys))
        keys, w = keys[order], w[order]
        first = np.ones(keys.size, dtype=bool)
        first[1:] = keys[1:] != keys[:-1]
        keys, w = keys[first], w[first]
        if not keys.size:
            break
        out_a.append(keys // n)
        out_c.append(keys % n)
        out_w.append(w)
        known = np.union1d(known, keys)
        da, db = keys // n, keys % n
    if not out_a:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy()
    return np.concatenate(out_a), np.concatenate(out_c), np.concatenate(out_w)


def shortest_path_nodes(fptr, fidx, bptr, bidx, source, target):
    """Node indices of the lexicographically smallest shortest path, empty if none.

    Nodes on some shortest path are found layer by layer from the meeting
    set; the walk from ``source`` then takes the smallest on-path successor
    at every step, which yields the smallest index sequence.
    """
    length, kf, df, db = bidirectional_bfs(fptr, fidx, bptr, bidx, source, target)
    if length < 0:
        return np.empty(0, dtype=np.int64)
    position = np.full(len(df), -1, dtype=np.int64)
    meet = np.flatnonzero((df == kf) & (db == length - kf))
    position[meet] = kf
    cur = meet
    for i in range(kf, 0, -1):
        prev = gather_neighbors(bptr, bidx, cur)
        prev = np.unique(prev[df[prev] == i - 1])
        position[prev] = i - 1
        cur = prev
    cur = meet
    for i in range(kf, length):
        nxt = gather_neighbors(fptr, fidx, cur)
        nxt = np.unique(nxt[db[nxt] == length - i - 1])
        position[nxt] = i + 1
        cur = nxt
    path = np.empty(length + 1, dtype=np.int64)
    path[0] = u = source
    for i in range(length):
        nbrs = fidx[fptr[u]:fptr[u + 1]]
        u = int(nbrs[np.argmax(position[nbrs] == i + 1)])
        path[i + 1] = u
    return path
