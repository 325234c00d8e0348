"""numba-compiled kernels; contracts identical to :mod:`npkg.kernels._numpy`."""
import numpy as np
from numba import njit

from npkg.kernels._csr import build_csr


@njit(cache=True)
def _bfs(indptr, indices, source, max_depth):
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, dtype=np.int32)
    dist[source] = 0
    queue = np.empty(n, dtype=np.int64)
    queue[0] = source
    head = 0
    tail = 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        if max_depth >= 0 and du >= max_depth:
            continue
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            if dist[v] < 0:
                dist[v] = du + 1
                queue[tail] = v
                tail += 1
    return dist


def bfs_distances(indptr, indices, source, max_depth=-1):
    return _bfs(indptr, indices, np.int64(source), np.int64(max_depth))


@njit(cache=True)
def _expand(ptr, idx, frontier, size, dist, other, level, nxt):
    count = 0
    met = False
    for i in range(size):
        u = frontier[i]
        for j in range(ptr[u], ptr[u + 1]):
            v = idx[j]
            if dist[v] < 0:
                dist[v] = level
                nxt[count] = v
                count += 1
                if other[v] >= 0:
                    met = True
    return count, met


@njit(cache=True)
def _bidi(fptr, fidx, bptr, bidx, source, target):
    n = fptr.shape[0] - 1
    df = np.full(n, -1, dtype=np.int32)
    db = np.full(n, -1, dtype=np.int32)
    df[source] = 0
    db[target] = 0
    if source == target:
        return 0, 0, df, db
    ff = np.empty(n, dtype=np.int64)
    bf = np.empty(n, dtype=np.int64)
    nxt = np.empty(n, dtype=np.int64)
    ff[0] = source
    bf[0] = target
    fn = 1
    bn = 1
    kf = 0
    kb = 0
    while fn > 0 and bn > 0:
        if fn <= bn:
            kf += 1
            fn, met = _expand(fptr, fidx, ff, fn, df, db, kf, nxt)
            ff[:fn] = nxt[:fn]
        else:
            kb += 1
            bn, met = _expand(bptr, bidx, bf, bn, db, df, kb, nxt)
            bf[:bn] = nxt[:bn]
        if met:
            return kf + kb, kf, df, db
    return -1, kf, df, db


def bidirectional_bfs(fptr, fidx, bptr, bidx, source, target):
    length, kf, df, db = _bidi(fptr, fidx, bptr, bidx, np.int64(source), np.int64(target))
    return int(length), int(kf), df, db


@njit(cache=True)
def _closure(indptr, indices, src, dst, n):
    known = set()
    for i in range(src.shape[0]):
        known.add(src[i] * n + dst[i])
    da = src.copy()
    db = dst.copy()
    out_keys = np.empty(0, dtype=np.int64)
    out_w = np.empty(0, dtype=np.int64)
    while da.shape[0] > 0:
        total = 0
        for i in range(db.shape[0]):
            b = db[i]
            total += indptr[b + 1] - indptr[b]
        keys = np.empty(total, dtype=np.int64)
        wit = np.empty(total, dtype=np.int64)
        m = 0
        for i in range(da.shape[0]):
            a = da[i]
            b = db[i]
            for j in range(indptr[b], indptr[b + 1]):
                k = a * n + indices[j]
                if k not in known:
                    keys[m] = k
                    wit[m] = b
                    m += 1
        keys = keys[:m]
        wit = wit[:m]
        # order by (key, witness); stable passes emulate a lexsort
        o1 = np.argsort(wit, kind="mergesort")
        keys = keys[o1]
        wit = wit[o1]
        o2 = np.argsort(keys, kind="mergesort")
        keys = keys[o2]
        wit = wit[o2]
        keep = np.ones(m, dtype=np.bool_)
        for i in range(1, m):
            if keys[i] == keys[i - 1]:
                keep[i] = False
        keys = keys[keep]
        wit = wit[keep]
        for i in range(keys.shape[0]):
            known.add(keys[i])
        out_keys = np.concatenate((out_keys, keys))
        out_w = np.concatenate((out_w, wit))
        da = keys // n
        db = keys % n
    return out_keys, out_w


def transitive_closure(src, dst, n):
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    indptr, indices = build_csr(src, dst, n)
    keys, wit = _closure(indptr, indices, src, dst, np.int64(n))
    return keys // n, keys % n, wit


@njit(cache=True)
def _collect(ptr, idx, layer, size, key, want, position, pos_value, out):
    count = 0
    for i in range(size):
        u = layer[i]
        for j in range(ptr[u], ptr[u + 1]):
            v = idx[j]
            if key[v] == want and position[v] < 0:
                position[v] = pos_value
                out[count] = v
                count += 1
    return count


@njit(cache=True)
def _path(fptr, fidx, bptr, bidx, source, target):
    length, kf, df, db = _bidi(fptr, fidx, bptr, bidx, source, target)
    if length < 0:
        return np.empty(0, dtype=np.int64)
    n = fptr.shape[0] - 1
    position = np.full(n, -1, dtype=np.int64)
    meet = np.empty(n, dtype=np.int64)
    m = 0
    for v in range(n):
        if df[v] == kf and db[v] == length - kf:
            position[v] = kf
            meet[m] = v
            m += 1
    cur = meet.copy()
    size = m
    nxt = np.empty(n, dtype=np.int64)
    for i in range(kf, 0, -1):
        size = _collect(bptr, bidx, cur, size, df, i - 1, position, i - 1, nxt)
        cur[:size] = nxt[:size]
    cur[:m] = meet[:m]
    size = m
    for i in range(kf, length):
        size = _collect(fptr, fidx, cur, size, db, length - i - 1, position, i + 1, nxt)
        cur[:size] = nxt[:size]
    path = np.empty(length + 1, dtype=np.int64)
    path[0] = source
    u = source
    for i in range(length):
        # neighbors ascend, so the first on-path one is the smallest index
        for j in range(fptr[u], fptr[u + 1]):
            v = fidx[j]
            if position[v] == i + 1:
                u = v
                break
        path[i + 1] = u
    return path


def shortest_path_nodes(fptr, fidx, bptr, bidx, source, target):
    return _path(fptr, fidx, bptr, bidx, np.int64(source), np.int64(target))
