"""CSR construction and neighbor gathering shared by both backends."""
import numpy as np


def build_csr(src, dst, n):
    """Compressed adjacency for the unique pairs in (src, dst); neighbors ascend."""
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    if src.size:
        keys = np.unique(src * n + dst)
        src, dst = keys // n, keys % n
    counts = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, dst.astype(np.int64)


def gather_neighbors(indptr, indices, nodes):
    """Concatenated neighbor lists of ``nodes``, in order."""
    nodes = np.asarray(nodes, dtype=np.int64)
    starts = indptr[nodes]
    counts = indptr[nodes + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    offsets = np.repeat(starts - np.cumsum(counts) + counts, counts)
    return indices[offsets + np.arange(total)]
