"""Pure-Python counting kernels; the fallback when the extension is not built."""

import numpy as np


def pair_weights(indptr, ids, counts, node_of, n_nodes):
    out = np.zeros((n_nodes, n_nodes), dtype=np.int64)
    indptr = indptr.tolist()
    ids = ids.tolist()
    counts = counts.tolist()
    node_of = node_of.tolist()
    acc = {}
    for e in range(len(indptr) - 1):
        members = [(node_of[ids[j]], counts[j]) for j in range(indptr[e], indptr[e + 1])
                   if node_of[ids[j]] >= 0]
        for x in range(len(members)):
            a, ca = members[x]
            for y in range(x + 1, len(members)):
                b, cb = members[y]
                key = (a, b) if a < b else (b, a)
                acc[key] = acc.get(key, 0) + min(ca, cb)
    for (a, b), m in acc.items():
        out[a, b] = m
        out[b, a] = m
    return out


def column_mass(indptr, ids, counts, island_of, n_islands):
    n_vocab = len(island_of)
    out = np.zeros((n_vocab, n_islands), dtype=np.int64)
    indptr = indptr.tolist()
    ids = ids.tolist()
    counts = counts.tolist()
    island_of = island_of.tolist()
    acc = {}
    for e in range(len(indptr) - 1):
        span = range(indptr[e], indptr[e + 1])
        mass = {}
        for j in span:
            g = island_of[ids[j]]
            if g >= 0:
                mass[g] = mass.get(g, 0) + counts[j]
        if not mass:
            continue
        for j in span:
            w, cw = ids[j], counts[j]
            own = island_of[w]
            for g, m in mass.items():
                rest = m - cw if own == g else m
                if rest > 0:
                    acc[w, g] = acc.get((w, g), 0) + min(cw, rest)
    for (w, g), v in acc.items():
        out[w, g] = v
    return out


def cluster_hits(indptr, ids, island_of, island_size, require_all):
    out = [0] * len(island_size)
    indptr = indptr.tolist()
    ids = ids.tolist()
    island_of = island_of.tolist()
    size = island_size.tolist()
    for e in range(len(indptr) - 1):
        seen = {}
        for j in range(indptr[e], indptr[e + 1]):
            g = island_of[ids[j]]
            if g >= 0:
                seen[g] = seen.get(g, 0) + 1
        for g, n in seen.items():
            if not require_all or n == size[g]:
                out[g] += 1
    return np.asarray(out, dtype=np.int64)


def presence_counts(indptr, ids, n_vocab, lo, hi):
    out = [0] * n_vocab
    ids = ids.tolist()
    for j in range(int(indptr[lo]), int(indptr[hi])):
        out[ids[j]] += 1
    return np.asarray(out, dtype=np.int64)
