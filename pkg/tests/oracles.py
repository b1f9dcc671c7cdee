"""Independent reference implementations shared by the unit and acceptance tests."""

import itertools
from collections import defaultdict
from functools import lru_cache

import numpy as np

from oriray.graph import Graph


def floyd_warshall(g: Graph) -> np.ndarray:
    d = np.full((g.n, g.n), np.inf)
    np.fill_diagonal(d, 0)
    for u, v in g.edges:
        d[u, v] = d[v, u] = 1
    for k in range(g.n):
        d = np.minimum(d, d[:, [k]] + d[[k], :])
    return d


def prufer_tree(seq, n):
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(i for i in range(n) if degree[i] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [i for i in range(n) if degree[i] == 1]
    edges.append((u, v))
    return edges


def centers(n, nbrs):
    degree = {v: len(nbrs[v]) for v in range(n)}
    layer = [v for v in range(n) if degree[v] <= 1]
    left = n
    while left > 2:
        left -= len(layer)
        nxt = []
        for v in layer:
            for y, _ in nbrs[v]:
                degree[y] -= 1
                if degree[y] == 1:
                    nxt.append(y)
        layer = nxt
    return layer


def ahu_code(n, arcs):
    """Canonical string of an oriented tree: rooted encoding at the centre(s), each
    child tagged with the direction of its arc."""
    nbrs = defaultdict(list)
    for u, v in arcs:
        nbrs[u].append((v, "o"))
        nbrs[v].append((u, "i"))

    def enc(x, parent):
        kids = sorted(tag + enc(y, x) for y, tag in nbrs[x] if y != parent)
        return "(" + "".join(kids) + ")"

    return min(enc(r, None) for r in centers(n, nbrs))


@lru_cache(maxsize=None)
def oracle_oriented_tree_count(n):
    if n == 1:
        return 1
    if n == 2:
        return 1
    codes = set()
    for seq in itertools.product(range(n), repeat=n - 2):
        edges = prufer_tree(seq, n)
        for flips in range(1 << (n - 1)):
            arcs = [(v, u) if flips >> i & 1 else (u, v) for i, (u, v) in enumerate(edges)]
            codes.add(ahu_code(n, arcs))
    return len(codes)
