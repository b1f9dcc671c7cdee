"""Digraph families: directed paths, oriented trees, the small-graph atlas, Gamma doubling."""

from __future__ import annotations

from functools import lru_cache

from .graph import (CapExceeded, Digraph, Graph, canonical_form, is_connected)

TREE_CAP = 9
ATLAS_CAP = 7


def directed_path(n: int) -> Digraph:
    """I_n: vertices 0..n-1 with arcs (i-1, i)."""
    if n < 1:
        raise ValueError("directed path needs n >= 1")
    return Digraph(n, [(i - 1, i) for i in range(1, n)])


def is_oriented_tree(d: Digraph) -> bool:
    return len(d.arcs) == d.n - 1 and is_connected(d.shadow)


@lru_cache(maxsize=None)
def _free_trees(n: int) -> tuple[Graph, ...]:
    if n == 1:
        return (Graph(1),)
    seen = {}
    for t in _free_trees(n - 1):
        for v in range(n - 1):
            bigger = Graph(n, list(t.edges) + [(v, n - 1)])
            seen.setdefault(canonical_form(bigger), bigger)
    return tuple(seen[k] for k in sorted(seen))


def free_trees(n: int, cap: int = TREE_CAP) -> list[Graph]:
    """Unlabelled trees on ``n`` vertices, by leaf augmentation."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise CapExceeded(f"tree enumeration capped at {cap}, got {n}")
    return list(_free_trees(n))


@lru_cache(maxsize=None)
def _oriented_trees(n: int) -> tuple[Digraph, ...]:
    found = {}
    for t in _free_trees(n):
        m = t.m
        for mask in range(1 << m):
            arcs = [(v, u) if mask >> i & 1 else (u, v) for i, (u, v) in enumerate(t.edges)]
            d = Digraph(n, arcs)
            found.setdefault(canonical_form(d), d)
    return tuple(found[k] for k in sorted(found))


def enumerate_oriented_trees(n: int, cap: int = TREE_CAP) -> list[Digraph]:
    """One representative per isomorphism class of oriented trees on ``n`` vertices.

    Ordered by canonical form, so the list is stable across runs.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise CapExceeded(f"tree enumeration capped at {cap}, got {n}")
    return list(_oriented_trees(n))


@lru_cache(maxsize=None)
def _atlas(n: int) -> tuple[Graph, ...]:
    if n == 1:
        return (Graph(1),)
    found = {}
    for g in _atlas(n - 1):
        for nbhd in range(1 << (n - 1)):
            edges = list(g.edges) + [(v, n - 1) for v in range(n - 1) if nbhd >> v & 1]
            h = Graph(n, edges)
            found.setdefault(canonical_form(h), h)
    return tuple(found[k] for k in sorted(found, key=lambda k: (len(found[k].edges), k)))


def enumerate_graphs(n: int, cap: int = ATLAS_CAP) -> list[Graph]:
    """All graphs on ``n`` vertices up to isomorphism, ordered by (edge count, canonical form)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise CapExceeded(f"graph atlas capped at {cap}, got {n}")
    return list(_atlas(n))


def gamma_vertex(v: int, layer: int, h_n: int) -> int:
    """Index of ``(v, layer)`` in the doubled digraph."""
    return layer * h_n + v


def gamma_construction(h: Digraph, root: int) -> Digraph:
    """Two copies of ``h``, the second reversed, joined by the arc (root,0) -> (root,1)."""
    if not 0 <= root < h.n:
        raise ValueError(f"root {root} out of range")
    if not h.is_acyclic():
        raise ValueError("gamma construction needs an acyclic digraph")
    if not is_connected(h.shadow):
        raise ValueError("gamma construction needs a connected digraph")
    k = h.n
    arcs = [(root, k + root)]
    for u, v in h.arcs:
        arcs.append((u, v))
        arcs.append((k + v, k + u))
    return Digraph(2 * k, arcs)
