"""Undirected and directed simple graphs, metrics, products and canonical forms.

Vertices are always the dense integers ``0..n-1``. Edges of a :class:`Graph`
are stored as a sorted tuple of pairs ``(u, v)`` with ``u < v``; this order is
the one used to index orientation bits everywhere else in the package.
"""

from __future__ import annotations

import hashlib
import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

INFINITE = math.inf
"""Distance between vertices in different components; compares above every int."""

CANON_CAP = 10
CHROMATIC_CAP = 16


class CapExceeded(ValueError):
    """An exhaustive routine was asked to run above its configured size cap."""


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "edges", "masks", "_index", "__dict__")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise ValueError(f"negative vertex count {n}")
        norm = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {(u, v)} out of range for n={n}")
            norm.add((u, v) if u < v else (v, u))
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(norm))
        masks = [0] * n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        self.masks: tuple[int, ...] = tuple(masks)
        self._index = {e: i for i, e in enumerate(self.edges)}

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.masks[u] >> v & 1)

    def edge_index(self, u: int, v: int) -> int:
        return self._index[(u, v) if u < v else (v, u)]

    def neighbors(self, u: int) -> list[int]:
        return list(_bits(self.masks[u]))

    def degree(self, u: int) -> int:
        return bin(self.masks[u]).count("1")

    @cached_property
    def distances(self) -> "DistanceMatrix":
        return distance_matrix(self)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph, relabelled in the order ``vertices`` is given."""
        pos = {v: i for i, v in enumerate(vertices)}
        return Graph(len(vertices), [(pos[u], pos[v]) for u, v in self.edges
                                     if u in pos and v in pos])

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash(("G", self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={list(self.edges)})"


class Digraph:
    """Immutable digraph without loops and without opposite arc pairs."""

    __slots__ = ("n", "arcs", "out_masks", "in_masks", "__dict__")

    def __init__(self, n: int, arcs: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise ValueError(f"negative vertex count {n}")
        norm = set()
        for a in arcs:
            u, v = int(a[0]), int(a[1])
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc {(u, v)} out of range for n={n}")
            norm.add((u, v))
        for u, v in norm:
            if (v, u) in norm:
                raise ValueError(f"opposite arcs between {u} and {v}")
        self.n = n
        self.arcs: tuple[tuple[int, int], ...] = tuple(sorted(norm))
        out_m = [0] * n
        in_m = [0] * n
        for u, v in self.arcs:
            out_m[u] |= 1 << v
            in_m[v] |= 1 << u
        self.out_masks: tuple[int, ...] = tuple(out_m)
        self.in_masks: tuple[int, ...] = tuple(in_m)

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out_masks[u] >> v & 1)

    def out_neighbors(self, u: int) -> list[int]:
        return list(_bits(self.out_masks[u]))

    def in_neighbors(self, u: int) -> list[int]:
        return list(_bits(self.in_masks[u]))

    @cached_property
    def shadow(self) -> Graph:
        """Underlying undirected graph."""
        return Graph(self.n, self.arcs)

    def reverse(self) -> "Digraph":
        return Digraph(self.n, [(v, u) for u, v in self.arcs])

    def relabel(self, perm: Sequence[int]) -> "Digraph":
        return Digraph(self.n, [(perm[u], perm[v]) for u, v in self.arcs])

    def induced(self, vertices: Sequence[int]) -> "Digraph":
        pos = {v: i for i, v in enumerate(vertices)}
        return Digraph(len(vertices), [(pos[u], pos[v]) for u, v in self.arcs
                                       if u in pos and v in pos])

    def is_acyclic(self) -> bool:
        return topological_order(self) is not None

    def __eq__(self, other):
        return isinstance(other, Digraph) and self.n == other.n and self.arcs == other.arcs

    def __hash__(self):
        return hash(("D", self.n, self.arcs))

    def __repr__(self):
        return f"Digraph(n={self.n}, arcs={list(self.arcs)})"


def topological_order(d: Digraph) -> list[int] | None:
    """Kahn order (smallest available vertex first), or None if ``d`` has a directed cycle."""
    indeg = [bin(m).count("1") for m in d.in_masks]
    ready = [v for v in range(d.n) if indeg[v] == 0]
    order = []
    while ready:
        ready.sort()
        v = ready.pop(0)
        order.append(v)
        for w in _bits(d.out_masks[v]):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return order if len(order) == d.n else None


# ---------------------------------------------------------------------------
# metric
# ---------------------------------------------------------------------------

DistanceMatrix = tuple  # tuple[tuple[int | float, ...], ...]


def bfs_distances(g: Graph, source: int, removed: int = 0) -> list:
    """Hop distances from ``source`` avoiding the vertices in bitmask ``removed``."""
    dist = [INFINITE] * g.n
    dist[source] = 0
    seen = (1 << source) | removed
    frontier = 1 << source
    level = 0
    masks = g.masks
    while frontier:
        level += 1
        nxt = 0
        for u in _bits(frontier):
            nxt |= masks[u]
        nxt &= ~seen
        seen |= nxt
        for v in _bits(nxt):
            dist[v] = level
        frontier = nxt
    return dist


def distance_matrix(g: Graph) -> DistanceMatrix:
    """All-pairs hop distances by one BFS per vertex; INFINITE across components."""
    return tuple(tuple(bfs_distances(g, s)) for s in range(g.n))


def components(g: Graph) -> list[list[int]]:
    left = (1 << g.n) - 1
    comps = []
    while left:
        s = (left & -left).bit_length() - 1
        seen = 1 << s
        frontier = seen
        while frontier:
            nxt = 0
            for u in _bits(frontier):
                nxt |= g.masks[u]
            frontier = nxt & ~seen
            seen |= frontier
        comps.append(list(_bits(seen)))
        left &= ~seen
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


def max_component_diameter(g: Graph) -> int:
    """Largest finite eccentricity; 0 for graphs without edges."""
    best = 0
    for row in g.distances:
        for x in row:
            if x != INFINITE and x > best:
                best = x
    return best


def girth(g: Graph):
    """Length of a shortest cycle, INFINITE for forests."""
    best = INFINITE
    for s in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[s] = 0
        queue = [s]
        for u in queue:
            for v in _bits(g.masks[u]):
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif parent[u] != v:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


# ---------------------------------------------------------------------------
# builders and products
# ---------------------------------------------------------------------------

def complete_graph(m: int) -> Graph:
    if m < 1:
        raise ValueError("complete graph needs m >= 1")
    return Graph(m, itertools.combinations(range(m), 2))


def cycle_graph(m: int) -> Graph:
    if m < 3:
        raise ValueError("cycle needs m >= 3")
    return Graph(m, [(i, (i + 1) % m) for i in range(m)])


def path_graph(m: int) -> Graph:
    if m < 1:
        raise ValueError("path needs m >= 1")
    return Graph(m, [(i, i + 1) for i in range(m - 1)])


def empty_graph(m: int) -> Graph:
    return Graph(m)


def build(kind: str, m: int) -> Graph:
    """``build("complete"|"cycle"|"path", m)``."""
    try:
        maker = {"complete": complete_graph, "cycle": cycle_graph, "path": path_graph}[kind]
    except KeyError:
        raise ValueError(f"unknown graph kind {kind!r}") from None
    return maker(m)


def product_vertex(a: int, b: int, h_n: int) -> int:
    """Index of the pair ``(a, b)`` inside ``G x H`` when ``|H| = h_n``."""
    return a * h_n + b


def rectangular_product(g: Graph, h: Graph) -> Graph:
    """Cartesian product; vertex ``(a, b)`` gets index ``a*|H| + b``."""
    k = h.n
    edges = []
    for a in range(g.n):
        for b1, b2 in h.edges:
            edges.append((a * k + b1, a * k + b2))
    for a1, a2 in g.edges:
        for b in range(k):
            edges.append((a1 * k + b, a2 * k + b))
    return Graph(g.n * k, edges)


def acyclic_orientation(g: Graph, order: Sequence[int]) -> Digraph:
    """Orient each edge from the endpoint that comes first in ``order``."""
    if sorted(order) != list(range(g.n)):
        raise ValueError("order must be a permutation of 0..n-1")
    rank = {v: i for i, v in enumerate(order)}
    return Digraph(g.n, [(u, v) if rank[u] < rank[v] else (v, u) for u, v in g.edges])


# ---------------------------------------------------------------------------
# chromatic number
# ---------------------------------------------------------------------------

def _greedy_clique(g: Graph) -> list[int]:
    best: list[int] = []
    for start in range(g.n):
        clique = [start]
        cand = g.masks[start]
        while cand:
            v = max(_bits(cand), key=lambda x: bin(g.masks[x] & cand).count("1"))
            clique.append(v)
            cand &= g.masks[v]
        if len(clique) > len(best):
            best = clique
    return best


def optimal_coloring(g: Graph, cap: int = CHROMATIC_CAP) -> list[int]:
    """A proper colouring with ``chromatic_number(g)`` colours (0-based)."""
    if g.n > cap:
        raise CapExceeded(f"chromatic number capped at {cap} vertices, got {g.n}")
    if g.n == 0:
        return []
    clique = _greedy_clique(g)
    # DSATUR branch and bound; the clique is pre-coloured 0..|clique|-1
    colors = [-1] * g.n
    for i, v in enumerate(clique):
        colors[v] = i
    best = [None]
    best_k = [g.n + 1]

    def pick():
        chosen, key = -1, None
        for v in range(g.n):
            if colors[v] >= 0:
                continue
            sat = {colors[w] for w in _bits(g.masks[v]) if colors[w] >= 0}
            k = (len(sat), g.degree(v))
            if key is None or k > key:
                chosen, key = v, k
        return chosen

    def rec(used: int, colored: int):
        if used >= best_k[0]:
            return
        if colored == g.n:
            best_k[0] = used
            best[0] = colors.copy()
            return
        v = pick()
        forbidden = {colors[w] for w in _bits(g.masks[v]) if colors[w] >= 0}
        for c in range(min(used + 1, best_k[0] - 1)):
            if c in forbidden:
                continue
            colors[v] = c
            rec(max(used, c + 1), colored + 1)
            colors[v] = -1
            if best_k[0] == len(clique):
                return

    rec(len(clique), len(clique))
    return best[0]


def chromatic_number(g: Graph, cap: int = CHROMATIC_CAP) -> int:
    if g.n < 1:
        raise ValueError("chromatic number needs n >= 1")
    return max(optimal_coloring(g, cap)) + 1


# ---------------------------------------------------------------------------
# canonical forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class CanonicalForm:
    """Relabelling-invariant key. ``exact`` is False for the hash offered above the cap."""

    key: tuple
    exact: bool = True


def _code_matrix(x: Union[Graph, Digraph]) -> list[list[int]]:
    n = x.n
    mat = [[0] * n for _ in range(n)]
    if isinstance(x, Graph):
        for u, v in x.edges:
            mat[u][v] = mat[v][u] = 1
    else:
        for u, v in x.arcs:
            mat[u][v] = 1
            mat[v][u] = 2
    return mat


def _refine(mat: list[list[int]]) -> list[int]:
    n = len(mat)
    colors = [0] * n
    count = 1
    while True:
        sigs = [(colors[u], tuple(sorted((mat[u][v], colors[v]) for v in range(n) if mat[u][v])))
                for u in range(n)]
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [ranks[s] for s in sigs]
        if len(ranks) == count:
            return colors
        count = len(ranks)


def _canonical_columns(mat: list[list[int]]) -> tuple:
    n = len(mat)
    colors = _refine(mat)
    cseq = sorted(colors)
    twins = [[False] * n for _ in range(n)]
    for x in range(n):
        for y in range(x + 1, n):
            if mat[x][y] == mat[y][x] and all(
                mat[x][w] == mat[y][w] for w in range(n) if w != x and w != y
            ):
                twins[x][y] = twins[y][x] = True

    best: list = []
    version = [0]
    perm: list[int] = []
    placed = [False] * n

    def dfs(j: int, equal: bool):
        # equal: perm's columns so far coincide with best's
        if j == n:
            if not best or not equal:
                best[:] = cols[:]
                version[0] += 1
            return
        tried: list[int] = []
        for v in range(n):
            if placed[v] or colors[v] != cseq[j]:
                continue
            if any(twins[v][t] for t in tried):
                continue
            tried.append(v)
            col = tuple(mat[perm[i]][v] for i in range(j))
            eq_here = equal
            if best and equal:
                if col > best[j]:
                    continue
                eq_here = col == best[j]
            perm.append(v)
            cols.append(col)
            placed[v] = True
            before = version[0]
            dfs(j + 1, eq_here)
            placed[v] = False
            cols.pop()
            perm.pop()
            if version[0] != before:
                equal = True

    cols: list = []
    dfs(0, True)
    return tuple(best)


def canonical_form(x: Union[Graph, Digraph], cap: int = CANON_CAP, allow_hash: bool = False) -> CanonicalForm:
    """Exact canonical key for ``n <= cap``; above it a WL hash if ``allow_hash``."""
    tag = "G" if isinstance(x, Graph) else "D"
    mat = _code_matrix(x)
    if x.n > cap:
        if not allow_hash:
            raise CapExceeded(f"exact canonical form capped at {cap} vertices, got {x.n}")
        colors = _refine(mat)
        summary = tuple(sorted(
            (colors[u], tuple(sorted((mat[u][v], colors[v]) for v in range(x.n) if mat[u][v])))
            for u in range(x.n)))
        digest = hashlib.sha256(repr(summary).encode()).hexdigest()
        return CanonicalForm((tag, x.n, digest), exact=False)
    return CanonicalForm((tag, x.n, _canonical_columns(mat)))


def is_isomorphic(a: Union[Graph, Digraph], b: Union[Graph, Digraph], cap: int = CANON_CAP) -> bool:
    if type(a) is not type(b) or a.n != b.n:
        return False
    if isinstance(a, Graph) and a.m != b.m:
        return False
    if isinstance(a, Digraph) and len(a.arcs) != len(b.arcs):
        return False
    return canonical_form(a, cap) == canonical_form(b, cap)
