"""Explicit constructions: product pigeonhole embedding, the tower family,
BFS-parity orientations, comparability tools and weak homomorphisms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .arrows import (EDGE_CAP, EmbeddingCertificate, Orientation, Variant, arrow_check,
                     ddiam, find_embedding)
from .catalog import directed_path
from .graph import (CapExceeded, Digraph, Graph, _bits, bfs_distances, chromatic_number,
                    complete_graph, is_connected, optimal_coloring, rectangular_product)

SubEmbedder = Callable[[Orientation, Digraph], "EmbeddingCertificate | None"]

TOWER_MATERIALIZE_CAP = 4
TRANSITIVE_EDGE_CAP = 45
CHORD_CAP = 10


class EmbeddingError(RuntimeError):
    """A sub-embedder could not place the smaller tree."""


# ---------------------------------------------------------------------------
# product pigeonhole embedding and the tower
# ---------------------------------------------------------------------------

def copy_orientation(host: Orientation, g: Graph, copies: int, u: int) -> Orientation:
    """Orientation of ``g`` inherited by the layer ``g x {u}`` of ``g x K_copies``."""
    flags = []
    for a, b in g.edges:
        flags.append(0 if host.has_arc(a * copies + u, b * copies + u) else 1)
    return Orientation.from_flags(g, flags)


def _pendant(tree: Digraph) -> tuple[int, int]:
    """Smallest-index leaf of the tree and its neighbour."""
    shadow = tree.shadow
    for v in range(tree.n):
        if shadow.degree(v) == 1:
            return v, shadow.neighbors(v)[0]
    raise ValueError("tree has no pendant vertex")


def exact_sub_embedder(o: Orientation, tree: Digraph) -> EmbeddingCertificate | None:
    return find_embedding(tree, o, Variant.ISOMETRIC)


def pigeonhole_embed(g: Graph, sub_embedder: SubEmbedder, host: Orientation,
                     tree: Digraph) -> EmbeddingCertificate:
    """Isometric copy of ``tree`` in an orientation of ``g x K_q`` (``q > |g|``).

    The tree minus a pendant vertex is embedded in every layer ``g x {u}``
    until two layers put the attachment vertex over the same vertex of ``g``;
    the K_q edge between those two images, read in whichever direction the
    host orients it, carries the pendant vertex.
    """
    if g.n == 0 or host.host.n % g.n:
        raise ValueError("host is not a product with g")
    q = host.host.n // g.n
    if q - 1 < g.n:
        raise ValueError(f"need at least |g|+1 = {g.n + 1} layers, got {q}")
    if host.host != rectangular_product(g, complete_graph(q)):
        raise ValueError("host graph is not g x K_q")
    if tree.n == 1:
        return EmbeddingCertificate(tree, host, (0,), Variant.ISOMETRIC)
    leaf, t = _pendant(tree)
    rest = [v for v in range(tree.n) if v != leaf]
    sub = tree.induced(rest)
    t_sub = rest.index(t)
    first_layer: dict[int, tuple[int, tuple[int, ...]]] = {}
    pair = None
    for w in range(q):
        cert = sub_embedder(copy_orientation(host, g, q, w), sub)
        if cert is None:
            raise EmbeddingError(f"sub-embedder failed on layer {w}")
        base = cert.map[t_sub]
        if base in first_layer:
            pair = (first_layer[base], (w, cert.map))
            break
        first_layer[base] = (w, cert.map)
    # q > |g| layers cannot all have distinct attachment images
    assert pair is not None, "pigeonhole failed"
    (u, f_u), (w, f_w) = pair
    base = f_u[t_sub]
    x_u, x_w = base * q + u, base * q + w
    outward = tree.has_arc(t, leaf)
    if outward == host.has_arc(x_u, x_w):
        layer, f_sub, leaf_img = u, f_u, x_w
    else:
        layer, f_sub, leaf_img = w, f_w, x_u
    mapping = [0] * tree.n
    for i, v in enumerate(rest):
        mapping[v] = f_sub[i] * q + layer
    mapping[leaf] = leaf_img
    return EmbeddingCertificate(tree, host, tuple(mapping), Variant.ISOMETRIC)


@dataclass
class TowerFamily:
    """Levels G_1 = K_1, G_{k+1} = G_k x K_{|G_k|+1}; G_k arrows all oriented trees on k vertices."""

    graphs: list[Graph]
    sizes: list[int]


def tower_sizes(n: int) -> list[int]:
    sizes = [1]
    while len(sizes) < n:
        a = sizes[-1]
        sizes.append(a * (a + 1))
    return sizes[:n]


def tower_family(n: int, materialize: int | None = None) -> TowerFamily:
    if n < 1:
        raise ValueError("n must be positive")
    if materialize is None:
        materialize = min(n, TOWER_MATERIALIZE_CAP)
    if materialize > TOWER_MATERIALIZE_CAP:
        raise CapExceeded(f"tower graphs materialised up to level {TOWER_MATERIALIZE_CAP}")
    graphs = [Graph(1)]
    while len(graphs) < materialize:
        g = graphs[-1]
        graphs.append(rectangular_product(g, complete_graph(g.n + 1)))
    return TowerFamily(graphs[:materialize], tower_sizes(n))


def tower_embedder(level: int) -> SubEmbedder:
    """Embedder for trees on ``level`` vertices in orientations of the level graph,
    built by stacking pigeonhole steps down to K_1."""
    if level == 1:
        return lambda o, tree: EmbeddingCertificate(tree, o, (0,), Variant.ISOMETRIC)
    below = tower_family(level - 1).graphs[-1]
    sub = tower_embedder(level - 1)
    return lambda o, tree: pigeonhole_embed(below, sub, o, tree)


# ---------------------------------------------------------------------------
# BFS parity orientation
# ---------------------------------------------------------------------------

@dataclass
class BfsOrientationResult:
    orientation: Orientation
    norms: list[int]
    root: int


def bfs_parity_orientation(g: Graph, root: int = 0) -> BfsOrientationResult:
    """Edges between layers k and k+1 point outward when k is even and inward when
    k is odd; edges inside a layer go from the smaller to the larger index."""
    if not 0 <= root < g.n:
        raise ValueError(f"root {root} out of range")
    if not is_connected(g):
        raise ValueError("bfs parity orientation needs a connected graph")
    norms = bfs_distances(g, root)
    flags = []
    for u, v in g.edges:
        nu, nv = norms[u], norms[v]
        if nu == nv:
            flags.append(0)
            continue
        low, high = (u, v) if nu < nv else (v, u)
        tail = low if norms[low] % 2 == 0 else high
        flags.append(0 if tail == u else 1)
    return BfsOrientationResult(Orientation.from_flags(g, flags), list(norms), root)


def norm_span_check(r: BfsOrientationResult) -> int:
    """Largest ``| ||u|| - ||v|| |`` over pairs with v reachable from u by a directed path."""
    o = r.orientation
    out = o.out_masks
    span = 0
    for s in range(o.host.n):
        seen = 1 << s
        frontier = seen
        while frontier:
            nxt = 0
            for x in _bits(frontier):
                nxt |= out[x]
            frontier = nxt & ~seen
            seen |= frontier
        for v in _bits(seen):
            span = max(span, abs(r.norms[s] - r.norms[v]))
    return span


# ---------------------------------------------------------------------------
# comparability
# ---------------------------------------------------------------------------

def is_transitive(o: Orientation) -> bool:
    out = o.out_masks
    for x in range(o.host.n):
        reach2 = 0
        for y in _bits(out[x]):
            reach2 |= out[y]
        if reach2 & ~out[x]:
            return False
    return True


def transitive_orientation(g: Graph, cap: int = TRANSITIVE_EDGE_CAP) -> Orientation | None:
    """A transitive orientation of ``g`` or None; backtracking with forced arcs."""
    if g.m > cap:
        raise CapExceeded(f"transitive orientation capped at {cap} edges, got {g.m}")
    n = g.n
    # direction[u][v] = 1 if arc u->v decided, -1 if v->u, 0 open
    direction = [[0] * n for _ in range(n)]
    trail: list[tuple[int, int]] = []

    def put(u: int, v: int) -> bool:
        queue = [(u, v)]
        while queue:
            a, b = queue.pop()
            if direction[a][b] == 1:
                continue
            if direction[a][b] == -1:
                return False
            direction[a][b], direction[b][a] = 1, -1
            trail.append((a, b))
            for c in range(n):
                if c == a or c == b:
                    continue
                # a->b->c needs a->c ; c->a->b needs c->b
                if direction[b][c] == 1:
                    if not g.has_edge(a, c):
                        return False
                    queue.append((a, c))
                if direction[c][a] == 1:
                    if not g.has_edge(c, b):
                        return False
                    queue.append((c, b))
                # a->b with c adjacent to b but not to a forces c->b
                if g.has_edge(b, c) and not g.has_edge(a, c):
                    queue.append((c, b))
                if g.has_edge(a, c) and not g.has_edge(b, c):
                    queue.append((a, c))
        return True

    def undo(mark: int):
        while len(trail) > mark:
            a, b = trail.pop()
            direction[a][b] = direction[b][a] = 0

    def rec(i: int) -> bool:
        while i < g.m and direction[g.edges[i][0]][g.edges[i][1]] != 0:
            i += 1
        if i == g.m:
            return True
        u, v = g.edges[i]
        for a, b in ((u, v), (v, u)):
            mark = len(trail)
            if put(a, b) and rec(i + 1):
                return True
            undo(mark)
        return False

    if not rec(0):
        return None
    o = Orientation.from_flags(g, [0 if direction[u][v] == 1 else 1 for u, v in g.edges])
    assert is_transitive(o)
    return o


def chordless_odd_walk(g: Graph) -> list[int] | None:
    """An odd closed walk ``v_0 .. v_{L-1}`` with ``v_i`` and ``v_{i+2}`` never adjacent, or None.

    Walks may revisit vertices. Steps are arcs ``(x, y)`` of the graph; ``(x, y)``
    may be followed by ``(y, z)`` whenever ``x`` and ``z`` are not adjacent.
    Such a walk of odd length exists iff some strongly connected class of this
    step digraph is not bipartite.
    """
    steps = [(x, y) for x in range(g.n) for y in g.neighbors(x)]
    index = {s: i for i, s in enumerate(steps)}
    succ = [[index[(y, z)] for z in g.neighbors(y) if not g.has_edge(x, z)] for x, y in steps]
    comp = _scc(len(steps), succ)
    for start in range(len(steps)):
        color = {start: 0}
        parent = {start: None}
        queue = [start]
        for a in queue:
            for b in succ[a]:
                if comp[b] != comp[a]:
                    continue
                if b not in color:
                    color[b] = 1 - color[a]
                    parent[b] = a
                    queue.append(b)
                elif color[b] == color[a]:
                    return _odd_walk(steps, succ, comp, a, b)
    return None


def _odd_walk(steps, succ, comp, a, b) -> list[int]:
    """Close the odd cycle found at step ``a -> b`` into an explicit vertex walk."""
    # shortest step paths inside the component, parity-tracked
    target_comp = comp[a]
    start = (b, 0)
    prev = {start: None}
    queue = [start]
    goal = None
    for node in queue:
        s, par = node
        if s == b and par == 1:
            goal = node
            break
        for t in succ[s]:
            if comp[t] != target_comp:
                continue
            nxt = (t, 1 - par)
            if nxt not in prev:
                prev[nxt] = node
                queue.append(nxt)
    assert goal is not None
    seq = []
    node = goal
    while node is not None:
        seq.append(node[0])
        node = prev[node]
    seq.reverse()
    seq.pop()  # closed: last step equals the first
    return [steps[s][0] for s in seq]


def _scc(n: int, succ: list[list[int]]) -> list[int]:
    index = [0] * n
    low = [0] * n
    on = [False] * n
    seen = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = [0, 0]
    for root in range(n):
        if seen[root]:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                seen[v] = True
                index[v] = low[v] = counter[0]
                counter[0] += 1
                stack.append(v)
                on[v] = True
            recurse = False
            for j in range(i, len(succ[v])):
                w = succ[v][j]
                if not seen[w]:
                    work.append((v, j + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on[w] = False
                    comp[w] = counter[1]
                    if w == v:
                        break
                counter[1] += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp


def odd_cycle_chord_check(g: Graph, cap: int = CHORD_CAP) -> bool:
    """True iff every odd cycle of ``g`` has a triangular chord (cycles may repeat vertices)."""
    if g.n > cap:
        raise CapExceeded(f"odd cycle check capped at {cap} vertices, got {g.n}")
    return chordless_odd_walk(g) is None


# ---------------------------------------------------------------------------
# weak homomorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeakHomomorphism:
    source: Graph
    target: Graph
    map: tuple[int, ...]

    def __post_init__(self):
        if len(self.map) != self.source.n:
            raise ValueError("map length differs from source order")
        for u, v in self.source.edges:
            a, b = self.map[u], self.map[v]
            if a != b and not self.target.has_edge(a, b):
                raise ValueError(f"edge {(u, v)} maps to non-edge {(a, b)}")

    def fiber_vertices(self, y: int) -> list[int]:
        return [v for v in range(self.source.n) if self.map[v] == y]

    def fiber(self, y: int) -> Graph:
        """``f^{-1}(y)`` relabelled ``0..k-1`` in increasing source order."""
        return self.source.induced(self.fiber_vertices(y))


def composite_orientation(f: WeakHomomorphism, coloring: Sequence[int],
                          fiber_orientations: Mapping[int, Orientation]) -> Orientation:
    """Cross-fiber edges go up the target colouring, in-fiber edges follow the fiber's orientation."""
    target = f.target
    if len(coloring) != target.n:
        raise ValueError("colouring must cover every target vertex")
    for a, b in target.edges:
        if coloring[a] == coloring[b]:
            raise ValueError(f"colouring is improper on target edge {(a, b)}")
    local = {}
    for y in range(target.n):
        verts = f.fiber_vertices(y)
        fib = f.source.induced(verts)
        if fib.m == 0:
            continue
        o = fiber_orientations.get(y)
        if o is None:
            raise ValueError(f"missing orientation for fiber {y}")
        if o.host != fib:
            raise ValueError(f"orientation for fiber {y} is not on the fiber graph")
        local[y] = (verts, o)
    flags = []
    for u, v in f.source.edges:
        a, b = f.map[u], f.map[v]
        if a != b:
            flags.append(0 if coloring[a] < coloring[b] else 1)
        else:
            verts, o = local[a]
            flags.append(0 if o.has_arc(verts.index(u), verts.index(v)) else 1)
    return Orientation.from_flags(f.source, flags)


@dataclass
class WeakHomBound:
    lhs: int
    rhs: int
    fiber_ddiam: list[int]
    chi_target: int
    best_set: tuple[int, ...]


def weak_hom_bound_check(f: WeakHomomorphism, cap: int = EDGE_CAP) -> WeakHomBound:
    """ddiam_I(source) against the max over at most chi(target) fibers of summed fiber ddiam_I."""
    lhs = ddiam(f.source, "paths", cap=cap)
    fib = [ddiam(f.fiber(y), "paths", cap=cap) for y in range(f.target.n)]
    chi = chromatic_number(f.target)
    best, best_set = 0, ()
    for r in range(1, chi + 1):
        for subset in itertools.combinations(range(f.target.n), r):
            s = sum(fib[y] for y in subset)
            if s > best:
                best, best_set = s, subset
    return WeakHomBound(lhs, best, fib, chi, best_set)


def weak_hom_witness(f: WeakHomomorphism, cap: int = EDGE_CAP) -> tuple[Orientation, int]:
    """Composite orientation built from an optimal target colouring and, per fiber, an
    orientation defeating I_{ddiam+1}. Returns it with the bound m it should respect."""
    coloring = optimal_coloring(f.target)
    orients = {}
    for y in range(f.target.n):
        fib = f.fiber(y)
        if fib.m == 0:
            continue
        k = ddiam(fib, "paths", cap=cap) + 1
        verdict = arrow_check(fib, directed_path(k), Variant.ISOMETRIC, cap=cap)
        assert not verdict.holds
        orients[y] = verdict.witness
    bound = weak_hom_bound_check(f, cap)
    return composite_orientation(f, coloring, orients), bound.rhs
