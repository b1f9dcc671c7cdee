"""Degree/expansion conditions for tree embedding and the greedy inductive embedder.

Indices follow the sequences ``w_1..w_{n-1}`` and ``d_1..d_{n-1}``; a tree on
``k + 1`` vertices is placed using ``w_k`` and ``d_k``. Real parameters are
compared against integer counts as exact fractions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arrows import EmbeddingCertificate, Orientation, Variant
from .graph import CapExceeded, Digraph, Graph, _bits, bfs_distances

COND1_CAP = 10 ** 7
SUBSET_CAP = 20
DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class PikhParameters:
    n: int
    w: tuple[float, ...]
    d: tuple[float, ...]
    mode: str = "isometric"

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(self.w))
        object.__setattr__(self, "d", tuple(self.d))
        if self.n < 1:
            raise ValueError("n must be positive")
        if len(self.w) != self.n - 1 or len(self.d) != self.n - 1:
            raise ValueError(f"w and d need {self.n - 1} entries each")
        if any(x <= 0 for x in self.w + self.d):
            raise ValueError("w and d entries must be positive")
        if self.mode not in ("isometric", "plain"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def w_k(self, k: int) -> float:
        return self.w[k - 1]

    def d_k(self, k: int) -> float:
        return self.d[k - 1]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# condition 1: few neighbours of v close to the already placed vertices
# ---------------------------------------------------------------------------

def blocked_set(g: Graph, v: int, s: Sequence[int], mode: str = "isometric") -> list[int]:
    """Neighbours y of v outside ``s`` with ``dist_{G-v}(y, s_i) <= i`` (``<= 1`` in plain mode)."""
    removed = 1 << v
    inside = set(s) | {v}
    out = set()
    for i, si in enumerate(s, 1):
        radius = i if mode == "isometric" else 1
        dist = bfs_distances(g, si, removed)
        for y in g.neighbors(v):
            if y not in inside and dist[y] <= radius:
                out.add(y)
    return sorted(out)


def _balls(g: Graph, v: int, max_radius: int) -> list[list[int]]:
    """``balls[s][r]``: bitmask of vertices within ``r`` of ``s`` in ``G - v``."""
    removed = 1 << v
    table = []
    for s in range(g.n):
        if s == v:
            table.append([0] * (max_radius + 1))
            continue
        dist = bfs_distances(g, s, removed)
        row = []
        for r in range(max_radius + 1):
            row.append(sum(1 << x for x in range(g.n) if dist[x] <= r))
        table.append(row)
    return table


def check_condition1(g: Graph, k: int, d_k: float, mode: str = "isometric"):
    """None if every ``(v, s_1..s_{k-1})`` has ``|Y| <= d_k``, else the first ``(v, S, Y)`` violating it."""
    if k < 2:
        raise ValueError("condition 1 needs k >= 2")
    if g.n ** k > COND1_CAP:
        raise CapExceeded(f"condition 1 scan capped at |V|^k <= {COND1_CAP}")
    bound = _frac(d_k)
    radius = k - 1 if mode == "isometric" else 1
    for v in range(g.n):
        balls = _balls(g, v, radius)
        nbrs = g.masks[v]
        others = [x for x in range(g.n) if x != v]
        # in plain mode the order of S is irrelevant
        tuples = (itertools.permutations(others, k - 1) if mode == "isometric"
                  else itertools.combinations(others, k - 1))
        for s in tuples:
            near = 0
            s_mask = 0
            for i, si in enumerate(s, 1):
                near |= balls[si][min(i, radius)]
                s_mask |= 1 << si
            y = nbrs & near & ~s_mask
            if y.bit_count() > bound:
                return v, tuple(s), sorted(_bits(y))
    return None


# ---------------------------------------------------------------------------
# condition 2: large sets span many edges
# ---------------------------------------------------------------------------

def min_edge_span(g: Graph, m: int) -> int:
    """Fewest edges spanned by an ``m``-subset, by scanning every subset of that size."""
    if g.n > SUBSET_CAP:
        raise CapExceeded(f"subset scan capped at {SUBSET_CAP} vertices")
    if not 0 <= m <= g.n:
        raise ValueError(f"subset size {m} out of range")
    masks = g.masks
    best = None
    for w in itertools.combinations(range(g.n), m):
        sel = sum(1 << x for x in w)
        e = sum((masks[x] & sel).bit_count() for x in w) // 2
        if best is None or e < best:
            best = e
            if best == 0:
                break
    return best


def _span_table(g: Graph) -> np.ndarray:
    """Edges spanned by every vertex subset, indexed by bitmask."""
    n = g.n
    span = np.zeros(1 << n, dtype=np.int32)
    for b in range(n):
        lo = np.arange(1 << b, dtype=np.uint32)
        span[1 << b: 1 << (b + 1)] = span[:1 << b] + np.bitwise_count(lo & np.uint32(g.masks[b]))
    return span


def min_span_by_size(g: Graph) -> tuple[list[int], list[int]]:
    """Per cardinality, the minimum spanned edge count and the first mask attaining it."""
    if g.n > SUBSET_CAP:
        raise CapExceeded(f"exact subset scan capped at {SUBSET_CAP} vertices")
    span = _span_table(g)
    sizes = np.bitwise_count(np.arange(1 << g.n, dtype=np.uint32))
    best, where = [], []
    for m in range(g.n + 1):
        idx = np.flatnonzero(sizes == m)
        j = int(np.argmin(span[idx]))
        best.append(int(span[idx[j]]))
        where.append(int(idx[j]))
    return best, where


def _cond2_violates(edges: int, size: int, k: int, w_k, d_k) -> bool:
    w, d = _frac(w_k), _frac(d_k)
    return size > w and not edges > (d + k - 1) * w


def check_condition2(g: Graph, k: int, w_k: float, d_k: float, exactness: str = "exact",
                     trials: int = 1000, seed: int = 0):
    """None if no violating set is found, else ``(W, spanned)``.

    Exact mode scans all subsets, so None certifies the condition. Sampled mode
    only ever falsifies.
    """
    if exactness == "exact":
        best, where = min_span_by_size(g)
        for m in range(g.n + 1):
            if _cond2_violates(best[m], m, k, w_k, d_k):
                return sorted(_bits(where[m])), best[m]
        return None
    if exactness != "sampled":
        raise ValueError(f"unknown exactness {exactness!r}")
    lo = int(_frac(w_k)) + 1
    if lo > g.n:
        return None
    rng = random.Random(seed)
    masks = g.masks
    for _ in range(trials):
        m = rng.randint(lo, g.n)
        w = rng.sample(range(g.n), m)
        sel = sum(1 << x for x in w)
        e = sum((masks[x] & sel).bit_count() for x in w) // 2
        if _cond2_violates(e, m, k, w_k, d_k):
            return sorted(w), e
    return None


def check_condition3(w: Sequence[float], n_vertices: int) -> bool:
    return sum((_frac(x) for x in w), Fraction(0)) < n_vertices


@dataclass
class ConditionReport:
    cond1_ok: bool
    cond2_ok: bool | None
    cond3_ok: bool
    cond1_witness: dict | None = None
    cond2_witness: dict | None = None
    cond3_witness: dict | None = None

    @property
    def all_ok(self) -> bool:
        return bool(self.cond1_ok and self.cond2_ok and self.cond3_ok)

    def to_json(self) -> dict:
        return {"cond1_ok": self.cond1_ok, "cond2_ok": self.cond2_ok, "cond3_ok": self.cond3_ok,
                "cond1_witness": self.cond1_witness, "cond2_witness": self.cond2_witness,
                "cond3_witness": self.cond3_witness}


def check_conditions(g: Graph, params: PikhParameters, exactness: str = "exact",
                     trials: int = 1000, seed: int = 0) -> ConditionReport:
    """All three conditions for ``2 <= k < n``; the first failing ``k`` supplies each witness."""
    c1, c2 = None, None
    c2_ok: bool | None = True
    for k in range(2, params.n):
        if c1 is None:
            hit = check_condition1(g, k, params.d_k(k), params.mode)
            if hit is not None:
                c1 = {"k": k, "v": hit[0], "S": list(hit[1]), "Y": hit[2]}
        if c2 is None:
            hit = check_condition2(g, k, params.w_k(k), params.d_k(k), exactness, trials, seed)
            if hit is not None:
                c2 = {"k": k, "W": hit[0], "spanned": hit[1]}
    if c2 is not None:
        c2_ok = False
    elif exactness == "sampled" and params.n > 2:
        c2_ok = None
    c3 = check_condition3(params.w, g.n)
    c3_w = None if c3 else {"sum_w": float(sum(_frac(x) for x in params.w)), "n_vertices": g.n}
    return ConditionReport(c1 is None, c2_ok, c3, c1, c2, c3_w)


# ---------------------------------------------------------------------------
# greedy inductive embedding
# ---------------------------------------------------------------------------

@dataclass
class FailureTrace:
    """The first induction step that ran out of candidates.

    ``pool`` is the set of vertices the new tree vertex could go to, and it is
    the out- (or in-) neighbourhood of ``anchor`` in ``U`` minus ``placed`` and
    ``blocked``; it is empty by construction.
    """

    step: int
    anchor: int | None
    placed: list[int]
    U: list[int]
    W: list[int]
    blocked: list[int]
    outward: bool
    pool: list[int] = field(default_factory=list)
    nodes: int = 0
    reason: str = "no candidate"

    def to_json(self) -> dict:
        return {"step": self.step, "anchor": self.anchor, "placed": self.placed, "U": self.U,
                "W": self.W, "blocked": self.blocked, "outward": self.outward, "pool": self.pool,
                "nodes": self.nodes, "reason": self.reason}


def _pendant(tree: Digraph) -> tuple[int, int]:
    shadow = tree.shadow
    for x in range(tree.n):
        if shadow.degree(x) == 1:
            return x, shadow.neighbors(x)[0]
    raise ValueError("tree has no pendant vertex")


class _Greedy:
    def __init__(self, g: Graph, o: Orientation, params: PikhParameters, budget: int):
        self.g, self.o, self.params = g, o, params
        self.out = o.out_masks
        inn = [0] * g.n
        for u, v in o.arcs:
            inn[v] |= 1 << u
        self.inn = inn
        self.budget = budget
        self.nodes = 0
        self.failure: FailureTrace | None = None
        self.dist = g.distances

    def fail(self, trace: FailureTrace):
        if self.failure is None:
            self.failure = trace

    def embed(self, tree: Digraph, U: int):
        """Yield maps ``tree -> U`` one at a time."""
        self.nodes += 1
        if self.nodes > self.budget:
            return
        if tree.n == 1:
            if not U:
                self.fail(FailureTrace(1, None, [], [], [], [], True, reason="empty vertex set"))
            for x in _bits(U):
                yield (x,)
            return
        k = tree.n - 1
        leaf, t = _pendant(tree)
        outward = tree.has_arc(t, leaf)
        adj = self.out if outward else self.inn
        limit = _frac(self.params.d_k(k)) + k - 1
        W = 0
        for x in _bits(U):
            if (adj[x] & U).bit_count() <= limit:
                W |= 1 << x
        rest = [x for x in range(tree.n) if x != leaf]
        sub = tree.induced(rest)
        t_sub = rest.index(t)
        for f in self.embed(sub, U & ~W):
            v = f[t_sub]
            others = [f[i] for i in range(len(rest)) if i != t_sub]
            s = sorted(others, key=lambda x: (self.dist[v][x], x))
            Y = blocked_set(self.g, v, s, self.params.mode)
            placed = 1 << v
            for x in others:
                placed |= 1 << x
            block = sum(1 << y for y in Y)
            pool = adj[v] & U & ~placed & ~block
            if not pool:
                self.fail(FailureTrace(tree.n, v, sorted(f), sorted(_bits(U)), sorted(_bits(W)),
                                       Y, outward, [], self.nodes))
                continue
            for y in _bits(pool):
                mapping = [0] * tree.n
                for i, x in enumerate(rest):
                    mapping[x] = f[i]
                mapping[leaf] = y
                yield tuple(mapping)
            if self.nodes > self.budget:
                return


def greedy_tree_embed(g: Graph, o: Orientation, tree: Digraph, params: PikhParameters,
                      budget: int = DEFAULT_BUDGET) -> EmbeddingCertificate | FailureTrace:
    """Place ``tree`` by peeling pendant vertices, as in the expansion argument.

    Each step drops the low-degree set ``W`` before recursing, then attaches the
    pendant vertex to a neighbour of its anchor avoiding the blocked set. The
    search backtracks over earlier choices; the returned trace is the first
    dead end met.
    """
    if tree.n != params.n:
        raise ValueError(f"tree has {tree.n} vertices, parameters are for {params.n}")
    if o.host != g:
        raise ValueError("orientation is not on g")
    run = _Greedy(g, o, params, budget)
    variant = Variant.ISOMETRIC if params.mode == "isometric" else Variant.ORIENTED
    for f in run.embed(tree, (1 << g.n) - 1):
        return EmbeddingCertificate(tree, o, f, variant)
    trace = run.failure or FailureTrace(tree.n, None, [], [], [], [], True, reason="budget exhausted")
    if run.nodes > budget:
        trace.reason = "budget exhausted"
    trace.nodes = run.nodes
    return trace
