"""Orientations, embeddings and the three arrow relations.

An orientation of a host graph is a bit per edge, indexed by the host's sorted
edge list; bit 0 orients the edge from its smaller to its larger endpoint. The
integer ``bits`` stores edge 0 in the most significant position, so numeric
order of ``bits`` is lexicographic order of the flag sequence.

Arrow checks are decided by a search over orientation bits rather than by
walking all ``2^m`` orientations: every way of placing a pattern in the host
(ignoring directions) becomes a clause "not all of these edges point the
required way", and an orientation defeats a pattern exactly when it violates
no clause. The depth-first search assigns edges in index order, 0 before 1,
with unit propagation, so the first defeating orientation it meets is the
lexicographically first one.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

from .catalog import directed_path, enumerate_oriented_trees
from .graph import (CapExceeded, Digraph, Graph, _bits, canonical_form,
                    chromatic_number, max_component_diameter, topological_order)

EDGE_CAP = 40
PATH_CAP = 16


class Variant(str, enum.Enum):
    ORIENTED = "oriented"
    ISOMETRIC = "isometric"
    WEAK = "weak"


class Orientation:
    """A direction flag for every edge of ``host``."""

    __slots__ = ("host", "bits", "__dict__")

    def __init__(self, host: Graph, bits: int = 0):
        if not 0 <= bits < (1 << host.m) or (host.m == 0 and bits):
            raise ValueError(f"bits {bits:#x} out of range for {host.m} edges")
        self.host = host
        self.bits = bits

    @classmethod
    def from_flags(cls, host: Graph, flags: Sequence[int]) -> "Orientation":
        if len(flags) != host.m:
            raise ValueError(f"need {host.m} flags, got {len(flags)}")
        bits = 0
        for f in flags:
            bits = bits << 1 | (1 if f else 0)
        return cls(host, bits)

    @classmethod
    def from_digraph(cls, host: Graph, d: Digraph) -> "Orientation":
        if d.shadow != host:
            raise ValueError("digraph is not an orientation of the host")
        return cls.from_flags(host, [0 if d.has_arc(u, v) else 1 for u, v in host.edges])

    @classmethod
    def from_hex(cls, host: Graph, text: str) -> "Orientation":
        return cls(host, int(text, 16) if text else 0)

    def flag(self, i: int) -> int:
        return self.bits >> (self.host.m - 1 - i) & 1

    @property
    def flags(self) -> tuple[int, ...]:
        return tuple(self.flag(i) for i in range(self.host.m))

    def hex(self) -> str:
        width = (self.host.m + 3) // 4
        return format(self.bits, "x").zfill(width) if width else ""

    @cached_property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        return tuple((v, u) if self.flag(i) else (u, v) for i, (u, v) in enumerate(self.host.edges))

    @cached_property
    def out_masks(self) -> tuple[int, ...]:
        out = [0] * self.host.n
        for u, v in self.arcs:
            out[u] |= 1 << v
        return tuple(out)

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out_masks[u] >> v & 1)

    @cached_property
    def digraph(self) -> Digraph:
        return Digraph(self.host.n, self.arcs)

    def reversed(self) -> "Orientation":
        return Orientation(self.host, self.bits ^ ((1 << self.host.m) - 1))

    def __eq__(self, other):
        return isinstance(other, Orientation) and self.host == other.host and self.bits == other.bits

    def __hash__(self):
        return hash((self.host, self.bits))

    def __repr__(self):
        return f"Orientation(n={self.host.n}, m={self.host.m}, bits=0x{self.hex() or '0'})"


@dataclass(frozen=True)
class EmbeddingCertificate:
    pattern: Digraph
    host: Orientation
    map: tuple[int, ...]
    variant: Variant


@dataclass
class ArrowVerdict:
    holds: bool
    witness: Orientation | None = None
    failing_pattern: Digraph | None = None
    orientations_checked: int = 0
    search_nodes: int = 0


def enumerate_orientations(g: Graph, prefix: Sequence[int] = (), cap: int = EDGE_CAP) -> Iterator[Orientation]:
    """All orientations of ``g`` whose first flags equal ``prefix``, in lexicographic order."""
    m = g.m
    k = len(prefix)
    if k > m:
        raise ValueError("prefix longer than edge list")
    if m - k > cap:
        raise CapExceeded(f"orientation enumeration capped at {cap} free edges, got {m - k}")
    base = 0
    for f in prefix:
        base = base << 1 | (1 if f else 0)
    base <<= m - k
    for low in range(1 << (m - k)):
        yield Orientation(g, base | low)


# ---------------------------------------------------------------------------
# embedding search
# ---------------------------------------------------------------------------

def _pattern_order(pattern: Digraph) -> list[tuple[int, int]]:
    """BFS order over the shadow; each entry is (vertex, an earlier neighbour or -1)."""
    g = pattern.shadow
    order = []
    seen = [False] * pattern.n
    for s in range(pattern.n):
        if seen[s]:
            continue
        seen[s] = True
        order.append((s, -1))
        queue = [s]
        for u in queue:
            for v in g.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    order.append((v, u))
                    queue.append(v)
    return order


def _maps(pattern: Digraph, host: Graph, variant: Variant,
          orient: Orientation | None = None) -> Iterator[tuple[int, ...]]:
    """Injective maps meeting the structural constraints of ``variant`` (and arc
    directions, when ``orient`` is given)."""
    variant = Variant(variant)
    k = pattern.n
    if k > host.n:
        return
    order = _pattern_order(pattern)
    dp = pattern.shadow.distances if variant is Variant.ISOMETRIC else None
    dh = host.distances if variant is Variant.ISOMETRIC else None
    padj = pattern.shadow.masks
    pout = pattern.out_masks
    hmask = host.masks
    omask = orient.out_masks if orient is not None else None
    f = [-1] * k
    used = [False] * host.n
    placed: list[int] = []

    def fits(w: int, x: int) -> bool:
        for u in placed:
            y = f[u]
            adjacent = padj[w] >> u & 1
            if variant is Variant.ISOMETRIC:
                if dh[y][x] != dp[u][w]:
                    return False
            elif variant is Variant.ORIENTED:
                if (hmask[y] >> x & 1) != adjacent:
                    return False
            elif adjacent and not hmask[y] >> x & 1:
                return False
            if omask is not None and adjacent:
                if pout[u] >> w & 1:
                    if not omask[y] >> x & 1:
                        return False
                elif not omask[x] >> y & 1:
                    return False
        return True

    def rec(i: int):
        if i == k:
            yield tuple(f)
            return
        w, anchor = order[i]
        cands = _bits(hmask[f[anchor]]) if anchor >= 0 else range(host.n)
        for x in cands:
            if used[x] or not fits(w, x):
                continue
            f[w] = x
            used[x] = True
            placed.append(w)
            yield from rec(i + 1)
            placed.pop()
            used[x] = False
            f[w] = -1

    yield from rec(0)


def find_embedding(pattern: Digraph, host: Orientation,
                   variant: Variant | str = Variant.ISOMETRIC) -> EmbeddingCertificate | None:
    """First embedding of ``pattern`` into the oriented host, or None when none exists."""
    variant = Variant(variant)
    for f in _maps(pattern, host.host, variant, host):
        return EmbeddingCertificate(pattern, host, f, variant)
    return None


def placements(pattern: Digraph, g: Graph, variant: Variant | str) -> list[tuple[tuple[int, int], ...]]:
    """Distinct arc requirements ``((edge_index, flag), ...)`` of all undirected placements."""
    variant = Variant(variant)
    seen = set()
    out = []
    for f in _maps(pattern, g, variant):
        lits = []
        for u, v in pattern.arcs:
            a, b = f[u], f[v]
            lits.append((g.edge_index(a, b), 0 if a < b else 1))
        key = tuple(sorted(lits))
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out


# ---------------------------------------------------------------------------
# counterexample search
# ---------------------------------------------------------------------------

class _Search:
    """Lexicographically first assignment violating every clause."""

    def __init__(self, m: int, clauses: list[tuple[tuple[int, int], ...]]):
        self.m = m
        self.clauses = clauses
        self.occ: list[list[tuple[int, int]]] = [[] for _ in range(m)]
        for ci, c in enumerate(clauses):
            for e, b in c:
                self.occ[e].append((ci, b))
        self.size = [len(c) for c in clauses]
        self.nodes = 0

    def run(self, prefix: Sequence[int] = ()) -> int | None:
        if any(s == 0 for s in self.size):
            return None
        self.assign = [-1] * self.m
        self.sat = [0] * len(self.clauses)
        self.dead = [0] * len(self.clauses)
        self.trail: list[int] = []
        for e, val in enumerate(prefix):
            if self.assign[e] == -1:
                if not self._set(e, val):
                    return None
            elif self.assign[e] != val:
                return None
        if not self._dfs(0):
            return None
        bits = 0
        for v in self.assign:
            bits = bits << 1 | v
        return bits

    def _set(self, e: int, val: int) -> bool:
        queue = [(e, val)]
        while queue:
            e, val = queue.pop()
            if self.assign[e] != -1:
                if self.assign[e] != val:
                    return False
                continue
            self.assign[e] = val
            self.trail.append(e)
            conflict = False
            # counters for every occurrence must be updated before bailing out, _undo relies on it
            for ci, b in self.occ[e]:
                if val == b:
                    self.sat[ci] += 1
                else:
                    self.dead[ci] += 1
                if self.dead[ci] or conflict:
                    continue
                s = self.sat[ci]
                if s == self.size[ci]:
                    conflict = True
                elif s == self.size[ci] - 1:
                    for e2, b2 in self.clauses[ci]:
                        if self.assign[e2] == -1:
                            queue.append((e2, 1 - b2))
                            break
            if conflict:
                return False
        return True

    def _undo(self, mark: int):
        while len(self.trail) > mark:
            e = self.trail.pop()
            val = self.assign[e]
            for ci, b in self.occ[e]:
                if val == b:
                    self.sat[ci] -= 1
                else:
                    self.dead[ci] -= 1
            self.assign[e] = -1

    def _dfs(self, start: int) -> bool:
        self.nodes += 1
        e = start
        while e < self.m and self.assign[e] != -1:
            e += 1
        if e == self.m:
            return True
        for val in (0, 1):
            mark = len(self.trail)
            if self._set(e, val) and self._dfs(e + 1):
                return True
            self._undo(mark)
        return False


def _family_order(family: Sequence[Digraph]) -> list[Digraph]:
    return sorted(family, key=lambda d: (-d.n, canonical_form(d, allow_hash=True)))


def _killer(args) -> tuple[int | None, int, int]:
    m, clause_sets, prefix = args
    best, best_idx, nodes = None, -1, 0
    for idx, clauses in enumerate(clause_sets):
        s = _Search(m, clauses)
        bits = s.run(prefix)
        nodes += s.nodes
        if bits is not None and (best is None or bits < best):
            best, best_idx = bits, idx
    return best, best_idx, nodes


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("ORIRAY_THREADS", "1")))
    except ValueError:
        return 1


def arrow_check(g: Graph, family: Sequence[Digraph] | Digraph, variant: Variant | str = Variant.ISOMETRIC,
                cap: int = EDGE_CAP, threads: int | None = None) -> ArrowVerdict:
    """Decide whether every orientation of ``g`` contains every member of ``family``.

    On failure the witness is the lexicographically first orientation that
    misses some member; the verdict does not depend on ``threads``.
    """
    variant = Variant(variant)
    if isinstance(family, Digraph):
        family = [family]
    for h in family:
        if not h.is_acyclic():
            raise ValueError("arrow relations are only defined for acyclic patterns")
    if g.m > cap:
        raise CapExceeded(f"arrow check capped at {cap} edges, got {g.m}")
    members = _family_order(family)
    clause_sets = [placements(h, g, variant) for h in members]
    total = 1 << g.m
    threads = default_threads() if threads is None else threads
    k = 0
    if threads > 1 and g.m >= 8:
        k = min(g.m - 4, max(1, math.ceil(math.log2(threads)) + 2))
    if k == 0:
        bits, idx, nodes = _killer((g.m, clause_sets, ()))
    else:
        jobs = [(g.m, clause_sets, tuple(p >> (k - 1 - i) & 1 for i in range(k))) for p in range(1 << k)]
        bits, idx, nodes = None, -1, 0
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for b, i, nd in pool.map(_killer, jobs):
                nodes += nd
                if b is not None and bits is None:
                    bits, idx = b, i
    if bits is None:
        return ArrowVerdict(True, orientations_checked=total, search_nodes=nodes)
    return ArrowVerdict(False, Orientation(g, bits), members[idx], total, nodes)


def arrow_check_bruteforce(g: Graph, family: Sequence[Digraph] | Digraph,
                           variant: Variant | str = Variant.ISOMETRIC, cap: int = 24) -> ArrowVerdict:
    """Reference implementation: walk every orientation and search each member."""
    if isinstance(family, Digraph):
        family = [family]
    members = _family_order(family)
    count = 0
    for o in enumerate_orientations(g, cap=cap):
        count += 1
        for h in members:
            if find_embedding(h, o, variant) is None:
                return ArrowVerdict(False, o, h, count)
    return ArrowVerdict(True, orientations_checked=count)


# ---------------------------------------------------------------------------
# derived quantities
# ---------------------------------------------------------------------------

def ddiam(g: Graph, kind: str = "paths", cap: int = EDGE_CAP) -> int:
    """Largest n with G => I_n (``kind="paths"``) or G => T_n (``kind="trees"``)."""
    if kind not in ("paths", "trees"):
        raise ValueError("kind must be 'paths' or 'trees'")
    if g.n == 0:
        return 0
    limit = min(max_component_diameter(g) + 1, chromatic_number(g))
    best = 1
    for n in range(2, limit + 1):
        fam = [directed_path(n)] if kind == "paths" else enumerate_oriented_trees(n)
        if not arrow_check(g, fam, Variant.ISOMETRIC, cap=cap).holds:
            break
        best = n
    return best


@dataclass
class IRResult:
    value: int | None
    witness: Graph | None
    graphs_checked: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)

    @property
    def resolved(self) -> bool:
        return self.value is not None


def ir_search(family: Sequence[Digraph] | Digraph, max_n: int,
              variant: Variant | str = Variant.ISOMETRIC, all_witnesses: bool = True) -> IRResult:
    """Smallest atlas order with a graph arrowing the whole family; unresolved past ``max_n``.

    ``witness`` is the first qualifying graph in atlas order (fewest edges
    first); with ``all_witnesses`` every qualifying graph of that order is
    listed in ``witnesses``.
    """
    from .catalog import enumerate_graphs

    if isinstance(family, Digraph):
        family = [family]
    checked = {}
    need = max(h.n for h in family)
    for n in range(1, max_n + 1):
        atlas = enumerate_graphs(n)
        checked[n] = 0
        if n < need:
            checked[n] = len(atlas)
            continue
        found = []
        for g in atlas:
            checked[n] += 1
            if arrow_check(g, family, variant).holds:
                found.append(g)
                if not all_witnesses:
                    break
        if found:
            return IRResult(n, found[0], checked, found)
    return IRResult(None, None, checked)


def longest_directed_path(d: Digraph, cap: int = PATH_CAP) -> int:
    """Vertex count of a longest simple directed path."""
    if d.n > cap:
        raise CapExceeded(f"longest path capped at {cap} vertices, got {d.n}")
    if d.n == 0:
        return 0
    order = topological_order(d)
    if order is not None:
        best = [1] * d.n
        for v in reversed(order):
            for w in _bits(d.out_masks[v]):
                best[v] = max(best[v], best[w] + 1)
        return max(best)
    longest = 1

    def dfs(v: int, seen: int, length: int):
        nonlocal longest
        longest = max(longest, length)
        for w in _bits(d.out_masks[v] & ~seen):
            dfs(w, seen | 1 << w, length + 1)

    for s in range(d.n):
        dfs(s, 1 << s, 1)
        if longest == d.n:
            break
    return longest


def ghrv_check(g: Graph, cap: int = 24) -> tuple[int, int]:
    """(chromatic number, min over orientations of the longest directed path)."""
    chi = chromatic_number(g)
    low = g.n
    for o in enumerate_orientations(g, cap=cap):
        low = min(low, longest_directed_path(o.digraph))
        if low == 1:
            break
    return chi, low
