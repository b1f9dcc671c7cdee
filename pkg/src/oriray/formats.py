"""Text formats: graph6, plain edge lists and a one-line digraph form.

The digraph line form is ``n;u>v,u>v,...`` (``3;0>1,1>2`` is the directed
path on three vertices; ``1;`` is a single vertex).
"""

from __future__ import annotations

import os
import re

from .graph import (Digraph, Graph, complete_graph, cycle_graph, path_graph,
                    rectangular_product)

HEADER = ">>graph6<<"


class FormatError(ValueError):
    """Malformed input; the message names the first offending token."""


def _encode_n(n: int) -> str:
    if n < 0:
        raise ValueError("negative n")
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise ValueError("n too large for graph6")


def to_graph6(g: Graph, header: bool = False) -> str:
    """graph6 string: upper triangle column by column, six bits per char."""
    bits = []
    for j in range(1, g.n):
        mj = g.masks[j]
        for i in range(j):
            bits.append(mj >> i & 1)
    bits.extend([0] * (-len(bits) % 6))
    body = "".join(
        chr(63 + (bits[k] << 5 | bits[k + 1] << 4 | bits[k + 2] << 3
                  | bits[k + 3] << 2 | bits[k + 4] << 1 | bits[k + 5]))
        for k in range(0, len(bits), 6))
    return (HEADER if header else "") + _encode_n(g.n) + body


def from_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER):]
    for pos, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise FormatError(f"graph6: bad character {ch!r} at offset {pos}")
    if not s:
        raise FormatError("graph6: empty string")
    vals = [ord(ch) - 63 for ch in s]
    if vals[0] != 63:
        n, rest = vals[0], vals[1:]
    elif len(vals) >= 2 and vals[1] == 63:
        if len(vals) < 8:
            raise FormatError("graph6: truncated size field")
        n = 0
        for v in vals[2:8]:
            n = n << 6 | v
        rest = vals[8:]
    else:
        if len(vals) < 4:
            raise FormatError("graph6: truncated size field")
        n = vals[1] << 12 | vals[2] << 6 | vals[3]
        rest = vals[4:]
    need = n * (n - 1) // 2
    if len(rest) != (need + 5) // 6:
        raise FormatError(f"graph6: expected {(need + 5) // 6} data chars for n={n}, got {len(rest)}")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if rest[k // 6] >> (5 - k % 6) & 1:
                edges.append((i, j))
            k += 1
    return Graph(n, edges)


def to_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def _int_token(tok: str, where: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"{where}: bad token {tok!r}") from None


def from_edge_list(text: str) -> Graph:
    tokens = [(ln, line.split()) for ln, line in enumerate(text.splitlines(), 1)
              if line.strip() and not line.lstrip().startswith("#")]
    if not tokens or len(tokens[0][1]) != 2:
        raise FormatError("edge list: header must be 'n m'")
    n = _int_token(tokens[0][1][0], "line 1")
    m = _int_token(tokens[0][1][1], "line 1")
    if len(tokens) - 1 != m:
        raise FormatError(f"edge list: header promises {m} edges, found {len(tokens) - 1}")
    edges = []
    for ln, parts in tokens[1:]:
        if len(parts) != 2:
            raise FormatError(f"line {ln}: bad token {' '.join(parts)!r}")
        edges.append((_int_token(parts[0], f"line {ln}"), _int_token(parts[1], f"line {ln}")))
    try:
        return Graph(n, edges)
    except ValueError as exc:
        raise FormatError(f"edge list: {exc}") from None


def to_digraph_line(d: Digraph) -> str:
    return f"{d.n};" + ",".join(f"{u}>{v}" for u, v in d.arcs)


def from_digraph_line(text: str) -> Digraph:
    s = text.strip()
    if ";" not in s:
        raise FormatError(f"digraph: missing ';' in {s!r}")
    head, body = s.split(";", 1)
    n = _int_token(head, "digraph size")
    arcs = []
    for tok in filter(None, (t.strip() for t in body.split(","))):
        parts = tok.split(">")
        if len(parts) != 2:
            raise FormatError(f"digraph: bad token {tok!r}")
        arcs.append((_int_token(parts[0], "digraph arc"), _int_token(parts[1], "digraph arc")))
    try:
        return Digraph(n, arcs)
    except ValueError as exc:
        raise FormatError(f"digraph: {exc}") from None


_FACTOR = re.compile(r"^([KCP])(\d+)$")


def graph_from_expression(expr: str) -> Graph:
    """Build from names like ``C5``, ``K4``, ``P3`` and products ``K2xK3xK7``."""
    g = None
    for tok in expr.split("x"):
        match = _FACTOR.match(tok.strip())
        if not match:
            raise FormatError(f"graph expression: bad token {tok!r}")
        kind, m = match.group(1), int(match.group(2))
        try:
            factor = {"K": complete_graph, "C": cycle_graph, "P": path_graph}[kind](m)
        except ValueError as exc:
            raise FormatError(f"graph expression: {tok!r}: {exc}") from None
        g = factor if g is None else rectangular_product(g, factor)
    return g


def read_graph(source: str) -> Graph:
    """Read a ``.el`` edge list or graph6 file, or parse a builder expression."""
    if os.path.exists(source):
        with open(source) as fh:
            text = fh.read()
        if source.endswith(".el"):
            return from_edge_list(text)
        return from_graph6(text.strip().splitlines()[0] if text.strip() else "")
    return graph_from_expression(source)


def write_graph(g: Graph, fmt: str = "g6") -> str:
    if fmt == "g6":
        return to_graph6(g) + "\n"
    if fmt == "el":
        return to_edge_list(g)
    raise ValueError(f"unknown graph format {fmt!r}")
