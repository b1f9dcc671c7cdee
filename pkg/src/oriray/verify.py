"""Certificate (de)serialisation and an independent definitional checker.

The checker only uses graph-core primitives (graph6 parsing, hop distances);
it deliberately shares nothing with the embedding search in ``arrows``.
"""

from __future__ import annotations

import json
from typing import Any

from .arrows import EmbeddingCertificate, Orientation, Variant
from .formats import FormatError, from_graph6, to_graph6
from .graph import Digraph, Graph, distance_matrix


def pattern_to_json(d: Digraph) -> dict:
    return {"n": d.n, "arcs": [list(a) for a in d.arcs]}


def certificate_to_json(cert: EmbeddingCertificate) -> dict:
    return {
        "pattern": pattern_to_json(cert.pattern),
        "host_graph6": to_graph6(cert.host.host),
        "orientation_bits": cert.host.hex(),
        "map": list(cert.map),
        "variant": Variant(cert.variant).value,
    }


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def certificate_from_json(data: dict) -> EmbeddingCertificate:
    try:
        pat = data["pattern"]
        pattern = Digraph(int(pat["n"]), [tuple(a) for a in pat["arcs"]])
        host = from_graph6(data["host_graph6"])
        orient = Orientation.from_hex(host, data["orientation_bits"])
        mapping = tuple(int(x) for x in data["map"])
        variant = Variant(data["variant"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"certificate: {exc!r}") from None
    return EmbeddingCertificate(pattern, orient, mapping, variant)


def _host_arcs(host: Graph, bits_hex: int) -> set[tuple[int, int]]:
    m = host.m
    arcs = set()
    for i, (u, v) in enumerate(host.edges):
        if bits_hex >> (m - 1 - i) & 1:
            arcs.add((v, u))
        else:
            arcs.add((u, v))
    return arcs


def check_certificate(cert: EmbeddingCertificate, as_variant: Variant | str | None = None) -> tuple[bool, str]:
    """Re-check the variant predicate from the definitions. Returns ``(valid, reason)``."""
    variant = Variant(as_variant if as_variant is not None else cert.variant)
    pattern = cert.pattern
    host = cert.host.host
    f = cert.map
    if len(f) != pattern.n:
        return False, f"map has {len(f)} entries for {pattern.n} pattern vertices"
    if any(not 0 <= x < host.n for x in f):
        return False, "map entry out of host range"
    if len(set(f)) != len(f):
        return False, "map is not injective"
    if Variant(cert.variant) is Variant.WEAK and variant is not Variant.WEAK:
        return False, f"weak certificate cannot certify the {variant.value} relation"
    if Variant(cert.variant) is Variant.ORIENTED and variant is Variant.ISOMETRIC:
        return False, "oriented certificate cannot certify the isometric relation"
    host_arcs = _host_arcs(host, cert.host.bits)
    pat_arcs = set(pattern.arcs)
    if variant is Variant.WEAK:
        for u, v in pat_arcs:
            if (f[u], f[v]) not in host_arcs:
                return False, f"arc mismatch: pattern arc {(u, v)} not mapped onto a host arc"
        return True, "ok"
    for u in range(pattern.n):
        for v in range(pattern.n):
            if u != v and ((u, v) in pat_arcs) != ((f[u], f[v]) in host_arcs):
                return False, f"arc mismatch at pattern pair {(u, v)}"
    if variant is Variant.ISOMETRIC:
        dp = distance_matrix(Graph(pattern.n, pattern.arcs))
        dh = distance_matrix(host)
        for u in range(pattern.n):
            for v in range(u + 1, pattern.n):
                if dp[u][v] != dh[f[u]][f[v]]:
                    return False, (f"distance mismatch at pattern pair {(u, v)}: "
                                   f"{dp[u][v]} vs {dh[f[u]][f[v]]}")
    return True, "ok"


def verify_certificate_file(path: str) -> tuple[bool, str]:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"certificate: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if "certificate" in data:
        data = data["certificate"]
    return check_certificate(certificate_from_json(data))
