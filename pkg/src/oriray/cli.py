"""Command line entry point. Every structured result is JSON with a ``manifest`` block."""

from __future__ import annotations

import argparse
import hashlib
import os
import random
import re
import sys
from dataclasses import dataclass, field

from . import __version__
from .arrows import (EDGE_CAP, Orientation, Variant, arrow_check, ddiam, default_threads,
                     enumerate_orientations, ghrv_check, ir_search)
from .bounds import (ParameterError, default_pikh_grid, erdos_bounds, ir_upper_bounds,
                     klr_parameters, minimize_K, pikh_parameters, random_feasibility)
from .catalog import (directed_path, enumerate_graphs, enumerate_oriented_trees,
                      gamma_construction)
from .constructions import (EmbeddingError, bfs_parity_orientation, chordless_odd_walk, exact_sub_embedder,
                            norm_span_check, odd_cycle_chord_check, pigeonhole_embed,
                            tower_family, transitive_orientation)
from .embedder import EmbeddingCertificate, PikhParameters, check_conditions, greedy_tree_embed
from .formats import (FormatError, from_digraph_line, read_graph, to_digraph_line, to_graph6,
                      write_graph)
from .graph import CapExceeded, Digraph, Graph, complete_graph, distance_matrix, rectangular_product
from .repro import run_target, table
from .verify import certificate_to_json, check_certificate, dumps, verify_certificate_file

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_CAP = 0, 1, 2, 3


@dataclass
class RunManifest:
    subcommand: str
    inputs: dict[str, str] = field(default_factory=dict)
    seed: int | None = None
    caps: dict[str, int | None] = field(default_factory=dict)
    version: str = __version__

    def to_json(self) -> dict:
        return {"subcommand": self.subcommand, "inputs": self.inputs, "seed": self.seed,
                "caps": self.caps, "version": self.version}


def _digest(source: str) -> str:
    if os.path.exists(source):
        with open(source, "rb") as fh:
            data = fh.read()
    else:
        data = source.encode()
    return "sha256:" + hashlib.sha256(data).hexdigest()


class _Run:
    def __init__(self, args):
        self.args = args
        self.manifest = RunManifest(args.command, seed=args.seed,
                                    caps={"edges": args.cap_edges, "vertices": args.cap_vertices})

    def graph(self, source: str, name: str = "graph") -> Graph:
        self.manifest.inputs[name] = _digest(source)
        g = read_graph(source)
        if self.args.cap_vertices is not None and g.n > self.args.cap_vertices:
            raise CapExceeded(f"{name} has {g.n} vertices, cap is {self.args.cap_vertices}")
        return g

    def emit(self, result: dict, text: str | None = None):
        if self.args.format == "text" and text is not None:
            sys.stdout.write(text)
            return
        out = dict(result)
        out["manifest"] = self.manifest.to_json()
        sys.stdout.write(dumps(out))


def parse_family(spec: str) -> list[Digraph]:
    """``I<n>``, ``T<n>`` or a digraph line; several joined by ``+``."""
    out = []
    for tok in spec.split("+"):
        tok = tok.strip()
        m = re.fullmatch(r"([IT])(\d+)", tok)
        if m:
            n = int(m.group(2))
            if n < 1:
                raise FormatError(f"family: bad token {tok!r}")
            out.extend([directed_path(n)] if m.group(1) == "I" else enumerate_oriented_trees(n))
        else:
            out.append(from_digraph_line(tok))
    return out


def _floats(text: str, name: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        bad = next(x for x in text.split(",") if not _is_float(x))
        raise FormatError(f"{name}: bad token {bad!r}") from None


def _is_float(x: str) -> bool:
    try:
        float(x)
        return True
    except ValueError:
        return False


def _tree(spec: str, n: int | None = None) -> Digraph:
    """A tree given as ``T<n>:<index>``, ``I<n>`` or a digraph line."""
    m = re.fullmatch(r"T(\d+):(\d+)", spec)
    if m:
        trees = enumerate_oriented_trees(int(m.group(1)))
        i = int(m.group(2))
        if i >= len(trees):
            raise FormatError(f"tree: bad token {spec!r} (only {len(trees)} trees)")
        return trees[i]
    fam = parse_family(spec)
    if len(fam) != 1:
        raise FormatError(f"tree: bad token {spec!r} names {len(fam)} digraphs")
    return fam[0]


def _orientation(run: _Run, g: Graph, bits: str | None) -> Orientation:
    if bits is None:
        rng = random.Random(run.args.seed)
        return Orientation(g, rng.getrandbits(g.m) if g.m else 0)
    run.manifest.inputs["bits"] = _digest(bits)
    if not re.fullmatch(r"[0-9a-fA-F]*", bits):
        raise FormatError(f"orientation bits: bad token {bits!r}")
    try:
        return Orientation.from_hex(g, bits)
    except ValueError as exc:
        raise FormatError(f"orientation bits: {exc}") from None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_dist(run: _Run) -> int:
    g = run.graph(run.args.graph)
    d = distance_matrix(g)
    rows = [[None if x == float("inf") else x for x in row] for row in d]
    text = "\n".join(" ".join("-" if x is None else str(x) for x in row) for row in rows) + "\n"
    run.emit({"n": g.n, "distances": rows}, text)
    return EXIT_OK


def cmd_product(run: _Run) -> int:
    g = run.graph(run.args.left, "left")
    h = run.graph(run.args.right, "right")
    p = rectangular_product(g, h)
    run.emit({"n": p.n, "m": p.m, "graph6": to_graph6(p)}, write_graph(p, run.args.graph_format))
    return EXIT_OK


def cmd_trees(run: _Run) -> int:
    trees = enumerate_oriented_trees(run.args.n)
    lines = [to_digraph_line(t) for t in trees]
    run.emit({"n": run.args.n, "count": len(trees), "trees": lines},
             "\n".join(lines) + f"\n# count {len(trees)}\n")
    return EXIT_OK


def cmd_atlas(run: _Run) -> int:
    graphs = enumerate_graphs(run.args.n)
    lines = [to_graph6(g) for g in graphs]
    run.emit({"n": run.args.n, "count": len(graphs), "graphs": lines},
             "\n".join(lines) + f"\n# count {len(graphs)}\n")
    return EXIT_OK


def cmd_gamma(run: _Run) -> int:
    run.manifest.inputs["digraph"] = _digest(run.args.digraph)
    h = from_digraph_line(run.args.digraph)
    d = gamma_construction(h, run.args.root)
    run.emit({"digraph": to_digraph_line(d), "n": d.n}, to_digraph_line(d) + "\n")
    return EXIT_OK


def cmd_orient_enum(run: _Run) -> int:
    g = run.graph(run.args.graph)
    prefix = run.args.prefix or ""
    if not re.fullmatch(r"[01]*", prefix):
        raise FormatError(f"prefix: bad token {prefix!r}")
    items = []
    for i, o in enumerate(enumerate_orientations(g, [int(c) for c in prefix], cap=run.args.cap_edges)):
        if run.args.limit is not None and i >= run.args.limit:
            break
        items.append(o.hex())
    run.emit({"m": g.m, "count": len(items), "orientations": items}, "\n".join(items) + "\n")
    return EXIT_OK


def cmd_arrow(run: _Run) -> int:
    g = run.graph(run.args.graph)
    run.manifest.inputs["family"] = _digest(run.args.family)
    fam = parse_family(run.args.family)
    v = arrow_check(g, fam, run.args.variant, cap=run.args.cap_edges, threads=run.args.threads)
    result = {"holds": v.holds, "orientations_checked": v.orientations_checked,
              "variant": Variant(run.args.variant).value}
    if not v.holds:
        result["witness_bits"] = v.witness.hex()
        result["failing_pattern"] = to_digraph_line(v.failing_pattern)
    run.emit(result, f"holds {v.holds}\n")
    return EXIT_OK


def cmd_ddiam(run: _Run) -> int:
    g = run.graph(run.args.graph)
    kinds = ["paths", "trees"] if run.args.kind == "both" else [run.args.kind]
    res = {k: ddiam(g, k, cap=run.args.cap_edges) for k in kinds}
    run.emit({"ddiam": res}, "".join(f"{k} {v}\n" for k, v in res.items()))
    return EXIT_OK


def cmd_ir_search(run: _Run) -> int:
    run.manifest.inputs["family"] = _digest(run.args.family)
    fam = parse_family(run.args.family)
    r = ir_search(fam, run.args.max_n, run.args.variant)
    result = {"value": r.value, "resolved": r.resolved,
              "witness": to_graph6(r.witness) if r.witness else None,
              "witnesses": [to_graph6(w) for w in r.witnesses],
              "graphs_checked": {str(k): v for k, v in r.graphs_checked.items()}}
    run.emit(result, f"value {r.value if r.resolved else 'UNRESOLVED'}\n")
    return EXIT_OK


def cmd_ghrv(run: _Run) -> int:
    g = run.graph(run.args.graph)
    chi, low = ghrv_check(g, cap=run.args.cap_edges)
    run.emit({"chi": chi, "min_longest_path": low, "equal": chi == low}, f"{chi} {low}\n")
    return EXIT_OK if chi == low else EXIT_VERIFY


def cmd_comparability(run: _Run) -> int:
    g = run.graph(run.args.graph)
    o = transitive_orientation(g)
    walk = chordless_odd_walk(g) if g.n <= 10 else None
    result = {"transitive_orientation": o.hex() if o is not None else None,
              "comparability": o is not None,
              "odd_cycles_chorded": odd_cycle_chord_check(g) if g.n <= 10 else None,
              "chordless_odd_walk": walk}
    run.emit(result, f"comparability {o is not None}\n")
    return EXIT_OK


def cmd_bfs_orient(run: _Run) -> int:
    g = run.graph(run.args.graph)
    r = bfs_parity_orientation(g, run.args.root)
    run.emit({"orientation_bits": r.orientation.hex(), "norms": r.norms, "root": r.root,
              "norm_span": norm_span_check(r)}, r.orientation.hex() + "\n")
    return EXIT_OK


def cmd_tower(run: _Run) -> int:
    fam = tower_family(run.args.n, min(run.args.n, run.args.materialize))
    sizes = [s if s < 2 ** 53 else str(s) for s in fam.sizes]
    run.emit({"sizes": sizes, "graphs": [to_graph6(g) for g in fam.graphs],
              "bound_ok": [s + 1 <= 2 ** 2 ** k for k, s in enumerate(fam.sizes)]},
             " ".join(str(s) for s in fam.sizes) + "\n")
    return EXIT_OK


def _emit_cert(run: _Run, cert) -> int:
    ok, why = check_certificate(cert)
    run.emit({"certificate": certificate_to_json(cert), "verified": ok, "reason": why},
             dumps(certificate_to_json(cert)))
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_pigeonhole(run: _Run) -> int:
    g = run.graph(run.args.base, "base")
    host_graph = rectangular_product(g, complete_graph(g.n + 1))
    o = _orientation(run, host_graph, run.args.bits)
    tree = _tree(run.args.tree)
    return _emit_cert(run, pigeonhole_embed(g, exact_sub_embedder, o, tree))


def _params(run: _Run, n: int) -> PikhParameters:
    try:
        return PikhParameters(n, _floats(run.args.w, "w"), _floats(run.args.d, "d"), run.args.mode)
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"parameters: {exc}") from None


def cmd_pikh_check(run: _Run) -> int:
    g = run.graph(run.args.graph)
    rep = check_conditions(g, _params(run, run.args.n), run.args.exactness, run.args.trials, run.args.seed)
    run.emit(rep.to_json(), f"{rep.cond1_ok} {rep.cond2_ok} {rep.cond3_ok}\n")
    return EXIT_OK


def cmd_greedy(run: _Run) -> int:
    g = run.graph(run.args.graph)
    o = _orientation(run, g, run.args.bits)
    tree = _tree(run.args.tree)
    res = greedy_tree_embed(g, o, tree, _params(run, tree.n))
    if isinstance(res, EmbeddingCertificate):
        return _emit_cert(run, res)
    run.emit({"failure": res.to_json()}, f"failed at step {res.step}\n")
    return EXIT_OK


def cmd_bounds(run: _Run) -> int:
    a = run.args
    if a.which == "k-const":
        x, k = minimize_K()
        run.emit({"K": k, "x_star": x}, f"K {k:.6f} x* {x:.6f}\n")
    elif a.which == "pikh":
        delta, c = (a.delta, a.c)
        if delta is None or c is None:
            delta, c = default_pikh_grid(a.eps if a.eps is not None else 0.5)
        p = pikh_parameters(a.n, delta, c, eps=a.eps)
        rep = random_feasibility(p)
        run.emit({"params": p.to_json(), "conditions": rep.conditions, "margins": rep.margins},
                 f"{rep.conditions}\n")
    elif a.which == "klr":
        r = klr_parameters(a.n, a.eps)
        rep = random_feasibility(r.params)
        run.emit({"params": r.params.to_json(), "K": r.K, "x_star": r.x_star,
                  "conditions": rep.conditions, "margins": rep.margins}, f"{rep.conditions}\n")
    elif a.which == "erdos":
        reps = erdos_bounds(a.k, a.g, a.spencer_constant)
        run.emit({"bounds": [r.to_json() for r in reps]},
                 "".join(f"{r.name} {r.value}\n" for r in reps))
    else:
        reps = ir_upper_bounds(a.n)
        run.emit({"bounds": [r.to_json() for r in reps]},
                 "".join(f"{r.name} {r.value}\n" for r in reps))
    return EXIT_OK


def cmd_verify(run: _Run) -> int:
    run.manifest.inputs["certificate"] = _digest(run.args.cert)
    ok, why = verify_certificate_file(run.args.cert)
    run.emit({"valid": ok, "reason": why}, ("valid" if ok else f"invalid: {why}") + "\n")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_repro(run: _Run) -> int:
    try:
        rows = run_target(run.args.target)
    except KeyError:
        raise FormatError(f"repro: bad token {run.args.target!r}") from None
    run.emit({"rows": [r.to_json() for r in rows]}, table(rows))
    return EXIT_OK if all(r.passed for r in rows) else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes (default: $ORIRAY_THREADS or 1)")
    common.add_argument("--cap-edges", type=int, default=EDGE_CAP)
    common.add_argument("--cap-vertices", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["json", "text"], default=None,
                        help="json (default) or text; repro defaults to a text table")

    p = argparse.ArgumentParser(prog="oriray", description=__doc__, allow_abbrev=False)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        s = sub.add_parser(name, parents=[common], help=help_, allow_abbrev=False)
        s.set_defaults(fn=fn)
        return s

    s = add("dist", cmd_dist, "all-pairs hop distances")
    s.add_argument("graph")
    s = add("product", cmd_product, "rectangular product of two graphs")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--graph-format", choices=["g6", "el"], default="g6")
    s = add("trees", cmd_trees, "oriented trees on n vertices")
    s.add_argument("n", type=int)
    s = add("graphs-atlas", cmd_atlas, "graphs on n vertices up to isomorphism")
    s.add_argument("n", type=int)
    s = add("gamma", cmd_gamma, "doubling construction of a connected acyclic digraph")
    s.add_argument("digraph")
    s.add_argument("--root", type=int, default=0)
    s = add("orient-enum", cmd_orient_enum, "list orientations as hex bit strings")
    s.add_argument("graph")
    s.add_argument("--prefix", default="")
    s.add_argument("--limit", type=int, default=None)
    for name, fn, h in (("arrow", cmd_arrow, "decide an arrow relation"),
                        ("ir-search", cmd_ir_search, "smallest atlas graph arrowing a family")):
        s = add(name, fn, h)
        if name == "arrow":
            s.add_argument("--graph", required=True)
        else:
            s.add_argument("--max-n", type=int, default=6)
        s.add_argument("--family", required=True, help="I<n>, T<n> or n;u>v,... joined by +")
        s.add_argument("--variant", choices=[v.value for v in Variant], default="isometric")
    s = add("ddiam", cmd_ddiam, "largest isometrically forced path / tree size")
    s.add_argument("graph")
    s.add_argument("--kind", choices=["paths", "trees", "both"], default="both")
    s = add("ghrv", cmd_ghrv, "chromatic number against shortest forced directed path")
    s.add_argument("graph")
    s = add("comparability", cmd_comparability, "transitive orientation and odd-cycle chords")
    s.add_argument("graph")
    s = add("bfs-orient", cmd_bfs_orient, "layer-parity orientation and its norm span")
    s.add_argument("graph")
    s.add_argument("--root", type=int, default=0)
    s = add("tower", cmd_tower, "product tower sizes and small levels")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--materialize", type=int, default=3)
    s = add("pigeonhole-embed", cmd_pigeonhole, "embed a tree in an orientation of G x K_{|G|+1}")
    s.add_argument("--base", required=True)
    s.add_argument("--tree", required=True, help="I<n>, T<n>:<index> or a digraph line")
    s.add_argument("--bits", default=None, help="hex orientation bits (default: random from --seed)")
    for name, fn, h in (("pikh-check", cmd_pikh_check, "check the expansion conditions"),
                        ("greedy-embed", cmd_greedy, "greedy inductive tree embedding")):
        s = add(name, fn, h)
        s.add_argument("graph")
        if name == "pikh-check":
            s.add_argument("--n", type=int, required=True)
            s.add_argument("--exactness", choices=["exact", "sampled"], default="exact")
            s.add_argument("--trials", type=int, default=1000)
        else:
            s.add_argument("--tree", required=True)
            s.add_argument("--bits", default=None)
        s.add_argument("--w", required=True, help="comma separated w_1..w_{n-1}")
        s.add_argument("--d", required=True, help="comma separated d_1..d_{n-1}")
        s.add_argument("--mode", choices=["isometric", "plain"], default="isometric")
    s = add("bounds", cmd_bounds, "numeric bounds")
    bsub = s.add_subparsers(dest="which", required=True)
    bsub.add_parser("k-const", parents=[common], allow_abbrev=False)
    b = bsub.add_parser("pikh", parents=[common], allow_abbrev=False)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--delta", type=float, default=None)
    b.add_argument("--c", type=float, default=None)
    b.add_argument("--eps", type=float, default=None)
    b = bsub.add_parser("klr", parents=[common], allow_abbrev=False)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--eps", type=float, required=True)
    b = bsub.add_parser("erdos", parents=[common], allow_abbrev=False)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--g", type=int, required=True)
    b.add_argument("--spencer-constant", type=float, default=None)
    b = bsub.add_parser("ir", parents=[common], allow_abbrev=False)
    b.add_argument("--n", type=int, required=True)
    s = add("verify-cert", cmd_verify, "re-check a certificate file")
    s.add_argument("cert")
    s = add("repro", cmd_repro, "rerun published values and print a pass/fail table")
    s.add_argument("target", help="small-values, odd-cycles, ghrv, comparability, k-const, "
                                  "tower, feasibility or all")
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = default_threads()
    if args.format is None:
        args.format = "text" if args.command == "repro" else "json"
    r = _Run(args)
    try:
        return args.fn(r)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except EmbeddingError as exc:
        print(f"embedding failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (FormatError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
