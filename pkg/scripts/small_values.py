"""Recompute the small induced-Ramsey values and time each search."""

import argparse
import time

from oriray.arrows import arrow_check, ir_search
from oriray.catalog import directed_path, enumerate_oriented_trees
from oriray.formats import to_graph6
from oriray.graph import complete_graph, rectangular_product


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, default=6)
    args = ap.parse_args()

    families = [(f"I{n}", directed_path(n)) for n in (1, 2, 3)]
    families.append(("T3", enumerate_oriented_trees(3)))
    for name, fam in families:
        t0 = time.perf_counter()
        r = ir_search(fam, args.max_order)
        dt = time.perf_counter() - t0
        witnesses = ", ".join(to_graph6(w) for w in r.witnesses)
        print(f"{name:3s} IR={r.value}  graphs checked per order {dict(r.graphs_checked)}  "
              f"witnesses [{witnesses}]  {dt:.2f}s")

    prism = rectangular_product(complete_graph(2), complete_graph(3))
    res = arrow_check(prism, enumerate_oriented_trees(3))
    print(f"prism -> T3: {res.holds} over {res.orientations_checked} orientations")


if __name__ == "__main__":
    main()
