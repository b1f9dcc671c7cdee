"""Scan the random-model feasibility conditions over n for a (delta, c) grid."""

import argparse

from oriray.bounds import ParameterError, pikh_constraints, pikh_parameters, random_feasibility


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--delta", type=float, nargs="+", default=[0.05, 0.375])
    ap.add_argument("--c", type=float, nargs="+", default=[0.05, 0.09])
    ap.add_argument("--n", type=int, nargs="+", default=[10, 100, 1000, 10_000])
    args = ap.parse_args()

    for delta in args.delta:
        for c in args.c:
            broken = pikh_constraints(delta, c)
            tag = "ok" if not broken else "violates " + "; ".join(broken)
            print(f"delta={delta} c={c}: {tag}")
            for n in args.n:
                try:
                    rep = random_feasibility(pikh_parameters(n, delta, c, validate=False))
                except ParameterError as exc:
                    print(f"  n={n}: {exc}")
                    continue
                margins = "  ".join(f"{k}:{v:+.3g}" for k, v in sorted(rep.margins.items()))
                print(f"  n={n:>6}  all={rep.all_true}  log-margins {margins}")


if __name__ == "__main__":
    main()
