"""Print R against n = C(d, d/2) for a family of parameters, as a small table."""

from __future__ import annotations

import argparse

from gkcert.claims import crossover_search


def main(argv=None) -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--rule", default="ell:3", help="ell:L or vchrom")
    ap.add_argument("--max-d", type=int, default=60)
    args = ap.parse_args(argv)
    reports, first = crossover_search(args.rule, args.max_d)
    print(f"{'d':>6} {'m':>5} {'log2 n':>10} {'log2 R':>10}  below")
    for r in reports:
        print(f"{r.d:>6} {r.m:>5} {r.n.bit_length() - 1:>10} {r.R.bit_length() - 1:>10}  {r.below}")
    print(f"minimal d with R < n: {first}")


if __name__ == "__main__":
    main()
