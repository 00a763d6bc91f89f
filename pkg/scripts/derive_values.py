"""Recompute reference values with code paths independent of the package.

Ranks mod 2 use Python big-int row reduction over subsets built with
itertools; nothing from gkcert is imported.  The printed values are the ones
frozen into the test-suite.
"""

from __future__ import annotations

import argparse
import itertools
import json
import time
from math import comb


def q(t: int, s: int, m: int) -> int:
    # C(t - m, s - m) as a falling factorial, valid for t < m
    k = s - m
    num = 1
    for i in range(k):
        num *= t - m - i
    den = 1
    for i in range(1, k + 1):
        den *= i
    return num // den


def subsets(d: int, s: int) -> list[frozenset[int]]:
    out = [frozenset(c) for c in itertools.combinations(range(d), s)]
    # colex: compare the largest differing element
    out.sort(key=lambda a: sorted(a, reverse=True))
    return out


def rank_gf2_rows(rows: list[int]) -> int:
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            low = r & -r
            if low in pivots:
                r ^= pivots[low]
            else:
                pivots[low] = r
                break
    return len(pivots)


def rank_mod2_representing(d: int, s: int, m: int) -> int:
    verts = subsets(d, s)
    rows = []
    for a in verts:
        bits = 0
        for j, b in enumerate(verts):
            if q(len(a & b), s, m) & 1:
                bits |= 1 << j
        rows.append(bits)
    return rank_gf2_rows(rows)


def rank_rational(rows: list[list[int]]) -> int:
    from fractions import Fraction

    a = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(rank + 1, len(a)):
            f = a[i][c] / a[rank][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def minrank_c5_bruteforce(p: int = 2) -> int:
    """Every matrix with unit diagonal, free entries on both orientations of each edge."""
    n = 5
    edges = [(i, (i + 1) % n) for i in range(n)]
    slots = [(u, v) for u, v in edges] + [(v, u) for u, v in edges]
    best = n
    for vals in itertools.product(range(p), repeat=len(slots)):
        M = [[int(i == j) for j in range(n)] for i in range(n)]
        for (u, v), x in zip(slots, vals):
            M[u][v] = x
        if p == 2:
            r = rank_gf2_rows([sum(b << j for j, b in enumerate(row)) for row in M])
        else:
            r = rank_rational(M)  # only used for p = 2 here
        best = min(best, r)
    return best


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--large", action="store_true", help="also K(16,8,2)")
    args = ap.parse_args()
    out = {}
    t0 = time.perf_counter()
    out["rank2_K(4,2,1)"] = rank_mod2_representing(4, 2, 1)
    verts = subsets(4, 2)
    out["rankQ_K(4,2,1)"] = rank_rational([[q(len(a & b), 2, 1) for b in verts] for a in verts])
    out["rank2_K(6,3,1)"] = rank_mod2_representing(6, 3, 1)
    out["rank2_K(12,6,2)"] = rank_mod2_representing(12, 6, 2)
    out["minrank2_C5"] = minrank_c5_bruteforce(2)
    out["R(12,6,2)"] = sum(comb(12, i) for i in range(5))
    if args.large:
        out["rank2_K(16,8,2)"] = rank_mod2_representing(16, 8, 2)
    out["seconds"] = round(time.perf_counter() - t0, 1)
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
