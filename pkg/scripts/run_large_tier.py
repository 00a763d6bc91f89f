"""d = 18 tier: K(18, 9, 3) rank and symmetric factorisation mod 2.

Prints one JSON object with the measured values, wall time and peak RSS.
Run it in its own process so the peak-memory figure is meaningful.
"""

from __future__ import annotations

import argparse
import json
import resource
import sys
import time

from gkcert.factorize import lempel_factorize
from gkcert.kneser import GKParams, build_graph, triangle_free_packed
from gkcert.polyrep import rank_bound, representing_matrix_gfp, verify_represents
from gkcert.exactalg import rank_mod_p


def main(argv=None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--d", type=int, default=18)
    ap.add_argument("--skip-girth", action="store_true")
    args = ap.parse_args(argv)
    d = args.d
    params = GKParams(d, d // 2, d // 6)
    t0 = time.perf_counter()
    timings = {}
    G = build_graph(params)
    M = representing_matrix_gfp(params, 2, graph=G, force=True)
    timings["build"] = time.perf_counter() - t0
    out = {"d": d, "n": params.n, "R": rank_bound(params)}
    out["represents"], _ = verify_represents(M, G)
    out["symmetric"] = M.is_symmetric()
    timings["verify"] = time.perf_counter() - t0
    if not args.skip_girth:
        out["triangle_free"] = triangle_free_packed(G.packed_adjacency(), G.n).exceeds
        timings["girth"] = time.perf_counter() - t0
    out["rank"] = rank_mod_p(M)
    timings["rank"] = time.perf_counter() - t0
    fac = lempel_factorize(M)  # raises unless B B^T == M
    out["r"] = fac.r
    out["factorization_verified"] = True
    timings["factorize"] = time.perf_counter() - t0
    out["seconds"] = {k: round(v, 1) for k, v in timings.items()}
    out["peak_rss_mib"] = round(resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024, 1)
    print(json.dumps(out))
    ok = out["represents"] and out["symmetric"] and out["r"] == out["rank"] <= out["R"] < out["n"]
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
