"""``gk`` command-line front end.

Exit status: 0 when the requested claim verifies, 1 when it is refuted (the
witness is printed), 2 on usage or resource errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from gkcert import __version__, claims, oracles
from gkcert.exactalg import PrimeFieldMatrix, RationalMatrix, load_matrix, rank_mod_p, rank_rational, reduce_mod_p
from gkcert.kneser import GKParams, Graph, build_graph
from gkcert.polyrep import MemoryGuardExceeded
from gkcert.subspaces import CoveringCollection, PreconditionViolated, Subspace, avoiding_subspace, graded_subspace

EXIT_OK, EXIT_REFUTED, EXIT_ERROR = 0, 1, 2
DEFAULT_MEMORY_CAP = 2 << 30


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: list[str]
    options: dict = field(default_factory=dict)
    memory_cap: int = DEFAULT_MEMORY_CAP
    threads: int = 1
    out: str | None = None
    force: bool = False
    verbose: int = 0
    version: str = __version__

    def to_json(self) -> dict:
        return asdict(self)


def _threads(arg: int | None) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("GK_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"GK_THREADS={env!r} is not an integer")
    return 1


def estimate_bytes(params: GKParams, p: int) -> int:
    """Peak bytes for building and eliminating the representing matrix."""
    n = params.n
    if p == 2:
        words = (n + 63) // 64
        return 2 * n * words * 8 + 2048 * n * 8
    return 2 * n * n * 8


def _check_memory(params: GKParams, p: int, cfg: RunConfig) -> None:
    need = estimate_bytes(params, p)
    if need > cfg.memory_cap and not cfg.force:
        raise MemoryGuardExceeded(
            f"K({params.d},{params.s},{params.m}) over GF({p}) needs about {need / 2**30:.2f} GiB "
            f"> cap {cfg.memory_cap / 2**30:.2f} GiB; pass --force"
        )


def _out_dir(cfg: RunConfig) -> Path | None:
    if cfg.out is None:
        return None
    path = Path(cfg.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _emit(obj: dict, cfg: RunConfig, name: str) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    out = _out_dir(cfg)
    if out is None:
        sys.stdout.write(text)
    else:
        (out / name).write_text(text)
        print(f"wrote {out / name}")


# --------------------------------------------------------------------------
# commands


def cmd_build(args, cfg: RunConfig) -> int:
    params = GKParams(args.d, args.s, args.m)
    G = build_graph(params)
    _emit(G.to_json(with_edges=args.edges), cfg, f"graph_{params.d}_{params.s}_{params.m}.json")
    return EXIT_OK


def cmd_rank(args, cfg: RunConfig) -> int:
    M = load_matrix(args.file)
    field_ = args.field.upper()
    if field_ == "Q":
        if isinstance(M, PrimeFieldMatrix):
            raise UsageError("matrix is stored over a finite field; rank over Q needs a Z or Q file")
        r = rank_rational(M)
    else:
        p = int(field_)
        if isinstance(M, PrimeFieldMatrix):
            if M.p != p:
                raise UsageError(f"matrix is stored mod {M.p}, not mod {p}")
        else:
            if isinstance(M, RationalMatrix):
                M = M.to_integer_rows()
            M = reduce_mod_p(M, p)
        r = rank_mod_p(M)
    print(json.dumps({"file": str(args.file), "field": field_, "rows": M.shape[0], "cols": M.shape[1], "rank": r}))
    return EXIT_OK


def _finish_certificate(cert: claims.Certificate, cfg: RunConfig, name: str) -> int:
    cert.run_config = cfg.to_json()
    cert.run_config["pipeline_options"] = cfg.options.get("pipeline_options", {})
    _emit(cert.to_json(), cfg, name)
    status = "VERIFIED" if cert.verdict else "REFUTED"
    print(f"{status} {cert.claim} {json.dumps(cert.params, sort_keys=True)}", file=sys.stderr)
    for note in cert.notes:
        print(f"note: {note}", file=sys.stderr)
    if not cert.verdict:
        wit = {k: v for k, v in cert.measured.items() if k.endswith("witness") or k.endswith("violation")}
        print(f"witness: {json.dumps(wit)}", file=sys.stderr)
        return EXIT_REFUTED
    return EXIT_OK


def _girth_options(args) -> dict:
    opts = {}
    if args.girth_mode != "auto":
        opts["girth_mode"] = args.girth_mode
    if args.samples is not None:
        opts["samples"] = args.samples
    if args.sample_size is not None:
        opts["sample_size"] = args.sample_size
    if args.seed is not None:
        opts["seed"] = args.seed
    return opts


def cmd_cert(args, cfg: RunConfig) -> int:
    out = _out_dir(cfg)
    if args.kind == "cycles":
        if args.ell is None:
            raise UsageError("--ell is required")
        if args.ell < 3 or args.ell % 2 == 0 or args.d % (2 * args.ell):
            raise UsageError(f"need odd ell >= 3 and 2*ell | d; got ell={args.ell}, d={args.d}")
        params = GKParams(args.d, args.d // 2, args.d // (2 * args.ell))
        _check_memory(params, args.p, cfg)
        opts = _girth_options(args)
        cfg.options["pipeline_options"] = opts
        cert = claims.cycle_free_certificate(args.ell, args.d, args.p, out_dir=out, force=True, **opts)
        name = f"cert_cycles_ell{args.ell}_d{args.d}_p{args.p}.json"
    elif args.kind == "triangle-free":
        if args.d % 6:
            raise UsageError(f"d = {args.d} is not a multiple of 6")
        params = GKParams(args.d, args.d // 2, args.d // 6)
        _check_memory(params, 2, cfg)
        opts = _girth_options(args)
        cfg.options["pipeline_options"] = opts
        cert = claims.triangle_free_od_certificate(args.d, out_dir=out, force=True, **opts)
        name = f"cert_triangle_free_d{args.d}.json"
    else:
        if args.d % 8:
            raise UsageError(f"d = {args.d} is not a multiple of 8")
        params = GKParams(args.d, args.d // 2, args.d // 8)
        _check_memory(params, args.p, cfg)
        cfg.options["pipeline_options"] = {}
        cert = claims.vchrom3_certificate(args.d, args.p, out_dir=out, force=True)
        name = f"cert_vchrom_d{args.d}_p{args.p}.json"
    return _finish_certificate(cert, cfg, name)


def cmd_crossover(args, cfg: RunConfig) -> int:
    reports, first = claims.crossover_search(args.rule, args.max_d)
    _emit({"rule": args.rule, "max_d": args.max_d, "minimal_d": first,
           "reports": [r.to_json() for r in reports]}, cfg, "crossover.json")
    return EXIT_OK


def cmd_formulas(args, cfg: RunConfig) -> int:
    if args.which == "stahl":
        val = claims.stahl_rhs(args.k, args.s, args.d)
    elif args.which == "s2":
        val = claims.thm_s2_value(args.k, args.d)
    elif args.which == "general":
        val = claims.thm_general_lower(args.k, args.s, args.d, Fraction(args.c))
    else:
        val = claims.bukh_cox_lower(args.k, args.s, args.d)
    print(val)
    return EXIT_OK


def cmd_verify_cert(args, cfg: RunConfig) -> int:
    data = json.loads(Path(args.cert).read_text())
    stored_digest = data.get("certificate_digest")
    cert = claims.Certificate.from_json(data)
    problems = []
    if stored_digest is not None and stored_digest != cert.digest():
        problems.append("certificate_digest does not match the certificate body")
    art_dir = Path(args.artifacts) if args.artifacts else Path(args.cert).parent
    ok, more = claims.verify_certificate(cert, art_dir if cert.artifacts else None)
    problems += more
    for p in problems:
        print(f"mismatch: {p}", file=sys.stderr)
    if problems:
        return EXIT_REFUTED
    print(f"reproduced verdict={cert.verdict} for {cert.claim} {json.dumps(cert.params, sort_keys=True)}")
    return EXIT_OK if ok else EXIT_REFUTED


def load_graph(path) -> tuple[Graph, dict]:
    """Explicit ``{n, edges}`` or a generalized Kneser ``{d, s, m}`` description."""
    data = json.loads(Path(path).read_text())
    if "edges" in data and "n" in data and "d" not in data:
        return Graph(int(data["n"]), data["edges"]), data
    if {"d", "s", "m"} <= data.keys():
        return build_graph(GKParams(int(data["d"]), int(data["s"]), int(data["m"]))).to_graph(), data
    if "edges" in data and "n" in data:
        return Graph(int(data["n"]), data["edges"]), data
    raise UsageError("graph JSON needs {n, edges} or {d, s, m}")


def _instance_digest(G: Graph) -> str:
    blob = json.dumps(G.to_json(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def cmd_oracle(args, cfg: RunConfig) -> int:
    G, _ = load_graph(args.graph)
    budget = oracles.OracleBudget(
        max_vertices=args.max_vertices, max_dimension=args.max_dimension,
        max_nodes=args.budget, max_seconds=args.max_seconds,
    )
    record = {"oracle": args.which, "graph_file": str(args.graph), "instance_digest": _instance_digest(G),
              "n": G.n, "edges": G.num_edges()}
    try:
        if args.which == "minrank":
            record["p"] = args.p
            record["value"] = oracles.minrank_exact(G, args.p, budget)
        elif args.which == "od2":
            record["value"] = oracles.od_exact_gf2(G, budget)
        else:
            record["k"] = args.k
            record["value"] = oracles.multichromatic_exact(G, args.k, budget)
        record["status"] = "complete"
    except oracles.BudgetExceeded as exc:
        record["status"] = "budget-exceeded"
        record["reason"] = str(exc)
    print(json.dumps(record, sort_keys=True))
    ledger = Path(args.ledger) if args.ledger else (_out_dir(cfg) or Path(".")) / "oracle_results.json"
    entries = json.loads(ledger.read_text()) if ledger.exists() else []
    entries.append({**record, "run_config": cfg.to_json()})
    ledger.write_text(json.dumps(entries, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if record["status"] == "complete" else EXIT_ERROR


def cmd_subspace(args, cfg: RunConfig) -> int:
    data = json.loads(Path(args.input).read_text())
    U = Subspace.from_json(data["U"])
    Ws = [Subspace.from_json(w) for w in data["W"]]
    ell_prime = int(data["ell_prime"])
    try:
        if args.which == "avoid":
            res = avoiding_subspace(U, Ws, ell_prime)
            ok = res.issubspace(U) and res.dim == U.dim - ell_prime and all((res & W).dim == 0 for W in Ws)
        else:
            res = graded_subspace(U, Ws, ell_prime)
            ok = res.issubspace(U) and res.dim == ell_prime and all(
                (res & W).dim == max(0, W.dim + ell_prime - U.dim) for W in Ws
            )
    except PreconditionViolated as exc:
        out = {"operation": args.which, "precondition_violated": str(exc),
               "subspace": exc.subspace.to_json() if exc.subspace is not None else None}
        print(json.dumps(out, indent=2), file=sys.stderr)
        return EXIT_REFUTED
    except CoveringCollection as exc:
        print(f"covering collection: {exc}", file=sys.stderr)
        return EXIT_REFUTED
    _emit({"operation": args.which, "result": res.to_json(), "postconditions_hold": ok}, cfg, f"subspace_{args.which}.json")
    return EXIT_OK if ok else EXIT_REFUTED


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="directory for artifacts (default: stdout)")
    common.add_argument("--threads", type=int, help="worker threads (env GK_THREADS); results do not depend on it")
    common.add_argument("--force", action="store_true", help="override the memory guard")
    common.add_argument("--memory-cap", type=float, default=2.0, help="memory guard in GiB (default 2)")
    common.add_argument("-v", "--verbose", action="count", default=0)

    ap = argparse.ArgumentParser(prog="gk", description="Exact certificates for generalized Kneser graphs.",
                                 parents=[common])
    ap.add_argument("--version", action="version", version=f"gk {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="export K(d, s, m) as JSON")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--edges", action="store_true")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("rank", parents=[common], help="rank of a matrix file")
    p.add_argument("--field", required=True, help="2, a prime p, or Q")
    p.add_argument("file")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("cert", parents=[common], help="run a certificate pipeline")
    p.add_argument("kind", choices=["cycles", "triangle-free", "vchrom"])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--ell", type=int)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--girth-mode", choices=["auto", "exhaustive", "exhaustive-packed", "sampled"], default="auto")
    p.add_argument("--samples", type=int)
    p.add_argument("--sample-size", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_cert)

    p = sub.add_parser("crossover", parents=[common], help="exact R vs n scan")
    p.add_argument("--rule", required=True, help="'ell:L' or 'vchrom'")
    p.add_argument("--max-d", type=int, required=True)
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("formulas", parents=[common], help="evaluate closed-form bounds")
    p.add_argument("which", choices=["stahl", "s2", "general", "bukhcox"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--c", default="0", help="additive constant for 'general' (rational)")
    p.set_defaults(func=cmd_formulas)

    p = sub.add_parser("verify-cert", parents=[common], help="recompute a certificate offline")
    p.add_argument("cert")
    p.add_argument("--artifacts", help="artifact directory (default: next to the certificate)")
    p.set_defaults(func=cmd_verify_cert)

    p = sub.add_parser("oracle", parents=[common], help="exact brute-force oracles on small graphs")
    p.add_argument("which", choices=["minrank", "od2", "chi-k"])
    p.add_argument("--graph", required=True)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--budget", type=int, default=20_000_000, help="max search nodes")
    p.add_argument("--max-vertices", type=int, default=12)
    p.add_argument("--max-dimension", type=int, default=16)
    p.add_argument("--max-seconds", type=float, default=600.0)
    p.add_argument("--ledger", help="results ledger JSON (default: OUT/oracle_results.json)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("subspace", parents=[common], help="subspace avoidance and grading over Q")
    p.add_argument("which", choices=["avoid", "grade"])
    p.add_argument("--input", required=True, help="JSON with U, W (list) and ell_prime")
    p.set_defaults(func=cmd_subspace)
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        cfg = RunConfig(
            command=argv,
            memory_cap=int(args.memory_cap * 2**30),
            threads=_threads(args.threads),
            out=args.out,
            force=args.force,
            verbose=args.verbose,
        )
        return args.func(args, cfg)
    except (UsageError, ValueError, MemoryGuardExceeded, FileNotFoundError, MemoryError) as exc:
        print(f"gk: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
