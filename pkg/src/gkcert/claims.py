"""Closed-form bounds, end-to-end certificates, and exact crossover search.

Every verdict here is decided with integer or ``Fraction`` arithmetic;
floats appear only as display values (entropy estimates, implied exponents).
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from math import ceil, comb
from pathlib import Path

import numpy as np

import gkcert
from gkcert.exactalg import save_matrix
from gkcert.factorize import (
    gram_matrix,
    lempel_factorize,
    nearly_orthogonal_check,
    verify_orthogonal_representation,
    VectorAssignment,
)
from gkcert.kneser import GKParams, build_graph, is_odd_cycle, odd_girth_exceeds, triangle_free_packed
from gkcert.polyrep import rank_bound, representing_matrix_mod_p

GIRTH_EXHAUSTIVE_MAX = 5000


# --------------------------------------------------------------------------
# formulas


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def stahl_rhs(k: int, s: int, d: int) -> int:
    """ceil(k/s) * (d - 2s) + 2k, the closed-form upper value for chi_k(K(d, s))."""
    if k < 1 or s < 1 or d < 2 * s:
        raise ValueError(f"need k >= 1, s >= 1, d >= 2s; got k={k}, s={s}, d={d}")
    return _ceil_div(k, s) * (d - 2 * s) + 2 * k


def thm_s2_value(k: int, d: int) -> int:
    """ceil(k/2) * (d - 4) + 2k: od_k(K(d, 2)) over the reals."""
    if k < 1 or d < 4:
        raise ValueError(f"need k >= 1, d >= 4; got k={k}, d={d}")
    return _ceil_div(k, 2) * (d - 4) + 2 * k


def thm_general_lower(k: int, s: int, d: int, c: Fraction | int = 0) -> Fraction:
    """(k - ceil((k+1)/s) + 1) / (s - 1) * d - c.

    The additive constant c depends on (s, k) and is not pinned down
    explicitly, so the caller supplies it.
    """
    if not (k >= s >= 3 and d >= 2 * s and c >= 0):
        raise ValueError(f"need k >= s >= 3, d >= 2s, c >= 0; got k={k}, s={s}, d={d}, c={c}")
    return Fraction(k - _ceil_div(k + 1, s) + 1, s - 1) * d - Fraction(c)


def bukh_cox_lower(k: int, s: int, d: int) -> Fraction:
    if k < 1 or s < 1 or d < 2 * s:
        raise ValueError(f"need k >= 1, s >= 1, d >= 2s; got k={k}, s={s}, d={d}")
    return Fraction(k * d, s)


# --------------------------------------------------------------------------
# certificates


@dataclass
class Certificate:
    claim: str
    params: dict
    measured: dict
    digests: dict
    verdict: bool
    notes: list = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)
    run_config: dict | None = None
    version: str = gkcert.__version__
    created: str = ""
    runtime: dict = field(default_factory=dict)

    # fields that legitimately differ between identical runs
    VOLATILE = ("created", "runtime")

    def payload(self) -> dict:
        d = asdict(self)
        for k in self.VOLATILE:
            d.pop(k)
        return d

    def digest(self) -> str:
        blob = json.dumps(self.payload(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_json(self) -> dict:
        d = asdict(self)
        d["certificate_digest"] = self.digest()
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        data = dict(data)
        data.pop("certificate_digest", None)
        return cls(**data)


def _stamp(cert: Certificate, t0: float) -> Certificate:
    cert.created = datetime.now(timezone.utc).isoformat(timespec="seconds")
    cert.runtime = {"seconds": round(time.perf_counter() - t0, 3)}
    return cert


def _check_odd_girth(G, ell: int, mode: str, threshold: int, samples: int, sample_size: int, seed: int) -> dict:
    """Odd-girth check at the requested mode; returns certificate fields."""
    if mode == "auto":
        if G.n <= threshold:
            mode = "exhaustive"
        elif ell == 3:
            mode = "exhaustive-packed"
        else:
            mode = "sampled"
    if mode == "exhaustive":
        res = odd_girth_exceeds(G, ell)
        complete = True
    elif mode == "exhaustive-packed":
        if ell != 3:
            raise ValueError("packed odd-girth check only handles ell = 3")
        res = triangle_free_packed(G.packed_adjacency(), G.n)
        complete = True
    elif mode == "sampled":
        # a short odd cycle in an induced subgraph is one in G; absence proves nothing
        rng = np.random.default_rng(seed)
        res = None
        for _ in range(samples):
            verts = np.sort(rng.choice(G.n, size=min(sample_size, G.n), replace=False)).tolist()
            sub = G.induced(verts)
            r = odd_girth_exceeds(sub, ell)
            if not r.exceeds:
                res = type(r)(False, tuple(verts[i] for i in r.cycle))
                break
        if res is None:
            res = type(r)(True, None)
        complete = False
    else:
        raise ValueError(f"unknown odd-girth mode {mode!r}")
    out = {
        "odd_girth_exceeds_ell": res.exceeds,
        "girth_mode": mode,
        "girth_complete": complete,
        "girth_witness": list(res.cycle) if res.cycle else None,
    }
    if mode == "sampled":
        out["girth_samples"] = {"count": samples, "size": min(sample_size, G.n), "seed": seed}
    if res.cycle is not None:
        assert is_odd_cycle(G, res.cycle)
    return out


def _save(cert: Certificate, out_dir, name: str, M) -> None:
    if out_dir is None:
        return
    path = Path(out_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    cert.artifacts[name] = save_matrix(M, path)


def cycle_free_certificate(ell: int, d: int, p: int = 2, girth_mode: str = "auto",
                           threshold: int = GIRTH_EXHAUSTIVE_MAX, samples: int = 20,
                           sample_size: int = 2000, seed: int = 0, out_dir=None,
                           force: bool = False) -> Certificate:
    """K(d, d/2, d/(2 ell)): no odd cycle of length <= ell, low-rank representing matrix."""
    t0 = time.perf_counter()
    if ell < 3 or ell % 2 == 0:
        raise ValueError(f"ell must be odd and >= 3, got {ell}")
    if d <= 0 or d % (2 * ell):
        raise ValueError(f"d = {d} is not a positive multiple of 2*ell = {2 * ell}")
    params = GKParams(d, d // 2, d // (2 * ell))
    G = build_graph(params)
    girth = _check_odd_girth(G, ell, girth_mode, threshold, samples, sample_size, seed)
    rep = representing_matrix_mod_p(params, p, graph=G, force=force)
    measured = {
        "n": rep.n,
        "R": rep.R,
        "rank": rep.rank,
        **girth,
        "represents": rep.represents,
        "symmetric": rep.symmetric,
        "rank_le_R": rep.rank <= rep.R,
        "R_lt_n": rep.R < rep.n,
        "rank_lt_n": rep.rank < rep.n,
        "degenerate": params.degree <= 1,
    }
    notes = []
    if not measured["R_lt_n"]:
        notes.append(f"R = {rep.R} >= n = {rep.n}: the rank bound is vacuous at this size")
    if measured["degenerate"]:
        notes.append("degenerate: every vertex is adjacent only to its complement (perfect matching)")
    if not girth["girth_complete"]:
        notes.append("odd girth checked on sampled induced subgraphs only; absence is not proven")
    cert = Certificate(
        claim="cycles",
        params={"ell": ell, "d": d, "s": params.s, "m": params.m, "p": p},
        measured=measured,
        digests={"M": rep.matrix.digest()},
        verdict=bool(girth["odd_girth_exceeds_ell"] and rep.verdict),
        notes=notes,
    )
    _save(cert, out_dir, "M.txt", rep.matrix)
    return _stamp(cert, t0)


def triangle_free_od_certificate(d: int, girth_mode: str = "auto", threshold: int = GIRTH_EXHAUSTIVE_MAX,
                                 samples: int = 20, sample_size: int = 2000, seed: int = 0,
                                 out_dir=None, force: bool = False) -> Certificate:
    """Triangle-free K(d, d/2, d/6) whose complement has a low-dimensional GF(2) representation."""
    t0 = time.perf_counter()
    if d <= 0 or d % 6:
        raise ValueError(f"d = {d} is not a positive multiple of 6")
    params = GKParams(d, d // 2, d // 6)
    G = build_graph(params)
    girth = _check_odd_girth(G, 3, girth_mode, threshold, samples, sample_size, seed)
    rep = representing_matrix_mod_p(params, 2, graph=G, force=force)
    fac = lempel_factorize(rep.matrix)
    rep_vectors = VectorAssignment(2, fac.r, fac.B, {"complement_of": params.as_dict()})
    gram = gram_matrix(rep_vectors)
    ortho_ok, ortho_w = verify_orthogonal_representation(rep_vectors, G.complement(), gram=gram)
    near_ok, near_w = nearly_orthogonal_check(fac.B, gram=gram)
    measured = {
        "n": rep.n,
        "R": rep.R,
        "rank": rep.rank,
        "r": fac.r,
        **girth,
        "represents": rep.represents,
        "symmetric": rep.symmetric,
        "rank_le_R": rep.rank <= rep.R,
        "factorization_verified": fac.r == rep.rank,
        "orthogonal_representation": ortho_ok,
        "orthogonal_witness": list(ortho_w) if ortho_w else None,
        "nearly_orthogonal": near_ok,
        "nearly_orthogonal_witness": list(near_w) if near_w else None,
        "system_size_gt_dimension": rep.n > fac.r,
        "R_lt_n": rep.R < rep.n,
        "r_lt_n": fac.r < rep.n,
    }
    notes = []
    if not measured["R_lt_n"]:
        notes.append(f"R = {rep.R} >= n = {rep.n}: the rank bound is vacuous at this size")
    if not measured["r_lt_n"]:
        notes.append(f"measured r = {fac.r} >= n = {rep.n}")
    if not girth["girth_complete"]:
        notes.append("triangle-freeness checked on sampled induced subgraphs only")
    verdict = all(
        measured[k]
        for k in ("odd_girth_exceeds_ell", "represents", "symmetric", "rank_le_R",
                  "factorization_verified", "orthogonal_representation", "nearly_orthogonal")
    )
    cert = Certificate(
        claim="triangle-free",
        params={"ell": 3, "d": d, "s": params.s, "m": params.m, "p": 2},
        measured=measured,
        digests={"M": rep.matrix.digest(), "B": fac.B.digest()},
        verdict=bool(verdict),
        notes=notes,
    )
    _save(cert, out_dir, "M.txt", rep.matrix)
    _save(cert, out_dir, "B.txt", fac.B)
    return _stamp(cert, t0)


@dataclass(frozen=True)
class SignVectorAssignment:
    """w_A in {+1, -1}^d, +1 exactly on A; the 1/sqrt(d) scale stays implicit."""

    d: int
    masks: np.ndarray

    def vector(self, v: int) -> tuple[int, ...]:
        m = int(self.masks[v])
        return tuple(1 if m >> i & 1 else -1 for i in range(self.d))

    def inner(self, u: int, v: int) -> Fraction:
        """Normalised inner product (d - 2 |A ^ B|) / d."""
        sym = (int(self.masks[u]) ^ int(self.masks[v])).bit_count()
        return Fraction(self.d - 2 * sym, self.d)


def vchrom3_certificate(d: int, p: int = 2, out_dir=None, force: bool = False, block: int = 1024) -> Certificate:
    """K(d, d/2, d/8): vector chromatic number <= 3 and a minrank bound for the complement."""
    t0 = time.perf_counter()
    if d <= 0 or d % 8:
        raise ValueError(f"d = {d} is not a positive multiple of 8")
    params = GKParams(d, d // 2, d // 8)
    G = build_graph(params)
    w = SignVectorAssignment(d, G.masks)
    all_ok = True
    worst = None  # largest |A ^ B| deficit seen: min symmetric difference over adjacent pairs
    violation = None
    for start in range(0, G.n, block):
        stop = min(start + block, G.n)
        inter = G.intersections(start, stop).astype(np.int64)
        adj = inter < params.m
        sym = 2 * (params.s - inter)
        ok = (4 * sym >= 3 * d) | ~adj
        if adj.any():
            low = int(sym[adj].min())
            worst = low if worst is None else min(worst, low)
        if not ok.all() and violation is None:
            r, c = np.argwhere(~ok)[0]
            violation = [start + int(r), int(c)]
            all_ok = False
    rep = representing_matrix_mod_p(params, p, graph=G, force=force)
    r = rep.rank
    max_inner = Fraction(d - 2 * worst, d) if worst is not None else None
    measured = {
        "n": rep.n,
        "R": rep.R,
        "rank": r,
        "sign_vectors_ok": all_ok,
        "sign_violation": violation,
        "min_symmetric_difference": worst,
        "max_adjacent_inner_product": str(max_inner) if max_inner is not None else None,
        "vchrom_le_3": all_ok,
        "represents": rep.represents,
        "symmetric": rep.symmetric,
        "rank_le_R": r <= rep.R,
        "complement_minrank_lower_bound": _ceil_div(rep.n, r),
        "R_lt_n": rep.R < rep.n,
    }
    notes = []
    if not measured["R_lt_n"]:
        notes.append(f"R = {rep.R} >= n = {rep.n}: the rank bound is vacuous at this size; the measured rank is what bounds the complement")
    cert = Certificate(
        claim="vchrom",
        params={"d": d, "s": params.s, "m": params.m, "p": p},
        measured=measured,
        digests={"M": rep.matrix.digest()},
        verdict=bool(all_ok and rep.verdict),
        notes=notes,
    )
    _save(cert, out_dir, "M.txt", rep.matrix)
    return _stamp(cert, t0)


def rebuild_certificate(cert: Certificate, out_dir=None) -> Certificate:
    """Re-run the pipeline a certificate describes, from its parameters alone."""
    p = cert.params
    opts = dict((cert.run_config or {}).get("pipeline_options", {}))
    if cert.claim == "cycles":
        return cycle_free_certificate(p["ell"], p["d"], p["p"], out_dir=out_dir, **opts)
    if cert.claim == "triangle-free":
        return triangle_free_od_certificate(p["d"], out_dir=out_dir, **opts)
    if cert.claim == "vchrom":
        return vchrom3_certificate(p["d"], p["p"], out_dir=out_dir, **opts)
    raise ValueError(f"unknown claim {cert.claim!r}")


def _file_digest(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def verify_certificate(cert: Certificate, artifact_dir=None) -> tuple[bool, list[str]]:
    """Recompute a certificate and compare every non-volatile field.

    Stored artifact files, when present in ``artifact_dir``, must hash to the
    recorded digests.  Returns (stored verdict reproduced and true, mismatches).
    """
    problems: list[str] = []
    fresh = rebuild_certificate(cert)
    for key in ("measured", "digests", "verdict", "params", "notes"):
        a, b = getattr(cert, key), getattr(fresh, key)
        if a != b:
            problems.append(f"{key}: stored {a!r} != recomputed {b!r}")
    if artifact_dir is not None:
        for name, digest in cert.artifacts.items():
            path = Path(artifact_dir) / name
            if not path.exists():
                problems.append(f"artifact {name} missing")
            elif _file_digest(path) != digest:
                problems.append(f"artifact {name} digest mismatch")
            elif name[:-4] in fresh.digests and fresh.digests[name[:-4]] != digest:
                problems.append(f"artifact {name} differs from the rebuilt matrix")
    return (not problems and fresh.verdict), problems


# --------------------------------------------------------------------------
# crossover search


def binary_entropy(x: float) -> float:
    if x <= 0 or x >= 1:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


@dataclass(frozen=True)
class BoundReport:
    d: int
    m: int
    n: int
    R: int
    log2_entropy_estimate: float
    entropy_estimate: float
    below: bool  # R < n, exact
    delta: float

    def to_json(self) -> dict:
        out = asdict(self)
        out["n"] = str(self.n) if self.n >= 1 << 53 else self.n
        out["R"] = str(self.R) if self.R >= 1 << 53 else self.R
        if math.isinf(self.entropy_estimate):
            out["entropy_estimate"] = None
        return out


def parse_rule(rule: str) -> tuple[int, int]:
    """'ell:L' -> (2L, 2L) and 'vchrom' / 'd/8' -> (8, 8): (step of d, divisor giving m)."""
    if rule in ("vchrom", "d/8", "m=d/8"):
        return 8, 8
    if rule.startswith("ell:"):
        ell = int(rule[4:])
        if ell < 3 or ell % 2 == 0:
            raise ValueError("ell must be odd and >= 3")
        return 2 * ell, 2 * ell
    raise ValueError(f"unknown rule {rule!r}; use 'ell:L' or 'vchrom'")


def _binomial_prefix(d: int, top: int) -> tuple[int, int]:
    """(sum_{i <= top} C(d, i), C(d, d // 2)) from one running product."""
    c, total, mid = 1, 0, None
    for i in range(d // 2 + 1):
        if i <= top:
            total += c
        if i == d // 2:
            mid = c
        c = c * (d - i) // (i + 1)
    return total, mid


def bound_report(d: int, m: int) -> BoundReport:
    s = d // 2
    R, n = _binomial_prefix(d, s - m)
    log2_est = binary_entropy(0.5 - m / d) * d
    est = 2.0 ** log2_est if log2_est < 1000 else math.inf
    delta = 1 - math.log(R) / math.log(n) if n > 1 else 0.0
    return BoundReport(d, m, n, R, log2_est, est, R < n, delta)


def crossover_search(rule: str, d_max: int) -> tuple[list[BoundReport], int | None]:
    """Exact R vs n for every admissible d <= d_max, and the least d with R < n."""
    if d_max > 10_000:
        raise ValueError("d_max above 10^4 is out of range")
    step, div = parse_rule(rule)
    reports = [bound_report(d, d // div) for d in range(step, d_max + 1, step)]
    first = next((r.d for r in reports if r.below), None)
    return reports, first
