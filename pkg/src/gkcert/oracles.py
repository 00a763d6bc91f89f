"""Brute-force ground truth on tiny graphs: minrank, od over GF(2), chi_k.

All searches are exact and deterministic.  Running out of budget raises
:class:`BudgetExceeded`; it is never turned into a bound.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

from gkcert.exactalg import _check_prime
from gkcert.kneser import GKParams, Graph, build_graph


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_vertices: int = 12
    max_dimension: int = 16
    max_nodes: int = 20_000_000
    max_seconds: float = 600.0

    def __post_init__(self):
        for name in ("max_vertices", "max_dimension", "max_nodes", "max_seconds"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


class _Meter:
    def __init__(self, budget: OracleBudget):
        self.budget = budget
        self.nodes = 0
        self.deadline = time.monotonic() + budget.max_seconds

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise BudgetExceeded(f"more than {self.budget.max_nodes} search nodes")
        if self.nodes & 0xFFF == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded(f"wall clock above {self.budget.max_seconds}s")


def _check_size(G, budget: OracleBudget):
    if G.n > budget.max_vertices:
        raise BudgetExceeded(f"{G.n} vertices > budget {budget.max_vertices}")


def independence_number(G) -> int:
    best = 0
    verts = list(range(G.n))
    for size in range(1, G.n + 1):
        if any(
            all(not G.adjacent(u, v) for u, v in itertools.combinations(S, 2))
            for S in itertools.combinations(verts, size)
        ):
            best = size
        else:
            break
    return best


# --------------------------------------------------------------------------
# minrank


def _reduce(vec: tuple[int, ...], basis: list[tuple[int, tuple[int, ...]]], p: int) -> tuple[int, ...]:
    w = list(vec)
    for piv, row in basis:
        f = w[piv]
        if f:
            w = [(x - f * y) % p for x, y in zip(w, row)]
    return tuple(w)


def _insert(basis, residual, p):
    piv = next(i for i, x in enumerate(residual) if x)
    inv = pow(residual[piv], p - 2, p)
    row = tuple(x * inv % p for x in residual)
    # keep rows fully reduced against the new pivot so _reduce stays one pass
    out = []
    for q, r in basis:
        f = r[piv]
        out.append((q, tuple((x - f * y) % p for x, y in zip(r, row)) if f else r))
    out.append((piv, row))
    return out


def _span(basis, p, n):
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        v = [0] * n
        for c, (_, row) in zip(coeffs, basis):
            if c:
                v = [(x + c * y) % p for x, y in zip(v, row)]
        yield tuple(v)


def _minrank_at_most(G, p: int, r: int, meter: _Meter) -> bool:
    n = G.n
    free = [[j for j in range(n) if j != i and G.adjacent(i, j)] for i in range(n)]

    def pattern_ok(i, v):
        if v[i] == 0:
            return False
        return all(v[j] == 0 for j in range(n) if j != i and not G.adjacent(i, j))

    def candidates(i):
        # rows are normalised to M[i, i] = 1: scaling a row keeps rank and pattern
        for vals in itertools.product(range(p), repeat=len(free[i])):
            v = [0] * n
            v[i] = 1
            for j, x in zip(free[i], vals):
                v[j] = x
            yield tuple(v)

    def dfs(i, basis):
        meter.tick()
        if i == n:
            return True
        if len(basis) == r:
            for v in _span(basis, p, n):
                if v[i] == 1 and pattern_ok(i, v) and dfs(i + 1, basis):
                    return True
            return False
        inside, outside = [], []
        for v in candidates(i):
            res = _reduce(v, basis, p)
            (outside if any(res) else inside).append((v, res))
        for v, _ in inside:
            if dfs(i + 1, basis):
                return True
            break  # every in-span row leaves the same basis
        for v, res in outside:
            if dfs(i + 1, _insert(basis, res, p)):
                return True
        return False

    return dfs(0, [])


def minrank_exact(G, p: int = 2, budget: OracleBudget | None = None) -> int:
    """Minimum rank over GF(p) of a matrix representing G.

    Both orientations of every edge are free entries, so non-symmetric
    matrices are included.
    """
    p = _check_prime(p)
    budget = budget or OracleBudget()
    _check_size(G, budget)
    if G.n == 0:
        return 0
    meter = _Meter(budget)
    for r in range(max(1, independence_number(G)), G.n + 1):
        if _minrank_at_most(G, p, r, meter):
            return r
    return G.n  # the identity always represents G


# --------------------------------------------------------------------------
# orthogonality dimension over GF(2)


def _od_at_most(G, t: int, meter: _Meter) -> bool:
    odd = [x for x in range(1, 1 << t) if x.bit_count() & 1]
    order = sorted(range(G.n), key=lambda v: (-len(G.neighbors(v)), v))
    assigned: dict[int, int] = {}

    def dfs(k):
        meter.tick()
        if k == len(order):
            return True
        v = order[k]
        if k == 0:
            # coordinate permutations preserve the form: first vector is 1^w 0^(t-w)
            cands = [(1 << w) - 1 for w in range(1, t + 1, 2)]
        else:
            nb = [assigned[u] for u in G.neighbors(v) if u in assigned]
            cands = [x for x in odd if all(not (x & y).bit_count() & 1 for y in nb)]
        for x in cands:
            assigned[v] = x
            if dfs(k + 1):
                return True
            del assigned[v]
        return False

    return dfs(0)


def od_exact_gf2(G, budget: OracleBudget | None = None) -> int:
    """Smallest t with odd-weight vectors in GF(2)^t, adjacent vertices orthogonal."""
    budget = budget or OracleBudget()
    _check_size(G, budget)
    if G.n == 0:
        return 0
    meter = _Meter(budget)
    for t in range(1, G.n + 1):
        if t > budget.max_dimension:
            raise BudgetExceeded(f"dimension {t} > budget {budget.max_dimension}")
        if _od_at_most(G, t, meter):
            return t
    raise AssertionError("standard basis assignment always works at t = n")


# --------------------------------------------------------------------------
# homomorphisms and multichromatic numbers


def _hom_search(G, H, meter: _Meter, first_fixed: bool = False) -> dict[int, int] | None:
    image: dict[int, int] = {}
    hn = [set(H.neighbors(x)) for x in range(H.n)]
    all_h = set(range(H.n))

    def pick():
        best, score = None, None
        for v in range(G.n):
            if v in image:
                continue
            s = sum(1 for u in G.neighbors(v) if u in image)
            if score is None or s > score:
                best, score = v, s
        return best

    def dfs():
        meter.tick()
        v = pick()
        if v is None:
            return True
        dom = all_h
        for u in G.neighbors(v):
            if u in image:
                dom = dom & hn[image[u]]
                if not dom:
                    return False
        cands = sorted(dom)
        if first_fixed and not image:
            cands = cands[:1]
        for x in cands:
            image[v] = x
            if dfs():
                return True
            del image[v]
        return False

    return dict(image) if dfs() else None


def homomorphism_exists(G, H, budget: OracleBudget | None = None) -> bool:
    budget = budget or OracleBudget()
    _check_size(G, budget)
    return _hom_search(G, H, _Meter(budget)) is not None


def find_homomorphism(G, H, budget: OracleBudget | None = None) -> dict[int, int] | None:
    budget = budget or OracleBudget()
    _check_size(G, budget)
    return _hom_search(G, H, _Meter(budget))


def multichromatic_exact(G, k: int, budget: OracleBudget | None = None) -> int:
    """Smallest t with a homomorphism G -> K(t, k)."""
    if k < 1:
        raise ValueError("k must be positive")
    budget = budget or OracleBudget()
    _check_size(G, budget)
    meter = _Meter(budget)
    has_edge = any(G.neighbors(v) for v in range(G.n))
    if G.n == 0 or not has_edge:
        return k
    t = 2 * k  # K(t, k) is edgeless below 2k
    while True:
        if t > budget.max_dimension:
            raise BudgetExceeded(f"{t} colours > budget {budget.max_dimension}")
        H = build_graph(GKParams(t, k, 1)).to_graph()
        # K(t, k) is vertex-transitive, so the first image may be fixed
        if _hom_search(G, H, meter, first_fixed=True) is not None:
            return t
        t += 1


def kneser_graph(d: int, s: int) -> Graph:
    return build_graph(GKParams(d, s, 1)).to_graph()
