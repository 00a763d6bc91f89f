"""Low-rank representing matrices of K(d, s, m) from an integer-valued polynomial.

With q(t) = C(t - m, s - m), the matrix M[A, B] = q(|A & B|) has ones on the
diagonal and vanishes on every distinct non-adjacent pair.  Writing q in the
binomial basis, q(t) = sum_j c_j C(t, j), and using C(|A & B|, j) =
#{S : |S| = j, S <= A, S <= B} gives the exact factorisation

    M = B_incl . diag(c_|S|) . B_incl^T

where B_incl is the inclusion matrix of vertices against all S with
|S| <= s - m.  Its column count R = sum_{i <= s-m} C(d, i) bounds the rank
over Q, hence (by reduction) over every GF(p).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from gkcert import _gf2
from gkcert.exactalg import IntMatrix, PrimeFieldMatrix, _check_prime, rank_mod_p
from gkcert.kneser import GKGraph, GKParams, build_graph

DEFAULT_MAX_VERTICES = 65536


class MemoryGuardExceeded(RuntimeError):
    pass


def _guard(params: GKParams, max_vertices: int | None, force: bool) -> None:
    cap = DEFAULT_MAX_VERTICES if max_vertices is None else max_vertices
    if not force and params.n > cap:
        raise MemoryGuardExceeded(f"K({params.d},{params.s},{params.m}) has {params.n} vertices > cap {cap}; pass force=True")


def binom_poly(x: int, k: int) -> int:
    """C(x, k) as a polynomial in x, valid for negative x too."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= x - i
    return num // factorial(k)


def q_value(t: int, s: int, m: int) -> int:
    return binom_poly(t - m, s - m)


def rank_bound(params: GKParams) -> int:
    return sum(comb(params.d, i) for i in range(params.s - params.m + 1))


@dataclass(frozen=True)
class NewtonCoefficients:
    s: int
    m: int
    c: tuple[int, ...]

    def evaluate(self, t: int) -> int:
        return sum(cj * comb(t, j) for j, cj in enumerate(self.c))


def newton_coefficients(s: int, m: int) -> NewtonCoefficients:
    """Forward differences c_j of q at 0, j = 0..s-m."""
    if not 1 <= m <= s:
        raise ValueError(f"need 1 <= m <= s, got s={s}, m={m}")
    c = tuple(
        sum((-1) ** (j - i) * comb(j, i) * q_value(i, s, m) for i in range(j + 1))
        for j in range(s - m + 1)
    )
    return NewtonCoefficients(s, m, c)


@dataclass(frozen=True)
class RepresentingMatrix:
    params: GKParams
    field: int | None  # None for the integers, else the prime p
    matrix: IntMatrix | PrimeFieldMatrix


def _value_table(params: GKParams, p: int | None) -> np.ndarray:
    vals = [q_value(t, params.s, params.m) for t in range(params.s + 1)]
    if p is not None:
        vals = [v % p for v in vals]
    return np.array(vals, dtype=np.int64)


def representing_matrix_integer(params: GKParams, max_vertices: int | None = None, force: bool = False) -> RepresentingMatrix:
    _guard(params, max_vertices, force)
    G = build_graph(params)
    table = _value_table(params, None)
    M = IntMatrix(table[G.intersections(0, G.n)])
    return RepresentingMatrix(params, None, M)


def representing_matrix_gfp(params: GKParams, p: int, graph: GKGraph | None = None,
                            max_vertices: int | None = None, force: bool = False,
                            block: int = 2048) -> PrimeFieldMatrix:
    """Entry (A, B) = q(|A & B|) mod p, built blockwise from intersection sizes."""
    p = _check_prime(p)
    _guard(params, max_vertices, force)
    G = graph or build_graph(params)
    table = _value_table(params, p)
    if p == 2:
        words = np.zeros((G.n, _gf2.n_words(G.n)), dtype=np.uint64)
        for start in range(0, G.n, block):
            stop = min(start + block, G.n)
            words[start:stop] = _gf2.pack_rows(table[G.intersections(start, stop)].astype(np.uint8))
        return PrimeFieldMatrix.from_packed(words, G.n)
    return PrimeFieldMatrix(table[G.intersections(0, G.n)], p)


@dataclass(frozen=True)
class PolyRepFactorization:
    params: GKParams
    R: int
    columns: tuple[int, ...]  # masks of the small subsets S, by (|S|, colex)
    inclusion: IntMatrix  # n x R, entry 1 iff S <= A
    diag: tuple[int, ...]  # c_|S| per column

    def product(self) -> IntMatrix:
        scaled = IntMatrix(self.inclusion.to_array() * np.array(self.diag, dtype=object))
        return scaled @ self.inclusion.T


def inclusion_factorization(params: GKParams, max_vertices: int | None = None, force: bool = False) -> PolyRepFactorization:
    _guard(params, max_vertices, force)
    coeffs = newton_coefficients(params.s, params.m)
    cols: list[int] = []
    diag: list[int] = []
    for j in range(params.s - params.m + 1):
        subsets = sorted(sum(1 << i for i in c) for c in itertools.combinations(range(params.d), j))
        cols.extend(subsets)
        diag.extend([coeffs.c[j]] * len(subsets))
    G = build_graph(params)
    colmask = np.array(cols, dtype=np.uint64)
    incl = (G.masks[:, None] & colmask[None, :]) == colmask[None, :]
    R = rank_bound(params)
    assert len(cols) == R
    return PolyRepFactorization(params, R, tuple(cols), IntMatrix(incl.astype(np.int64)), tuple(diag))


def verify_represents(M: PrimeFieldMatrix, G, block: int = 2048) -> tuple[bool, tuple | None]:
    """Nonzero diagonal and zero on every distinct non-adjacent pair.

    The witness is ``("diagonal", i)`` or ``("pair", i, j)`` for the first
    violation in row-major order.
    """
    if M.rows != M.cols or M.rows != G.n:
        raise ValueError(f"matrix {M.shape} does not match graph on {G.n} vertices")
    for start in range(0, G.n, block):
        stop = min(start + block, G.n)
        rows = M.row_block(start, stop) != 0
        idx = np.arange(stop - start)
        diag = rows[idx, np.arange(start, stop)]
        if not diag.all():
            i = start + int(np.flatnonzero(~diag)[0])
            return False, ("diagonal", i)
        allowed = G.adjacency_block(start, stop)
        allowed[idx, np.arange(start, stop)] = True
        bad = rows & ~allowed
        if bad.any():
            r, c = np.argwhere(bad)[0]
            return False, ("pair", start + int(r), int(c))
    return True, None


@dataclass
class ModPReport:
    params: GKParams
    p: int
    matrix: PrimeFieldMatrix
    rank: int
    R: int
    represents: bool
    symmetric: bool
    witness: tuple | None = None

    @property
    def n(self) -> int:
        return self.matrix.rows

    @property
    def verdict(self) -> bool:
        return self.represents and self.symmetric and self.rank <= self.R

    def fragment(self) -> dict:
        return {
            **self.params.as_dict(),
            "p": self.p,
            "n": self.n,
            "R": self.R,
            "rank": self.rank,
            "symmetric": self.symmetric,
            "represents": self.represents,
            "matrix_digest": self.matrix.digest(),
        }


def representing_matrix_mod_p(params: GKParams, p: int, graph: GKGraph | None = None,
                              max_vertices: int | None = None, force: bool = False) -> ModPReport:
    G = graph or build_graph(params)
    M = representing_matrix_gfp(params, p, graph=G, max_vertices=max_vertices, force=force)
    ok, witness = verify_represents(M, G)
    return ModPReport(
        params=params,
        p=M.p,
        matrix=M,
        rank=rank_mod_p(M),
        R=rank_bound(params),
        represents=ok,
        symmetric=M.is_symmetric(),
        witness=witness,
    )
