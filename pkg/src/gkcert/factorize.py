"""Symmetric GF(2) factorisation M = B B^T and orthogonal representations.

The factorisation runs a symmetric congruence reduction: a nonzero diagonal
entry v = M[i, i] = 1 peels off the rank-one term v v^T (v = row i); once the
residual is alternating, the lowest nonzero entry (i, j) peels off the
hyperbolic term u w^T + w u^T (u, w = rows i, j).  Each hyperbolic pair is
then absorbed into a unit column g via

    g g^T + u w^T + w u^T = x x^T + y y^T + z z^T,
    x = g + u + w,  y = g + u,  z = g + w,

so the final B has exactly rank(M) columns.  A unit column exists as soon as
M has a nonzero diagonal entry, since the first pivot is then a unit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gkcert import _gf2
from gkcert.exactalg import PrimeFieldMatrix
from gkcert.kneser import GKParams, Graph, odd_girth_exceeds, triangle_free_packed
from gkcert.polyrep import representing_matrix_gfp


class AsymmetricInput(ValueError):
    pass


class AllZeroDiagonal(ValueError):
    pass


class FactorizationMismatch(RuntimeError):
    pass


@dataclass(frozen=True)
class GF2SymmetricFactorization:
    M: PrimeFieldMatrix
    r: int
    B: PrimeFieldMatrix  # n x r


def _gram_packed(rows_packed: np.ndarray, n: int) -> np.ndarray:
    """Packed n x n Gram matrix of the n vectors whose transposed matrix is given.

    ``rows_packed`` holds B^T (one column of B per row); B B^T is the sum of
    the outer products of those columns.
    """
    return _gf2.outer_accumulate(rows_packed, n)


def lempel_factorize(M: PrimeFieldMatrix) -> GF2SymmetricFactorization:
    if M.p != 2:
        raise ValueError("GF(2) matrix expected")
    if M.rows != M.cols:
        raise AsymmetricInput(f"matrix is {M.rows}x{M.cols}, not square")
    if not M.is_symmetric():
        raise AsymmetricInput("matrix is not symmetric")
    n = M.rows
    if n == 0 or not any(M[i, i] for i in range(n)):
        raise AllZeroDiagonal("no nonzero diagonal entry; M = B B^T with rank(M) columns is impossible")

    cols, kinds, count = _gf2.congruence_reduce(np.array(M.packed), n)
    cols = cols[:count]
    kinds = kinds[:count]
    units = [cols[k] for k in range(count) if kinds[k] == 0]
    out = [u.copy() for u in units]
    for k in range(count):
        if kinds[k] != 1:
            continue
        u, w = cols[k], cols[k + 1]
        g = out[0]
        out[0] = g ^ u ^ w
        out.append(g ^ u)
        out.append(g ^ w)

    bt = np.array(out, dtype=np.uint64).reshape(count, -1)
    if not np.array_equal(_gram_packed(bt, n), M.packed):
        raise FactorizationMismatch("B B^T != M")
    B = PrimeFieldMatrix.from_packed(_gf2.transpose(bt, count, n), count) if count else PrimeFieldMatrix.from_packed(np.zeros((n, 1), np.uint64), 0)
    return GF2SymmetricFactorization(M, count, B)


@dataclass(frozen=True)
class VectorAssignment:
    """One vector per vertex, stored as the rows of a GF(p) matrix."""

    field: int
    t: int
    vectors: PrimeFieldMatrix
    graph: dict | None = None

    @property
    def n(self) -> int:
        return self.vectors.rows

    def vector(self, v: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.vectors.row_block(v, v + 1)[0])

    def to_json(self, verified: bool | None = None) -> dict:
        if self.field != 2:
            raise ValueError("JSON export is defined for GF(2) assignments")
        nbytes = (self.t + 7) // 8
        packed = self.vectors.packed.view(np.uint8).reshape(self.n, -1)[:, :nbytes]
        return {
            "field": 2,
            "t": self.t,
            "vectors": [bytes(row).hex() for row in packed],
            "graph": self.graph,
            "verified": verified,
        }

    @classmethod
    def from_json(cls, data: dict) -> "VectorAssignment":
        t = int(data["t"])
        words = _gf2.n_words(t)
        rows = []
        for hx in data["vectors"]:
            raw = bytes.fromhex(hx).ljust(words * 8, b"\0")
            rows.append(np.frombuffer(raw, dtype=np.uint64))
        packed = np.array(rows, dtype=np.uint64).reshape(len(rows), words)
        return cls(2, t, PrimeFieldMatrix.from_packed(packed, t), data.get("graph"))


def orthogonal_rep_of_complement(params: GKParams) -> tuple[VectorAssignment, GF2SymmetricFactorization]:
    """Rows of B, where B B^T is the mod-2 representing matrix of K(d, s, m).

    Since that matrix vanishes on non-adjacent pairs and is 1 on the diagonal,
    the rows form an orthogonal representation of the complement.
    """
    M = representing_matrix_gfp(params, 2)
    fac = lempel_factorize(M)
    graph = {"complement_of": params.as_dict()}
    return VectorAssignment(2, fac.r, fac.B, graph), fac


def gram_matrix(assignment: VectorAssignment) -> PrimeFieldMatrix:
    """Pairwise inner products of the assigned vectors, computed directly."""
    V = assignment.vectors
    if assignment.field == 2:
        return PrimeFieldMatrix.from_packed(_gram_packed(V.transpose().packed, V.rows), V.rows)
    return V @ V.transpose()


def verify_orthogonal_representation(assignment: VectorAssignment, G, gram: PrimeFieldMatrix | None = None,
                                     block: int = 2048) -> tuple[bool, tuple | None]:
    """Every vector non-self-orthogonal and every adjacent pair orthogonal.

    Witness: ``("self-orthogonal", v)`` or ``("adjacent-pair", u, v)``.
    """
    if assignment.n != G.n:
        raise ValueError(f"{assignment.n} vectors for a graph on {G.n} vertices")
    gram = gram if gram is not None else gram_matrix(assignment)
    for start in range(0, G.n, block):
        stop = min(start + block, G.n)
        rows = gram.row_block(start, stop) != 0
        idx = np.arange(stop - start)
        diag = rows[idx, np.arange(start, stop)]
        if not diag.all():
            return False, ("self-orthogonal", start + int(np.flatnonzero(~diag)[0]))
        bad = rows & G.adjacency_block(start, stop)
        if bad.any():
            r, c = np.argwhere(bad)[0]
            return False, ("adjacent-pair", start + int(r), int(c))
    return True, None


def non_orthogonality_graph(vectors: PrimeFieldMatrix, gram: PrimeFieldMatrix | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Packed loopless adjacency of pairs with nonzero inner product, plus the diagonal."""
    if vectors.p != 2:
        raise ValueError("GF(2) vectors expected")
    n = vectors.rows
    gram = gram if gram is not None else gram_matrix(VectorAssignment(2, vectors.cols, vectors))
    adj = np.array(gram.packed)
    idx = np.arange(n)
    bits = (adj[idx, idx >> 6] >> (idx & 63).astype(np.uint64)) & np.uint64(1)
    adj[idx, idx >> 6] &= ~(np.uint64(1) << (idx & 63).astype(np.uint64))
    return adj, bits.astype(bool)


def nearly_orthogonal_check(vectors: PrimeFieldMatrix, gram: PrimeFieldMatrix | None = None,
                            method: str = "auto") -> tuple[bool, tuple | None]:
    """No self-orthogonal vector, and every three vectors contain an orthogonal pair.

    The second condition is triangle-freeness of the non-orthogonality graph,
    checked with ``odd_girth_exceeds(., 3)``; ``method="packed"`` runs the same
    depth-1 search word-parallel on the packed adjacency.
    Witness: ``("self-orthogonal", v)`` or ``("triangle", a, b, c)``.
    """
    if vectors.rows == 0:
        raise ValueError("empty system")
    adj, diag = non_orthogonality_graph(vectors, gram)
    if not diag.all():
        return False, ("self-orthogonal", int(np.flatnonzero(~diag)[0]))
    n = vectors.rows
    if method == "auto":
        method = "bfs" if n <= 5000 else "packed"
    if method == "packed":
        res = triangle_free_packed(adj, n)
    else:
        res = odd_girth_exceeds(Graph.from_adjacency(_gf2.unpack_rows(adj, n).astype(bool)), 3)
    if res.exceeds:
        return True, None
    return False, ("triangle", *res.cycle)
