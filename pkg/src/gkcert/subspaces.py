"""Constructive subspace avoidance over Q.

Everything is exact: subspaces are kept as reduced row echelon bases of
``Fraction`` rows, so equal subspaces compare equal structurally.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from gkcert.exactalg import rref

Vector = tuple[Fraction, ...]


class CoveringCollection(ValueError):
    """Some subspace of the collection contains U, so nothing in U avoids it."""


class PreconditionViolated(ValueError):
    def __init__(self, message: str, subspace: "Subspace | None" = None):
        super().__init__(message)
        self.subspace = subspace


class Subspace:
    __slots__ = ("ambient", "basis")

    def __init__(self, ambient: int, vectors: Iterable[Sequence] = ()):
        rows = [list(v) for v in vectors]
        for v in rows:
            if len(v) != ambient:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient}")
        ech, _ = rref(rows, ambient) if rows else ([], [])
        self.ambient = ambient
        self.basis: tuple[Vector, ...] = tuple(tuple(r) for r in ech)

    @classmethod
    def full(cls, t: int) -> "Subspace":
        return cls(t, [[int(i == j) for j in range(t)] for i in range(t)])

    @classmethod
    def zero(cls, t: int) -> "Subspace":
        return cls(t)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        rows = ", ".join("(" + ", ".join(str(x) for x in r) + ")" for r in self.basis)
        return f"Subspace(ambient={self.ambient}, basis=[{rows}])"

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient:
            raise ValueError("ambient mismatch")
        w = [Fraction(x) for x in v]
        for row in self.basis:
            c = next(i for i, x in enumerate(row) if x != 0)
            if w[c] != 0:
                f = w[c]
                w = [x - f * y for x, y in zip(w, row)]
        return all(x == 0 for x in w)

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubspace(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return span_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def to_json(self) -> dict:
        return {"ambient": self.ambient, "basis": [[str(x) for x in r] for r in self.basis]}

    @classmethod
    def from_json(cls, data: dict) -> "Subspace":
        return cls(int(data["ambient"]), [[Fraction(x) for x in r] for r in data["basis"]])


def _same_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient != b.ambient:
        raise ValueError(f"ambient mismatch: {a.ambient} vs {b.ambient}")


def span_sum(a: Subspace, b: Subspace) -> Subspace:
    _same_ambient(a, b)
    return Subspace(a.ambient, a.basis + b.basis)


def _left_kernel(rows: list[Vector]) -> list[list[Fraction]]:
    """Basis of {x : x . rows = 0}."""
    k = len(rows)
    if k == 0:
        return []
    t = len(rows[0])
    cols = [[rows[i][j] for i in range(k)] for j in range(t)]  # rows^T, t x k
    ech, pivots = rref(cols, k) if cols else ([], [])
    free = [c for c in range(k) if c not in pivots]
    out = []
    for f in free:
        x = [Fraction(0)] * k
        x[f] = Fraction(1)
        for row, pc in zip(ech, pivots):
            x[pc] = -row[f]
        out.append(x)
    return out


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """a & b from the left kernel of the stacked bases: x A = y B."""
    _same_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient)
    ker = _left_kernel(list(a.basis) + list(b.basis))
    vecs = []
    for x in ker:
        coeffs = x[: a.dim]
        vecs.append([sum((c * r[j] for c, r in zip(coeffs, a.basis)), Fraction(0)) for j in range(a.ambient)])
    return Subspace(a.ambient, vecs)


def moment_point(U: Subspace, alpha: int) -> Vector:
    """sum_j alpha**j * b_j over the echelon basis b_0.. of U."""
    out = [Fraction(0)] * U.ambient
    w = Fraction(1)
    for b in U.basis:
        out = [x + w * y for x, y in zip(out, b)]
        w *= alpha
    return tuple(out)


def scan_uncovered(U: Subspace, Ws: Sequence[Subspace]) -> tuple[Vector, int]:
    """First moment-curve point of U outside every W, and the alpha it used.

    Each W meets U in a proper subspace, so at most dim(U) - 1 values of alpha
    land in it; the scan therefore stops within len(Ws) * (dim U - 1) + 1 steps.
    """
    if U.dim == 0:
        raise ValueError("U must be nonzero")
    for W in Ws:
        _same_ambient(U, W)
        if U.issubspace(W):
            raise CoveringCollection(f"{W!r} contains U")
    limit = len(Ws) * (U.dim - 1) + 1
    for alpha in range(limit):
        u = moment_point(U, alpha)
        if not any(W.contains(u) for W in Ws):
            return u, alpha
    raise AssertionError("moment-curve scan exceeded its bound")


def uncovered_vector(U: Subspace, Ws: Sequence[Subspace]) -> Vector:
    return scan_uncovered(U, Ws)[0]


def graded_subspace(U: Subspace, Ws: Sequence[Subspace], ell_prime: int) -> Subspace:
    """U' <= U with dim ell' and dim(U' & W) = max(0, dim W + ell' - dim U).

    Grows U' one vector at a time; each new vector avoids every proper
    subspace among {U' + W}, and also U' itself.
    """
    ell = U.dim
    if not 0 <= ell_prime <= ell:
        raise ValueError(f"need 0 <= ell' <= {ell}, got {ell_prime}")
    for W in Ws:
        _same_ambient(U, W)
        if not W.issubspace(U):
            raise PreconditionViolated(f"{W!r} is not a subspace of U", W)
    cur = Subspace.zero(U.ambient)
    for _ in range(ell_prime):
        coll = [cur] + [S for S in (cur + W for W in Ws) if S.dim < ell]
        u = uncovered_vector(U, coll)
        cur = cur + Subspace(U.ambient, [u])
    return cur


def avoiding_subspace(U: Subspace, Ws: Sequence[Subspace], ell_prime: int) -> Subspace:
    """U' <= U with dim(U) - ell' dimensions meeting every W trivially."""
    ell = U.dim
    if not 0 <= ell_prime <= ell:
        raise ValueError(f"need 0 <= ell' <= {ell}, got {ell_prime}")
    meets = []
    for W in Ws:
        _same_ambient(U, W)
        X = U & W
        if X.dim > ell_prime:
            raise PreconditionViolated(f"dim(U & W) = {X.dim} > {ell_prime} for {W!r}", W)
        meets.append(X)
    return graded_subspace(U, meets, ell - ell_prime)
