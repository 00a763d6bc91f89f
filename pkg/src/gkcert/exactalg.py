"""Exact dense linear algebra over GF(p) and the rationals.

GF(2) matrices are bit-packed into uint64 words and eliminated with
word-parallel XOR; other primes use int64 residues (object arrays once
``p * p`` would overflow).  Integer and rational matrices hold Python ints /
``Fraction`` so nothing ever overflows.  No floating point is used anywhere.
"""

from __future__ import annotations

import hashlib
import io
import math
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

import numpy as np

from gkcert import _gf2

_INT64_SAFE = 1 << 62
_SMALL_PRIME = 1 << 31


def is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin, exact for every p < 3.3e24."""
    if not isinstance(p, (int, np.integer)) or p < 2:
        return False
    p = int(p)
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if p % q == 0:
            return p == q
    d, r = p - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(r - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def _check_prime(p) -> int:
    if not is_prime(p):
        raise ValueError(f"modulus {p!r} is not prime")
    return int(p)


class PrimeFieldMatrix:
    """Immutable dense matrix over GF(p).

    For ``p == 2`` the rows are packed (see :mod:`gkcert._gf2`); use
    :meth:`to_array` for a dense 0/1 view.
    """

    __slots__ = ("p", "rows", "cols", "_data")

    def __init__(self, entries, p: int):
        p = _check_prime(p)
        if p < _SMALL_PRIME:
            arr = np.array(entries, dtype=np.int64)
        else:
            arr = np.array([[int(x) for x in row] for row in entries], dtype=object)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ValueError("entries must form a 2-D array")
        if arr.size and (np.any(arr < 0) or np.any(arr >= p)):
            raise ValueError(f"entries must lie in [0, {p})")
        self.p = p
        self.rows, self.cols = arr.shape
        if p == 2:
            self._data = _gf2.pack_rows(arr.astype(np.uint8))
        else:
            self._data = arr
        self._data.setflags(write=False)

    @classmethod
    def from_packed(cls, words: np.ndarray, cols: int) -> "PrimeFieldMatrix":
        obj = cls.__new__(cls)
        obj.p = 2
        obj.rows = words.shape[0]
        obj.cols = cols
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.shape[1] != _gf2.n_words(cols):
            raise ValueError("packed width does not match column count")
        tail = cols & 63
        if tail and words.shape[0] and np.any(words[:, -1] >> np.uint64(tail)):
            raise ValueError("bits set beyond the last column")
        obj._data = words
        obj._data.setflags(write=False)
        return obj

    @classmethod
    def identity(cls, n: int, p: int) -> "PrimeFieldMatrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def packed(self) -> np.ndarray:
        if self.p != 2:
            raise ValueError("only GF(2) matrices are bit-packed")
        return self._data

    def to_array(self) -> np.ndarray:
        if self.p == 2:
            return _gf2.unpack_rows(self._data, self.cols)
        return self._data.copy()

    def row_block(self, start: int, stop: int) -> np.ndarray:
        if self.p == 2:
            return _gf2.unpack_rows(self._data[start:stop], self.cols)
        return np.array(self._data[start:stop])

    def __getitem__(self, idx):
        i, j = idx
        if self.p == 2:
            return int((int(self._data[i, j >> 6]) >> (j & 63)) & 1)
        return int(self._data[i, j])

    def __eq__(self, other):
        if not isinstance(other, PrimeFieldMatrix):
            return NotImplemented
        return (
            self.p == other.p
            and self.shape == other.shape
            and bool(np.array_equal(self._data, other._data))
        )

    __hash__ = None

    def __repr__(self):
        return f"PrimeFieldMatrix({self.rows}x{self.cols} over GF({self.p}))"

    def transpose(self) -> "PrimeFieldMatrix":
        if self.p == 2:
            return PrimeFieldMatrix.from_packed(
                _gf2.transpose(self._data, self.rows, self.cols), self.rows
            )
        return PrimeFieldMatrix(self._data.T, self.p)

    @property
    def T(self) -> "PrimeFieldMatrix":
        return self.transpose()

    def __matmul__(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        if not isinstance(other, PrimeFieldMatrix):
            return NotImplemented
        if self.p != other.p:
            raise ValueError("field mismatch")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.p == 2:
            return PrimeFieldMatrix.from_packed(
                _gf2.matmul(self._data, self.cols, other._data), other.cols
            )
        p = self.p
        if self.p < _SMALL_PRIME:
            # chunk the inner dimension so partial sums stay below 2**63
            step = max(1, _INT64_SAFE // ((p - 1) ** 2))
            out = np.zeros((self.rows, other.cols), dtype=np.int64)
            for k in range(0, self.cols, step):
                out = (out + self._data[:, k : k + step] @ other._data[k : k + step]) % p
            return PrimeFieldMatrix(out, p)
        return PrimeFieldMatrix(np.dot(self._data, other._data) % p, p)

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        if self.p == 2:
            return bool(_gf2.is_symmetric(self._data, self.rows))
        return bool(np.array_equal(self._data, self._data.T))

    def rank(self) -> int:
        return rank_mod_p(self)

    def to_text(self) -> str:
        buf = io.StringIO()
        write_matrix(self, buf)
        return buf.getvalue()

    def digest(self) -> str:
        return matrix_digest(self)


def _exact_int(x) -> int:
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    raise TypeError(f"not an integer: {x!r}")


class IntMatrix:
    """Immutable integer matrix with arbitrary-precision entries.

    Entries are kept in an int64 array while every magnitude stays below
    2**62; otherwise an object array of Python ints is used.
    """

    __slots__ = ("rows", "cols", "_a")

    def __init__(self, entries):
        if isinstance(entries, np.ndarray) and entries.dtype.kind in "iub":
            arr = entries.astype(np.int64) if entries.dtype != np.int64 else entries.copy()
            if entries.dtype == np.uint64 and arr.size and np.any(entries >= _INT64_SAFE):
                arr = np.array([[int(x) for x in row] for row in entries], dtype=object)
        else:
            rows = [[_exact_int(x) for x in row] for row in entries]
            width = {len(r) for r in rows}
            if len(width) > 1:
                raise ValueError("ragged rows")
            ncols = width.pop() if width else 0
            big = any(abs(x) >= _INT64_SAFE for r in rows for x in r)
            if big:
                arr = np.empty((len(rows), ncols), dtype=object)
                for i, r in enumerate(rows):
                    for j, x in enumerate(r):
                        arr[i, j] = x
            else:
                arr = np.array(rows, dtype=np.int64).reshape(len(rows), ncols)
        if arr.ndim != 2:
            raise ValueError("entries must form a 2-D array")
        if arr.dtype == np.int64 and arr.size and np.abs(arr).max() >= _INT64_SAFE:
            arr = arr.astype(object)
        self._a = arr
        self._a.setflags(write=False)
        self.rows, self.cols = arr.shape

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_array(self) -> np.ndarray:
        """Object array of Python ints (always exact)."""
        return np.array(self.tolist(), dtype=object).reshape(self.shape)

    def tolist(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self._a]

    def __getitem__(self, idx):
        return int(self._a[idx])

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.tolist() == other.tolist()

    __hash__ = None

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols})"

    def max_abs(self) -> int:
        if self._a.size == 0:
            return 0
        return max(abs(int(x)) for x in self._a.flat) if self._a.dtype == object else int(np.abs(self._a).max())

    def transpose(self) -> "IntMatrix":
        return IntMatrix(np.ascontiguousarray(self._a.T))

    @property
    def T(self) -> "IntMatrix":
        return self.transpose()

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and bool(np.array_equal(self._a, self._a.T))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        bound = self.max_abs() * other.max_abs() * max(self.cols, 1)
        if self._a.dtype == np.int64 and other._a.dtype == np.int64 and bound < _INT64_SAFE:
            return IntMatrix(self._a @ other._a)
        if self.rows == 0 or other.cols == 0:
            return IntMatrix(np.zeros((self.rows, other.cols), dtype=np.int64))
        return IntMatrix(np.dot(self._a.astype(object), other._a.astype(object)))

    def to_text(self) -> str:
        buf = io.StringIO()
        write_matrix(self, buf)
        return buf.getvalue()

    def digest(self) -> str:
        return matrix_digest(self)


class RationalMatrix:
    """Immutable matrix of ``Fraction`` entries in lowest terms."""

    __slots__ = ("rows", "cols", "_a")

    def __init__(self, entries):
        rows = [[Fraction(x) for x in row] for row in entries]
        width = {len(r) for r in rows}
        if len(width) > 1:
            raise ValueError("ragged rows")
        ncols = width.pop() if width else 0
        self._a = tuple(tuple(r) for r in rows)
        self.rows, self.cols = len(rows), ncols

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._a]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._a[i]

    def __getitem__(self, idx):
        i, j = idx
        return self._a[i][j]

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._a == other._a

    __hash__ = None

    def __repr__(self):
        return f"RationalMatrix({self.rows}x{self.cols})"

    def to_integer_rows(self) -> IntMatrix:
        """Scale every row by the lcm of its denominators (row span unchanged)."""
        out = []
        for r in self._a:
            scale = math.lcm(*(x.denominator for x in r)) if r else 1
            out.append([int(x * scale) for x in r])
        if not out:
            return IntMatrix(np.zeros((0, self.cols), dtype=np.int64))
        return IntMatrix(out)

    def to_text(self) -> str:
        buf = io.StringIO()
        write_matrix(self, buf)
        return buf.getvalue()

    def digest(self) -> str:
        return matrix_digest(self)


# --------------------------------------------------------------------------
# rank over GF(p)


def _rank_generic(arr: np.ndarray, p: int) -> int:
    """Schoolbook elimination mod p; pivots taken top-down in column order."""
    if p < _SMALL_PRIME:
        a = np.array(arr, dtype=np.int64) % p
    else:
        a = np.array([[int(x) % p for x in row] for row in arr], dtype=object).reshape(arr.shape)
    n, m = a.shape
    r = 0
    for c in range(m):
        if r == n:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = (a[r, c:] * inv) % p
        below = r + 1 + np.flatnonzero(a[r + 1 :, c] != 0)
        if below.size:
            f = a[below, c].copy()
            a[np.ix_(below, np.arange(c, m))] = (
                a[np.ix_(below, np.arange(c, m))] - np.outer(f, a[r, c:]) % p
            ) % p
        r += 1
    return r


def rank_gf2_generic(M: PrimeFieldMatrix) -> int:
    """Rank of a GF(2) matrix through the unpacked schoolbook path."""
    if M.p != 2:
        raise ValueError("GF(2) matrix expected")
    return _rank_generic(M.to_array().astype(np.int64), 2)


def rank_mod_p(M: PrimeFieldMatrix) -> int:
    """Exact rank of ``M`` over GF(p); ``M`` is left untouched."""
    if M.rows == 0 or M.cols == 0:
        return 0
    if M.p == 2:
        return int(_gf2.rank_inplace(np.array(M.packed), M.cols))
    return _rank_generic(M._data, M.p)


def reduce_mod_p(M: IntMatrix, p: int) -> PrimeFieldMatrix:
    p = _check_prime(p)
    if M._a.dtype == object:
        arr = np.array([[int(x) % p for x in row] for row in M._a], dtype=np.int64 if p < _SMALL_PRIME else object)
        arr = arr.reshape(M.shape)
    else:
        arr = np.mod(M._a, p)
    return PrimeFieldMatrix(arr, p)


# --------------------------------------------------------------------------
# rank over Q


def _rank_bareiss(rows: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination on an integer matrix."""
    a = [list(r) for r in rows]
    n = len(a)
    m = len(a[0]) if n else 0
    r = 0
    prev = 1
    for c in range(m):
        if r == n:
            break
        piv = next((i for i in range(r, n) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pr = a[r]
        pv = pr[c]
        for i in range(r + 1, n):
            ai = a[i]
            f = ai[c]
            if f == 0:
                if pv != prev:
                    a[i] = [(pv * x) // prev for x in ai]
                continue
            a[i] = [(pv * x - f * y) // prev for x, y in zip(ai, pr)]
        prev = pv
        r += 1
    return r


def _prime_stream(start: int = _SMALL_PRIME):
    q = start - 1
    while q > 2:
        if is_prime(q):
            yield q
        q -= 1


def _rank_multimodular(M: IntMatrix) -> int:
    """Rank over Q from ranks mod large primes, certified by the Hadamard bound.

    Every prime gives a lower bound (an integer relation among rows survives
    reduction).  Once the primes used, all with rank at most r, have product P
    with P**2 exceeding the squared Hadamard bound on (r+1)-minors, every
    (r+1)-minor is a multiple of P smaller than P in absolute value, hence 0.
    """
    rows = M.tolist()
    n, m = M.shape
    full = min(n, m)
    if full == 0:
        return 0
    norms = sorted((sum(x * x for x in row) for row in rows), reverse=True)
    r = 0
    product = 1
    for p in _prime_stream():
        rp = _rank_generic(np.array([[x % p for x in row] for row in rows], dtype=np.int64), p)
        r = max(r, rp)
        product *= p
        if r == full:
            return r
        bound_sq = math.prod(norms[: r + 1])
        if product * product > bound_sq:
            return r
    raise AssertionError("prime stream exhausted")


def rank_rational(M, method: str = "auto") -> int:
    """Exact rank over Q of an :class:`IntMatrix` or :class:`RationalMatrix`.

    ``method`` is ``"bareiss"`` (fraction-free elimination), ``"multimodular"``
    (Hadamard-certified modular ranks) or ``"auto"``.
    """
    if isinstance(M, RationalMatrix):
        M = M.to_integer_rows()
    if not isinstance(M, IntMatrix):
        raise TypeError("IntMatrix or RationalMatrix expected")
    if M.rows == 0 or M.cols == 0:
        return 0
    if method == "auto":
        method = "bareiss" if min(M.shape) <= 40 else "multimodular"
    if method == "bareiss":
        return _rank_bareiss(M.tolist())
    if method == "multimodular":
        return _rank_multimodular(M)
    raise ValueError(f"unknown method {method!r}")


def rref(rows: Iterable[Sequence], ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns the nonzero rows and pivot columns."""
    a = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def membership(v: Sequence, basis) -> bool:
    """Whether ``v`` lies in the row span of ``basis``, decided exactly."""
    if not isinstance(basis, RationalMatrix):
        basis = RationalMatrix(basis)
    if basis.rows and len(v) != basis.cols:
        raise ValueError(f"vector length {len(v)} does not match {basis.cols} columns")
    if basis.rows == 0:
        return all(Fraction(x) == 0 for x in v)
    ech, pivots = rref(basis.tolist(), basis.cols)
    w = [Fraction(x) for x in v]
    for row, c in zip(ech, pivots):
        if w[c] != 0:
            f = w[c]
            w = [x - f * y for x, y in zip(w, row)]
    return all(x == 0 for x in w)


# --------------------------------------------------------------------------
# text format:  "rows cols modulus" then one line of entries per row


def _fmt_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _gf2_lines(M: PrimeFieldMatrix, block: int = 1024):
    """Yield GF(2) row text in blocks; vectorised so large matrices stay cheap."""
    for start in range(0, M.rows, block):
        dense = M.row_block(start, min(start + block, M.rows))
        k = dense.shape[0]
        if M.cols == 0:
            yield b"\n" * k
            continue
        buf = np.full((k, 2 * M.cols), ord(" "), dtype=np.uint8)
        buf[:, 0::2] = dense + ord("0")
        buf[:, -1] = ord("\n")
        yield buf.tobytes()


def _iter_text(M) -> Iterable[bytes]:
    if isinstance(M, PrimeFieldMatrix):
        yield f"{M.rows} {M.cols} {M.p}\n".encode()
        if M.p == 2:
            yield from _gf2_lines(M)
        else:
            for row in M._data:
                yield (" ".join(str(int(x)) for x in row) + "\n").encode()
    elif isinstance(M, IntMatrix):
        yield f"{M.rows} {M.cols} Z\n".encode()
        for row in M.tolist():
            yield (" ".join(map(str, row)) + "\n").encode()
    elif isinstance(M, RationalMatrix):
        yield f"{M.rows} {M.cols} Q\n".encode()
        for row in M.tolist():
            yield (" ".join(_fmt_fraction(x) for x in row) + "\n").encode()
    else:
        raise TypeError(f"cannot serialise {type(M).__name__}")


def write_matrix(M, fh: TextIO) -> None:
    for chunk in _iter_text(M):
        fh.write(chunk.decode())


def matrix_digest(M) -> str:
    """SHA-256 of the canonical text serialisation."""
    h = hashlib.sha256()
    for chunk in _iter_text(M):
        h.update(chunk)
    return h.hexdigest()


def save_matrix(M, path) -> str:
    """Write ``M`` to ``path``; returns its digest."""
    h = hashlib.sha256()
    with open(path, "wb") as fh:
        for chunk in _iter_text(M):
            h.update(chunk)
            fh.write(chunk)
    return h.hexdigest()


def read_matrix(fh: TextIO):
    header = fh.readline().split()
    if len(header) != 3:
        raise ValueError("header must be 'rows cols modulus'")
    rows, cols, mod = int(header[0]), int(header[1]), header[2]
    lines = []
    for _ in range(rows):
        parts = fh.readline().split()
        if len(parts) != cols:
            raise ValueError(f"expected {cols} entries, got {len(parts)}")
        lines.append(parts)
    if mod == "Q":
        return RationalMatrix([[Fraction(x) for x in r] for r in lines]) if rows else RationalMatrix([])
    if mod == "Z":
        return IntMatrix([[int(x) for x in r] for r in lines]) if rows else IntMatrix(np.zeros((0, cols), dtype=np.int64))
    p = int(mod)
    if p == 2 and rows:
        dense = np.array(lines, dtype=np.uint8).reshape(rows, cols)
        if np.any(dense > 1):
            raise ValueError("entries must lie in [0, 2)")
        return PrimeFieldMatrix.from_packed(_gf2.pack_rows(dense), cols)
    return PrimeFieldMatrix(np.array([[int(x) for x in r] for r in lines], dtype=object).reshape(rows, cols), p)


def load_matrix(path):
    with open(path) as fh:
        return read_matrix(fh)
