"""Generalized Kneser graphs K(d, s, m) and odd-girth checks.

Vertices are the s-subsets of {1..d}, stored as d-bit masks (bit i-1 for
element i) and ordered colexicographically, which for fixed popcount is
plain numeric order of the masks.  Two vertices are adjacent iff
|A & B| < m; m = 1 gives the ordinary Kneser graph.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from gkcert import _gf2


@dataclass(frozen=True)
class GKParams:
    d: int
    s: int
    m: int

    def __post_init__(self):
        if not all(isinstance(x, int) for x in (self.d, self.s, self.m)):
            raise TypeError("d, s, m must be integers")
        if not 1 <= self.m <= self.s <= self.d:
            raise ValueError(f"need 1 <= m <= s <= d, got d={self.d}, s={self.s}, m={self.m}")
        if self.d > 63:
            raise ValueError("d > 63 does not fit the 64-bit vertex encoding")

    @property
    def n(self) -> int:
        return comb(self.d, self.s)

    @property
    def degree(self) -> int:
        d, s = self.d, self.s
        return sum(comb(s, i) * comb(d - s, s - i) for i in range(self.m))

    def as_dict(self) -> dict:
        return {"d": self.d, "s": self.s, "m": self.m}


def subset_masks(d: int, s: int) -> np.ndarray:
    """All s-subsets of [d] as uint64 masks, in colex order."""
    masks = [sum(1 << i for i in c) for c in itertools.combinations(range(d), s)]
    masks.sort()
    return np.array(masks, dtype=np.uint64)


def vertex_rank(mask: int, d: int, s: int) -> int:
    mask = int(mask)
    if mask < 0 or mask >> d:
        raise ValueError(f"mask {mask:#x} has elements outside [1, {d}]")
    if mask.bit_count() != s:
        raise ValueError(f"mask {mask:#x} has popcount {mask.bit_count()}, expected {s}")
    idx, k = 0, 0
    for pos in range(d):
        if mask >> pos & 1:
            k += 1
            idx += comb(pos, k)
    return idx


def vertex_unrank(index: int, d: int, s: int) -> int:
    if not 0 <= index < comb(d, s):
        raise ValueError(f"index {index} out of range for C({d},{s})")
    mask = 0
    for k in range(s, 0, -1):
        c = k - 1
        while comb(c + 1, k) <= index:
            c += 1
        mask |= 1 << c
        index -= comb(c, k)
    return mask


def mask_to_set(mask: int) -> frozenset[int]:
    mask = int(mask)
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def set_to_mask(elems: Iterable[int]) -> int:
    return sum(1 << (e - 1) for e in elems)


class Graph:
    """Explicit undirected simple graph on vertices 0..n-1."""

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        self.n = n
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside 0..{n - 1}")
            adj[u].add(v)
            adj[v].add(u)
        self._adj = [frozenset(a) for a in adj]

    @classmethod
    def from_adjacency(cls, dense: np.ndarray) -> "Graph":
        dense = np.asarray(dense, dtype=bool)
        n = dense.shape[0]
        iu, ju = np.nonzero(np.triu(dense | dense.T, 1))
        return cls(n, zip(iu.tolist(), ju.tolist()))

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self._adj[u]) if u < v]

    def num_edges(self) -> int:
        return sum(len(a) for a in self._adj) // 2

    def adjacency_block(self, start: int, stop: int) -> np.ndarray:
        out = np.zeros((stop - start, self.n), dtype=bool)
        for i in range(start, stop):
            out[i - start, list(self._adj[i])] = True
        return out

    def complement(self) -> "Graph":
        return Graph(self.n, ((u, v) for u in range(self.n) for v in range(u + 1, self.n) if v not in self._adj[u]))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        return Graph(
            len(vertices),
            ((index[u], index[v]) for u in vertices for v in self._adj[u] if v in index and index[u] < index[v]),
        )

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges()]}

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges()})"


class GKGraph:
    """K(d, s, m) with adjacency recomputed from masks; neighbour lists are lazy."""

    def __init__(self, params: GKParams):
        self.params = params
        self.masks = subset_masks(params.d, params.s)
        self.n = len(self.masks)
        self._nbrs: dict[int, frozenset[int]] = {}

    def intersections(self, start: int, stop: int) -> np.ndarray:
        """|A & B| for rows start..stop-1 against all vertices (uint8)."""
        block = self.masks[start:stop, None] & self.masks[None, :]
        return np.bitwise_count(block).astype(np.uint8)

    def adjacency_block(self, start: int, stop: int) -> np.ndarray:
        return self.intersections(start, stop) < self.params.m

    def adjacent(self, u: int, v: int) -> bool:
        return (int(self.masks[u]) & int(self.masks[v])).bit_count() < self.params.m

    def neighbors(self, v: int) -> frozenset[int]:
        nb = self._nbrs.get(v)
        if nb is None:
            row = np.bitwise_count(self.masks & self.masks[v]) < self.params.m
            nb = frozenset(np.flatnonzero(row).tolist())
            self._nbrs[v] = nb
        return nb

    def vertex_set(self, v: int) -> frozenset[int]:
        return mask_to_set(int(self.masks[v]))

    def num_edges(self) -> int:
        return self.n * self.params.degree // 2

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            out.extend((u, v) for v in sorted(self.neighbors(u)) if u < v)
        return out

    def packed_adjacency(self, block: int = 2048) -> np.ndarray:
        words = _gf2.n_words(self.n)
        out = np.zeros((self.n, words), dtype=np.uint64)
        for start in range(0, self.n, block):
            stop = min(start + block, self.n)
            out[start:stop] = _gf2.pack_rows(self.adjacency_block(start, stop))
        return out

    def to_graph(self) -> Graph:
        return Graph(self.n, self.edges())

    def complement(self) -> "GKComplement":
        return GKComplement(self)

    def induced(self, vertices: Sequence[int]) -> Graph:
        vs = list(vertices)
        sub = self.masks[vs]
        inter = np.bitwise_count(sub[:, None] & sub[None, :])
        adj = inter < self.params.m
        np.fill_diagonal(adj, False)
        return Graph.from_adjacency(adj)

    def to_json(self, with_edges: bool = False) -> dict:
        out = {
            **self.params.as_dict(),
            "n": self.n,
            "vertex_encoding": "colex rank of s-subsets of [d]; bit i-1 of the mask is element i",
        }
        if with_edges:
            out["edges"] = [list(e) for e in self.edges()]
        return out

    def __repr__(self):
        p = self.params
        return f"GKGraph(K({p.d},{p.s},{p.m}), n={self.n})"


class GKComplement:
    """Complement of K(d, s, m): distinct A, B adjacent iff |A & B| >= m."""

    def __init__(self, graph: GKGraph):
        self.base = graph
        self.n = graph.n

    def adjacency_block(self, start: int, stop: int) -> np.ndarray:
        out = ~self.base.adjacency_block(start, stop)
        out[np.arange(stop - start), np.arange(start, stop)] = False
        return out

    def adjacent(self, u: int, v: int) -> bool:
        return u != v and not self.base.adjacent(u, v)

    def neighbors(self, v: int) -> frozenset[int]:
        row = self.adjacency_block(v, v + 1)[0]
        return frozenset(np.flatnonzero(row).tolist())

    def complement(self) -> GKGraph:
        return self.base


def build_graph(params: GKParams) -> GKGraph:
    return GKGraph(params)


class OddGirthResult(NamedTuple):
    exceeds: bool
    cycle: tuple[int, ...] | None

    def __bool__(self):
        return self.exceeds


def _tree_path(parent: dict[int, int], v: int) -> list[int]:
    path = [v]
    while parent[v] != v:
        v = parent[v]
        path.append(v)
    return path[::-1]


def _odd_cycle_from(root: int, x: int, y: int, parent: dict[int, int]) -> tuple[int, ...]:
    px, py = _tree_path(parent, x), _tree_path(parent, y)
    k = 0
    while k < min(len(px), len(py)) and px[k] == py[k]:
        k += 1
    # px[k-1] is the last common ancestor; the two branches plus edge xy close the cycle
    return tuple(px[k - 1 :] + py[k:][::-1])


def odd_girth_exceeds(G, ell: int, roots: Iterable[int] | None = None) -> OddGirthResult:
    """Whether G has no odd cycle of length <= ell.

    Layered BFS from every root (all vertices by default) down to depth
    (ell - 1) / 2; an edge joining two vertices of the same layer k closes an
    odd closed walk of length 2k + 1, which contains an odd cycle at most that
    long, and a shortest odd cycle is always found this way from any of its
    vertices.  On failure the shortest odd cycle seen is returned.
    """
    if ell < 3 or ell % 2 == 0:
        raise ValueError(f"ell must be odd and >= 3, got {ell}")
    depth = (ell - 1) // 2
    best: tuple[int, ...] | None = None
    for root in (range(G.n) if roots is None else roots):
        dist = {root: 0}
        parent = {root: root}
        frontier = [root]
        found = None
        for k in range(depth + 1):
            nxt = []
            for x in frontier:
                for y in G.neighbors(x):
                    dy = dist.get(y)
                    if dy is None:
                        if k < depth:
                            dist[y] = k + 1
                            parent[y] = x
                            nxt.append(y)
                    elif dy == k:
                        found = (x, y)
                        break
                if found:
                    break
            if found or not nxt:
                break
            frontier = nxt
        if found:
            cycle = _odd_cycle_from(root, found[0], found[1], parent)
            if best is None or len(cycle) < len(best):
                best = cycle
                if len(best) == 3:
                    break
    return OddGirthResult(best is None, best)


def triangle_free_packed(adj: np.ndarray, n: int) -> OddGirthResult:
    """ell = 3 check on a packed loopless adjacency matrix (word-parallel BFS depth 1)."""
    i, j, k = _gf2.find_triangle(adj, n)
    if i < 0:
        return OddGirthResult(True, None)
    return OddGirthResult(False, (int(i), int(j), int(k)))


def is_odd_cycle(G, cycle: Sequence[int]) -> bool:
    """Witness check: distinct vertices, odd length, consecutive pairs adjacent."""
    if len(cycle) < 3 or len(cycle) % 2 == 0 or len(set(cycle)) != len(cycle):
        return False
    return all(G.adjacent(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle)))
