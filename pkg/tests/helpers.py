"""Shared random generators for the subspace and oracle suites."""

from __future__ import annotations

import random

from gkcert.subspaces import Subspace


def random_subspace(rng: random.Random, t: int, dim: int, within: Subspace | None = None) -> Subspace:
    """Span of ``dim`` random small-integer combinations (may come out smaller)."""
    if within is None:
        vecs = [[rng.randint(-3, 3) for _ in range(t)] for _ in range(dim)]
    else:
        basis = within.basis
        vecs = [
            [sum(c * b[j] for c, b in zip(coeffs, basis)) for j in range(t)]
            for coeffs in ([rng.randint(-2, 2) for _ in basis] for _ in range(dim))
        ]
    return Subspace(t, vecs)


def random_instance(rng: random.Random, max_t: int = 8, max_w: int = 12):
    t = rng.randint(1, max_t)
    U = random_subspace(rng, t, rng.randint(1, t))
    while U.dim == 0:
        U = random_subspace(rng, t, rng.randint(1, t))
    Ws = [random_subspace(rng, t, rng.randint(0, t)) for _ in range(rng.randint(0, max_w))]
    return t, U, Ws


def check_scan(U: Subspace, Ws: list[Subspace]):
    """Run the moment-curve scan on the W meeting U properly; return the postcondition facts."""
    from gkcert.subspaces import scan_uncovered

    proper = [W for W in Ws if not U.issubspace(W)]
    u, alpha = scan_uncovered(U, proper)
    return {
        "in_U": U.contains(u),
        "avoids": all(not W.contains(u) for W in proper),
        "alpha_bound": alpha < len(proper) * (U.dim - 1) + 1,
        "nonzero": any(x != 0 for x in u),
    }


def check_graded(rng: random.Random, U: Subspace, Ws: list[Subspace]):
    from gkcert.subspaces import graded_subspace

    inside = [random_subspace(rng, U.ambient, rng.randint(0, U.dim), within=U) for _ in Ws]
    ell_prime = rng.randint(0, U.dim)
    res = graded_subspace(U, inside, ell_prime)
    return (
        res.issubspace(U)
        and res.dim == ell_prime
        and all((res & W).dim == max(0, W.dim + ell_prime - U.dim) for W in inside)
    )


def check_avoiding(rng: random.Random, U: Subspace, Ws: list[Subspace]):
    from gkcert.subspaces import avoiding_subspace

    ell_prime = max([(U & W).dim for W in Ws], default=0)
    ell_prime = rng.randint(ell_prime, U.dim) if ell_prime <= U.dim else U.dim
    res = avoiding_subspace(U, Ws, ell_prime)
    return res.issubspace(U) and res.dim == U.dim - ell_prime and all((res & W).dim == 0 for W in Ws)
