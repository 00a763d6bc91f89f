from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gkcert.exactalg import RationalMatrix, rank_rational
from gkcert.subspaces import (
    CoveringCollection,
    PreconditionViolated,
    Subspace,
    avoiding_subspace,
    graded_subspace,
    intersect,
    moment_point,
    scan_uncovered,
    span_sum,
    uncovered_vector,
)
from helpers import check_avoiding, check_graded, check_scan, random_instance, random_subspace


def e(i, t):
    return [int(j == i) for j in range(t)]


def test_intersection_examples():
    assert intersect(Subspace(2, [e(0, 2)]), Subspace(2, [e(1, 2)])).dim == 0
    X = Subspace(3, [e(0, 3), e(1, 3)]) & Subspace(3, [e(1, 3), e(2, 3)])
    assert X == Subspace(3, [e(1, 3)])


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_dimension_formula(seed):
    rng = random.Random(seed)
    A = random_subspace(rng, 6, rng.randint(0, 6))
    B = random_subspace(rng, 6, rng.randint(0, 6))
    assert (A + B).dim + (A & B).dim == A.dim + B.dim
    stacked = [list(r) for r in A.basis + B.basis]
    if stacked:
        assert rank_rational(RationalMatrix(stacked)) == (A + B).dim
    assert (A & B).issubspace(A) and (A & B).issubspace(B)
    assert A.issubspace(span_sum(A, B))


def test_canonical_equality():
    assert Subspace(3, [[1, 1, 0], [0, 1, 0]]) == Subspace(3, [[2, 0, 0], [0, 3, 0]])
    assert hash(Subspace(2, [[1, 2]])) == hash(Subspace(2, [[-2, -4]]))
    with pytest.raises(ValueError):
        Subspace(2, [[1, 2, 3]])


def test_json_roundtrip():
    S = Subspace(3, [[Fraction(1, 2), 1, 0], [0, 0, 7]])
    assert Subspace.from_json(S.to_json()) == S
    assert S.to_json()["basis"][0] == ["1", "2", "0"]


def test_scan_examples():
    U = Subspace.full(2)
    u, alpha = scan_uncovered(U, [Subspace(2, [e(0, 2)])])
    assert u == (1, 1) and alpha == 1
    U = Subspace(3, [[1, 2, 3], [0, 1, 1]])
    assert uncovered_vector(U, []) == U.basis[0]
    Ws = [Subspace(3, [e(0, 3), e(1, 3)]), Subspace(3, [e(0, 3), e(2, 3)])]
    u, alpha = scan_uncovered(Subspace.full(3), Ws)
    assert not any(W.contains(u) for W in Ws)
    assert u == moment_point(Subspace.full(3), alpha)
    assert all(any(W.contains(moment_point(Subspace.full(3), a)) for W in Ws) for a in range(alpha))


def test_scan_rejects_covering():
    with pytest.raises(CoveringCollection):
        scan_uncovered(Subspace(2, [e(0, 2)]), [Subspace.full(2)])
    with pytest.raises(ValueError):
        scan_uncovered(Subspace.zero(2), [])


def test_graded_examples():
    U = Subspace.full(4)
    W = Subspace(4, [e(0, 4), e(1, 4)])
    assert graded_subspace(U, [W], 0) == Subspace.zero(4)
    assert graded_subspace(U, [W], 4) == U
    res = graded_subspace(U, [W], 2)
    assert res.dim == 2 and (res & W).dim == 0
    with pytest.raises(PreconditionViolated):
        graded_subspace(Subspace(4, [e(0, 4)]), [W], 1)


def test_avoiding_examples():
    U = Subspace.full(3)
    W = Subspace(3, [e(0, 3), e(1, 3)])
    res = avoiding_subspace(U, [W], 2)
    assert res.dim == 1 and (res & W).dim == 0
    assert res.basis[0][2] != 0
    assert avoiding_subspace(U, [], 0) == U
    with pytest.raises(PreconditionViolated) as exc:
        avoiding_subspace(U, [U], 1)
    assert exc.value.subspace == U


@settings(max_examples=80)
@given(st.integers(0, 2**32 - 1))
def test_scan_property(seed):
    rng = random.Random(seed)
    _, U, Ws = random_instance(rng)
    facts = check_scan(U, Ws)
    assert all(facts.values()), facts


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_graded_property(seed):
    rng = random.Random(seed)
    _, U, Ws = random_instance(rng)
    assert check_graded(rng, U, Ws)


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_avoiding_property(seed):
    rng = random.Random(seed)
    _, U, Ws = random_instance(rng)
    assert check_avoiding(rng, U, Ws)
