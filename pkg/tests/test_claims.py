from __future__ import annotations

import json
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from gkcert.claims import (
    Certificate,
    SignVectorAssignment,
    _check_odd_girth,
    bound_report,
    bukh_cox_lower,
    crossover_search,
    cycle_free_certificate,
    parse_rule,
    stahl_rhs,
    thm_general_lower,
    thm_s2_value,
    triangle_free_od_certificate,
    vchrom3_certificate,
    verify_certificate,
)
from gkcert.kneser import GKParams, build_graph
from gkcert.oracles import OracleBudget, kneser_graph, multichromatic_exact

# measured by the independent big-int elimination in scripts/derive_values.py
RANK2_K1262 = 430
RANK2_K631 = 10


def test_stahl_examples():
    assert stahl_rhs(1, 2, 5) == 3
    assert stahl_rhs(2, 2, 5) == 5
    assert stahl_rhs(4, 3, 6) == 8
    with pytest.raises(ValueError):
        stahl_rhs(1, 3, 5)
    with pytest.raises(ValueError):
        stahl_rhs(0, 2, 5)


def test_s2_examples():
    assert thm_s2_value(1, 4) == 2
    assert thm_s2_value(2, 5) == 5
    assert thm_s2_value(4, 6) == 12
    with pytest.raises(ValueError):
        thm_s2_value(1, 3)


def test_general_lower_examples():
    for d in (6, 9, 20):
        for c in (0, Fraction(7, 3)):
            assert thm_general_lower(4, 3, d, c) == Fraction(3 * d, 2) - c
    for s in (3, 4, 5):
        for ell in (1, 2, 3):
            k = ell * s - 1
            if k >= s:
                assert thm_general_lower(k, s, 2 * s + 5, 1) == ell * (2 * s + 5) - 1
    assert thm_general_lower(3, 3, 6, 0) == 6
    for bad in [(2, 3, 6, 0), (3, 2, 6, 0), (3, 3, 5, 0), (3, 3, 6, -1)]:
        with pytest.raises(ValueError):
            thm_general_lower(*bad)


def test_bukh_cox_examples():
    for d in (6, 7, 12):
        assert bukh_cox_lower(3, 3, d) == d
    assert bukh_cox_lower(2, 2, 6) == 6
    assert bukh_cox_lower(4, 3, 8) == Fraction(32, 3)
    with pytest.raises(ValueError):
        bukh_cox_lower(1, 3, 5)


@given(st.integers(1, 30), st.integers(4, 200))
def test_s2_is_stahl_at_s2(k, d):
    assert thm_s2_value(k, d) == stahl_rhs(k, 2, d)


@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 100))
def test_bukh_cox_meets_stahl_when_s_divides_k(mult, s, extra):
    k = mult * s
    d = 2 * s + extra
    assert bukh_cox_lower(k, s, d) == stahl_rhs(k, s, d) == Fraction(k, s) * (d - 2 * s) + 2 * k


def test_stahl_bounds_oracle_from_above():
    cases = [(5, 2, 1), (5, 2, 2), (6, 2, 1), (6, 3, 1), (6, 3, 2), (4, 2, 3), (7, 3, 1)]
    budget = OracleBudget(max_vertices=35)
    for d, s, k in cases:
        assert multichromatic_exact(kneser_graph(d, s), k, budget) <= stahl_rhs(k, s, d)


def test_cycle_free_d12():
    cert = cycle_free_certificate(3, 12)
    m = cert.measured
    assert (m["n"], m["R"], m["rank"]) == (924, 794, RANK2_K1262)
    assert m["odd_girth_exceeds_ell"] and m["girth_complete"] and m["girth_mode"] == "exhaustive"
    assert m["R_lt_n"] and m["rank_le_R"] and cert.verdict
    assert cert.params == {"ell": 3, "d": 12, "s": 6, "m": 2, "p": 2}
    assert cert.notes == []


def test_cycle_free_vacuous_and_degenerate():
    cert = cycle_free_certificate(3, 6)
    assert cert.measured["n"] == 20 and cert.measured["R"] == 22 == 1 + 6 + 15
    assert not cert.measured["R_lt_n"]
    assert any("vacuous" in n for n in cert.notes)
    cert = cycle_free_certificate(5, 10)
    assert cert.params["m"] == 1 and cert.measured["degenerate"] and cert.verdict
    assert any("degenerate" in n for n in cert.notes)


def test_cycle_free_rejects_bad_parameters():
    with pytest.raises(ValueError):
        cycle_free_certificate(3, 10)
    with pytest.raises(ValueError):
        cycle_free_certificate(4, 16)


def test_sampled_girth_mode():
    G = build_graph(GKParams(12, 6, 2))
    out = _check_odd_girth(G, 3, "sampled", 5000, 3, 200, 7)
    assert out["odd_girth_exceeds_ell"] and not out["girth_complete"]
    assert out["girth_samples"] == {"count": 3, "size": 200, "seed": 7}
    # sampling can refute: K(12,6,3) has triangles everywhere
    bad = build_graph(GKParams(12, 6, 3))
    out = _check_odd_girth(bad, 3, "sampled", 5000, 3, 300, 1)
    assert not out["odd_girth_exceeds_ell"] and len(out["girth_witness"]) == 3
    cert = cycle_free_certificate(3, 12, threshold=100, girth_mode="sampled", samples=2, sample_size=100)
    assert any("sampled" in n for n in cert.notes)


def test_packed_mode_above_threshold():
    cert = cycle_free_certificate(3, 12, threshold=100)
    assert cert.measured["girth_mode"] == "exhaustive-packed" and cert.measured["girth_complete"]


def test_triangle_free_pipeline():
    cert = triangle_free_od_certificate(12)
    m = cert.measured
    assert m["r"] == RANK2_K1262 == m["rank"]
    assert m["orthogonal_representation"] and m["nearly_orthogonal"]
    assert m["system_size_gt_dimension"] and m["r_lt_n"]
    assert cert.verdict and set(cert.digests) == {"M", "B"}
    small = triangle_free_od_certificate(6)
    assert small.verdict and small.measured["r"] == RANK2_K631
    assert not small.measured["R_lt_n"]
    with pytest.raises(ValueError):
        triangle_free_od_certificate(8)


def test_sign_vectors():
    G = build_graph(GKParams(8, 4, 1))
    w = SignVectorAssignment(8, G.masks)
    for u in range(0, G.n, 7):
        vec = w.vector(u)
        assert vec.count(1) == 4
        for v in range(G.n):
            dot = sum(a * b for a, b in zip(vec, w.vector(v)))
            assert w.inner(u, v) == Fraction(dot, 8)


def test_vchrom_d8():
    cert = vchrom3_certificate(8)
    m = cert.measured
    assert m["min_symmetric_difference"] == 8
    assert m["max_adjacent_inner_product"] == "-1"
    assert cert.verdict and m["vchrom_le_3"]
    assert m["complement_minrank_lower_bound"] == -(-70 // m["rank"])
    with pytest.raises(ValueError):
        vchrom3_certificate(12)


def test_crossover():
    reports, first = crossover_search("ell:3", 60)
    assert first == 12
    by_d = {r.d: r for r in reports}
    assert (by_d[6].R, by_d[6].n, by_d[6].below) == (22, 20, False)
    assert (by_d[12].R, by_d[12].n, by_d[12].below) == (794, 924, True)
    assert all(r.d % 6 == 0 for r in reports)
    reports, _ = crossover_search("vchrom", 16)
    r16 = reports[-1]
    assert (r16.d, r16.R, r16.n, r16.below) == (16, 14893, 12870, False)
    assert r16.R == sum(comb(16, i) for i in range(7))


def test_crossover_large_d_stays_exact():
    r = bound_report(9996, 9996 // 6)
    assert r.n == comb(9996, 4998) and r.below
    small = bound_report(2994, 499)
    assert small.R == sum(comb(2994, i) for i in range(1497 - 499 + 1))
    assert r.entropy_estimate == float("inf") and r.log2_entropy_estimate > 1000
    assert json.dumps(r.to_json())
    with pytest.raises(ValueError):
        crossover_search("ell:3", 10_001)
    with pytest.raises(ValueError):
        parse_rule("ell:4")
    with pytest.raises(ValueError):
        parse_rule("m=3")


def test_certificate_digest_ignores_timestamp():
    a = cycle_free_certificate(3, 6)
    b = cycle_free_certificate(3, 6)
    b.created = "1970-01-01T00:00:00+00:00"
    assert a.digest() == b.digest()
    back = Certificate.from_json(json.loads(a.dumps()))
    assert back.digest() == a.digest()


def test_verify_certificate_roundtrip_and_tamper(tmp_path):
    cert = triangle_free_od_certificate(12, out_dir=tmp_path)
    assert set(cert.artifacts) == {"M.txt", "B.txt"}
    ok, problems = verify_certificate(cert, tmp_path)
    assert ok and problems == []
    forged = Certificate.from_json(cert.to_json())
    forged.measured = dict(forged.measured, r=429)
    ok, problems = verify_certificate(forged)
    assert not ok and any("measured" in p for p in problems)
    (tmp_path / "B.txt").write_text("1 1 2\n1\n")
    ok, problems = verify_certificate(cert, tmp_path)
    assert not ok and any("B.txt" in p for p in problems)
