import json
from fractions import Fraction

import numpy as np
import pytest

from veechsalem import salem, tables
from veechsalem.exactfield import INF, parse_poly, sturm_count
from veechsalem.trigroup import (Family, FieldMatrix2, GroupWord, Kind, TriangleFamily, build_group,
                                 classify, enumerate_words, evaluate_word)

ALL_ROWS = tables.TWO_Q_INF_ROWS + tables.Q_INF_INF_ROWS


def matrix(fam, q, word):
    G = build_group(fam, q)
    return G, evaluate_word(G, GroupWord.parse(word))


# half-trace data ----------------------------------------------------------


def test_half_trace_q7():
    _, M = matrix("2qinf", 7, "t^3.s")
    p, roots, eps = salem.half_trace_data(M)
    assert p == parse_poly("x^3 - 2*x^2 - x + 1")
    assert np.allclose([float(r) for r in roots], [2.2469796, 0.5549581, -0.8019377])
    assert eps == -1  # the raw trace is negative


def test_half_trace_q11():
    _, M = matrix("2qinf", 11, "t^5.s.t^4.s")
    p, _, _ = salem.half_trace_data(M)
    assert p == parse_poly("x^5 - 39/2*x^4 - 47*x^3 - 243/8*x^2 - 17/16*x + 89/32")


def test_half_trace_minus_identity():
    G = build_group("2qinf", 7)
    p, _, _ = salem.half_trace_data(-FieldMatrix2.identity(G.field))
    assert p == parse_poly("x - 1")


@pytest.mark.parametrize("row", ALL_ROWS, ids=lambda r: f"{r.family.value}-{r.q}")
def test_sign_normalization_keeps_absolute_conjugates(row):
    _, M = matrix(row.family, row.q, row.word)
    p, roots, eps = salem.half_trace_data(M)
    raw = M.trace() * Fraction(1, 2)
    raw_abs = sorted(abs(raw.embed_float(s)) for s in range(M.field.degree))
    assert np.allclose(sorted({round(v, 12) for v in raw_abs}),
                       sorted({round(abs(float(r)), 12) for r in roots}))


# certification ------------------------------------------------------------


def test_certify_q7():
    G = build_group("2qinf", 7)
    cert = salem.certify_word(G, "t^3.s")
    assert cert and cert.degree == 3 and all(cert.checks.values())


def test_certify_q5_golden_ratio():
    G = build_group("2qinf", 5)
    M = evaluate_word(G, GroupWord.parse("t^2.s"))
    assert M.trace() == -2 * G.lam  # trace(t^2 s) = -2 lam_5
    cert = salem.is_salem(M)
    assert cert.half_trace_minpoly == parse_poly("x^2 - x - 1")
    assert np.allclose(cert.conjugate_values, [1.6180339887, -0.6180339887])


def test_parabolic_rejected():
    G = build_group("2qinf", 7)
    rej = salem.is_salem(G.s * G.t)
    assert not rej and rej.reason == "not hyperbolic"


def test_rational_half_trace_rejected():
    G = build_group("2qinf", 3)
    hyperbolic = [w for w in enumerate_words(G, 6, 2)
                  if classify(evaluate_word(G, w)) is Kind.HYPERBOLIC]
    assert hyperbolic
    for w in hyperbolic:
        rej = salem.certify_word(G, w)
        assert not rej and rej.reason == "degree 1"


@pytest.mark.parametrize("row", ALL_ROWS, ids=lambda r: f"{r.family.value}-{r.q}")
def test_certificate_invariants(row):
    G, M = matrix(row.family, row.q, row.word)
    cert = salem.is_salem(M, GroupWord.parse(row.word), G.family)
    p = cert.half_trace_minpoly
    assert sturm_count(p, 1, INF) == 1 and sturm_count(p, -INF, -1) == 0
    assert p(1) != 0 and p(-1) != 0
    assert cert.trace_minpoly.is_integral()
    # z^2 - 2 x0 z + 1: large root > 1 > small root, conjugates on the unit circle
    x0 = cert.dominant
    z = x0 + np.sqrt(x0 * x0 - 1)
    assert z > 1 > 1 / z
    assert all(-1 < float(iv) < 1 for iv in cert.conjugates[1:])
    # embeddings of the matrix field that move the trace give elliptic conjugates
    tr_id = M.trace().embed_float(G.field.identity)
    moved = [Ms for Ms in salem.conjugate_matrices(M) if abs(np.trace(Ms) - tr_id) > 1e-9]
    assert moved
    assert all(abs(np.trace(Ms)) < 2 for Ms in moved)


def test_certificate_json_schema():
    G = build_group("2qinf", 7)
    d = salem.certify_word(G, "t^3.s").to_json()
    assert d["half_trace_minpoly"] == ["1/1", "-1/1", "-2/1", "1/1"]
    assert set(d["checks"]) == {"degree_ge_2", "unique_outside", "endpoints_nonroot", "integral"}
    json.dumps(d)


# conjugate matrices -------------------------------------------------------


def test_conjugate_matrices():
    G, M = matrix("2qinf", 7, "t^3.s")
    mats = salem.conjugate_matrices(M)
    assert np.allclose(mats[G.field.identity], M.to_floats(G.field.identity))
    for s, Ms in enumerate(mats):
        if s != G.field.identity:
            assert abs(np.trace(Ms)) < 2
    P = G.s * G.t
    for Ms in salem.conjugate_matrices(P):
        assert abs(abs(np.trace(Ms)) - 2) < 1e-12


def test_high_precision_conjugates_agree():
    _, M = matrix("2qinf", 7, "t^3.s")
    lo = salem.conjugate_matrices(M)
    hi = salem.conjugate_matrices(M, 200)
    assert all(np.allclose(a, np.asarray(b, dtype=float)) for a, b in zip(lo, hi))


# angles -------------------------------------------------------------------


def test_angle_check_q7_clean():
    G = build_group("2qinf", 7)
    rep = salem.irrational_angle_check(salem.certify_word(G, "t^3.s"), 20, 1e-9)
    assert not rep.red_flag and rep.relation is None
    assert rep.min_residual == pytest.approx(0.0012850268, rel=1e-6)  # pinned


def test_angle_check_single_angle():
    G = build_group("2qinf", 5)
    rep = salem.irrational_angle_check(salem.certify_word(G, "t^2.s"), 20)
    assert len(rep.angles) == 1 and not rep.red_flag


def test_angle_check_oracle_small_bound():
    # brute force over all relations with |n_i| <= 3
    G = build_group("2qinf", 7)
    cert = salem.certify_word(G, "t^3.s")
    rep = salem.irrational_angle_check(cert, 3)
    a = np.array(rep.angles)
    best = min(
        min(v % (2 * np.pi), 2 * np.pi - v % (2 * np.pi))
        for n in np.ndindex(*(7,) * len(a)) if any(k != 3 for k in n)
        for v in [float(np.dot(np.array(n) - 3, a))])
    assert rep.min_residual == pytest.approx(best, abs=1e-12)


# search -------------------------------------------------------------------


def test_search_q7_small_budget():
    rep = salem.search(("2qinf", 7), salem.Budget(2, 6, 10_000))
    assert [str(c.half_trace_minpoly) for c in rep.found] == ["x^3 - 2*x^2 - x + 1"]
    assert rep.scanned <= 10_000


def test_search_is_deterministic():
    b = salem.Budget(4, 4, 100_000)
    assert salem.search(("qinfinf", 7), b).dumps() == salem.search(("qinfinf", 7), b).dumps()


def test_search_respects_max_words():
    rep = salem.search(("2qinf", 9), salem.Budget(6, 12, 50))
    assert rep.scanned <= 50


def test_search_results_are_certified():
    rep = salem.search(("2qinf", 9), salem.Budget(4, 8, 100_000))
    G = build_group("2qinf", 9)
    for c in rep.found:
        assert salem.certify_word(G, c.word)
    assert len({c.half_trace_minpoly for c in rep.found}) == len(rep.found)


# table --------------------------------------------------------------------


@pytest.mark.parametrize("fam, q, word, text", [
    ("2qinf", 15, "t^7.s", "x^4 - 4*x^3 - 4*x^2 + x + 1"),
    ("qinfinf", 7, "t.s^3", "x^3 - 3*x^2 - 4*x - 1"),
    ("qinfinf", 9, "t.s^2", "x^3 - 3*x^2 + 1"),
])
def test_table_rows(fam, q, word, text):
    (r,) = salem.reproduce_table(fam, [q])
    assert r.row.word == word and r.poly == parse_poly(text) and all(r.conjugates_ok)


def test_row_mismatch_reports_both_polynomials():
    bad = tables.TableRow(Family.TWO_Q_INF, 7, 3, "t^2.s", "x^3 - 2*x^2 - x + 1", ("1", "0", "0"))
    with pytest.raises(salem.RowMismatchError) as exc:
        salem.reproduce_row(bad)
    assert "x^3 - 2*x^2 - x + 1" in str(exc.value)


def test_format_table_layout():
    text = salem.format_table(salem.reproduce_table("2qinf"))
    assert "| x^3 - 2*x^2 - x + 1" in text.replace("|     ", "|")
    assert "227.0, 0.9072" in text


@pytest.mark.parametrize("x, s", [(0.55496, "0.5550"), (227.0, "227.0"), (21559.6, "21560."),
                                  (-0.036551, "-0.03655"), (9.99996, "10.00")])
def test_four_significant_figures(x, s):
    assert salem.sig4(x) == s


# nondiscreteness witnesses -------------------------------------------------


def test_witness_pinned():
    fam = TriangleFamily(Family.TWO_Q_INF, 5)
    w = salem.nondiscreteness_witness(fam, 1, 0.5, salem.Budget(6, 12, 10 ** 6))
    assert str(w) == "t^2.s.t^3.s"
    G = build_group("2qinf", 5)
    Ms = salem.conjugate_matrices(evaluate_word(G, w))[1]
    assert min(np.linalg.norm(Ms - np.eye(2), 2), np.linalg.norm(Ms + np.eye(2), 2)) < 0.5


def test_witness_large_eps_gives_smallest_nontrivial_word():
    fam = TriangleFamily(Family.TWO_Q_INF, 5)
    assert str(salem.nondiscreteness_witness(fam, 1, 3.0, salem.Budget(6, 12, 1000))) == "t.s"


def test_witness_zero_budget():
    fam = TriangleFamily(Family.TWO_Q_INF, 5)
    assert salem.nondiscreteness_witness(fam, 1, 0.5, salem.Budget(6, 12, 0)) is None


def test_witness_rejects_identity_embedding():
    with pytest.raises(ValueError):
        salem.nondiscreteness_witness(TriangleFamily(Family.TWO_Q_INF, 5), 0, 0.5, salem.Budget())
