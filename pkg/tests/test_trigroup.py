import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from veechsalem.trigroup import (Family, FieldMatrix2, GroupWord, Kind, build_group, classify,
                                 enumerate_words, evaluate_word, exponent_range)


def half_abs_trace(G, w):
    M = evaluate_word(G, w)
    return abs(M.trace().embed_float(G.field.identity)) / 2


# presentations ------------------------------------------------------------


def test_hecke_relations_q7():
    G = build_group("2qinf", 7)
    I = FieldMatrix2.identity(G.field)
    assert G.s * G.s == -I
    assert (G.s * G.t).trace() == -2
    assert G.t ** 7 == -I


def test_qinfinf_q7_traces():
    G = build_group("qinfinf", 7)
    assert abs(G.s.trace().embed_float(G.field.identity) - 1.8019377358) < 1e-9
    assert (G.s * G.t).trace() == -2
    assert G.t.c == G.field.zero and G.t.a == G.field.one


@pytest.mark.parametrize("fam", ["2qinf", "qinfinf"])
@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9, 12])
def test_relations_hold_exactly(fam, q):
    G = build_group(fam, q)
    I = FieldMatrix2.identity(G.field)
    assert G.s.det() == 1 and G.t.det() == 1
    assert classify(G.s * G.t) is Kind.PARABOLIC
    if fam == "2qinf":
        assert G.s * G.s == -I and (G.t ** q).is_pm_identity()
    else:
        assert (G.s ** q).is_pm_identity() and classify(G.t) is Kind.PARABOLIC


def test_q_below_three_rejected():
    with pytest.raises(ValueError):
        build_group("2qinf", 2)


# evaluation ---------------------------------------------------------------


@pytest.mark.parametrize("fam, q, word, half", [
    ("2qinf", 7, "t^3.s", 2.247),
    ("2qinf", 9, "t^4.s", 2.879),
    ("qinfinf", 7, "t.s^3", 4.049),
])
def test_evaluate_published_words(fam, q, word, half):
    G = build_group(fam, q)
    assert half_abs_trace(G, GroupWord.parse(word)) == pytest.approx(half, abs=5e-4)


def test_empty_word_is_identity():
    G = build_group("2qinf", 5)
    assert evaluate_word(G, GroupWord(())) == FieldMatrix2.identity(G.field)


def test_word_order_convention():
    G = build_group("2qinf", 7)
    assert evaluate_word(G, GroupWord.parse("t^3.s")) == G.t ** 3 * G.s


def test_word_syntax_round_trip():
    w = GroupWord.parse("t^3.s.t^-1.s^5")
    assert str(w) == "t^3.s.t^-1.s^5"
    assert GroupWord.parse("t.t^2.s") == GroupWord.parse("t^3.s")
    with pytest.raises(ValueError):
        GroupWord.parse("u^2")


# classification -----------------------------------------------------------


def test_classify_examples():
    G = build_group("2qinf", 7)
    assert classify(G.s) is Kind.ELLIPTIC
    assert classify(G.s * G.t) is Kind.PARABOLIC
    assert classify(evaluate_word(G, GroupWord.parse("t^3.s"))) is Kind.HYPERBOLIC
    assert classify(-FieldMatrix2.identity(G.field)) is Kind.CENTRAL


# enumeration --------------------------------------------------------------


def test_enumeration_small_case():
    G = build_group("2qinf", 5)
    got = {str(w) for w in enumerate_words(G, 2, 4)}
    assert got == {"t.s", "t^2.s", "t^3.s", "t^4.s"}


def test_enumeration_rejects_zero_blocks():
    with pytest.raises(ValueError):
        list(enumerate_words(build_group("2qinf", 5), 0, 3))


def _oracle_class_count(G, max_blocks, max_abs_exp):
    """Connected components of rotation/inversion moves among all in-range words."""
    t_exps = exponent_range(G, "t", max_abs_exp)
    s_exps = exponent_range(G, "s", max_abs_exp)
    ok = {"t": set(t_exps), "s": set(s_exps)}
    words = set()
    for m in range(1, max_blocks // 2 + 1):
        for combo in itertools.product(itertools.product(t_exps, s_exps), repeat=m):
            words.add(tuple(e for pair in combo for e in pair))
    parent = {w: w for w in words}

    def find(w):
        while parent[w] != w:
            parent[w] = parent[parent[w]]
            w = parent[w]
        return w

    for w in words:
        inv = tuple(-e for e in reversed(w))  # s-first; rotate once to start with t
        inv = inv[1:] + inv[:1]
        for base in (w, inv):
            for k in range(0, len(base), 2):
                r = base[k:] + base[:k]
                if all(r[i] in ok["t" if i % 2 == 0 else "s"] for i in range(len(r))):
                    parent[find(r)] = find(w)
    return len({find(w) for w in words})


@pytest.mark.parametrize("fam, q, blocks, exp", [("2qinf", 7, 4, 6), ("qinfinf", 5, 4, 4),
                                                 ("qinfinf", 7, 6, 2)])
def test_enumeration_count_matches_oracle(fam, q, blocks, exp):
    G = build_group(fam, q)
    words = list(enumerate_words(G, blocks, exp))
    assert len(words) == len(set(words)) == _oracle_class_count(G, blocks, exp)


# invariants ---------------------------------------------------------------


@st.composite
def words(draw, G):
    n = draw(st.integers(1, 8))
    first = draw(st.sampled_from("st"))
    blocks = []
    for i in range(n):
        g = first if i % 2 == 0 else ("t" if first == "s" else "s")
        order = G.order(g)
        e = draw(st.integers(1, order - 1) if order else st.integers(-6, 6).filter(bool))
        blocks.append((g, e))
    return GroupWord(tuple(blocks))


@st.composite
def group_and_word(draw):
    G = build_group(draw(st.sampled_from(["2qinf", "qinfinf"])), draw(st.sampled_from([5, 7, 8, 9])))
    return G, draw(words(G))


@settings(max_examples=120)
@given(group_and_word())
def test_determinant_and_inverse(gw):
    G, w = gw
    M = evaluate_word(G, w)
    assert M.det() == 1
    assert evaluate_word(G, w * w.inverse()) == FieldMatrix2.identity(G.field)
    assert M * evaluate_word(G, w.inverse()) == FieldMatrix2.identity(G.field)


@settings(max_examples=80)
@given(group_and_word(), st.integers(0, 7))
def test_trace_rotation_and_inversion(gw, k):
    G, w = gw
    tr = evaluate_word(G, w).trace()
    k %= len(w)
    if len(w) % 2 == 0:
        rotated = w.rotate(k)
    else:  # odd block count: the wrap-around merges two blocks
        rotated = GroupWord(w.blocks[k:]) * GroupWord(w.blocks[:k])
    assert evaluate_word(G, rotated).trace() == tr
    tr_inv = evaluate_word(G, w.inverse()).trace()
    assert tr_inv == tr or tr_inv == -tr


@settings(max_examples=80)
@given(st.sampled_from([5, 7, 8, 9]), st.data())
def test_hecke_entries_integral(q, data):
    G = build_group("2qinf", q)
    M = evaluate_word(G, data.draw(words(G)))
    assert all(x.is_integral_in_basis() for x in M.entries())


def test_canonical_reduces_finite_order_exponents():
    G = build_group("2qinf", 7)
    assert G.canonical(GroupWord.parse("t^9.s^3")) == GroupWord.parse("t^2.s")
