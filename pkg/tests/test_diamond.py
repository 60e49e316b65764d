"""Quadratic rewriting engine: validation, confluence, normal forms, counts.

Oracle policy: toy-system behavior is worked out by hand and frozen; the
concrete six-rule instance is cross-checked two independent ways (transfer
matrix count vs the binomial formula, and each rule against the exact word
forms of the collapsed-parameter algebra).
"""

import math
from fractions import Fraction

import pytest

from bcsurf import modes, skew
from bcsurf.diamond import (
    NormalFormTable,
    RewriteSystem,
    a_counts_match_dimension,
    a_system,
    hilbert_coefficients,
    irreducible_count,
    irreducible_words,
    normal_form,
    resolve_overlaps,
)
from bcsurf.errors import CheckFailed, NonTerminating, UnresolvableOverlap

TAU = modes.tau_one()

A = a_system()
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# system validation
# ---------------------------------------------------------------------------


def test_a_system_leading_words():
    assert A.leading_words() == (
        ("x3", "x1"),
        ("x3", "x2"),
        ("x4", "x1"),
        ("x4", "x2"),
        ("x1", "x2"),
        ("x4", "x3"),
    )


def test_rejects_order_violation():
    # replacement must sit strictly below the leading word
    with pytest.raises(CheckFailed):
        RewriteSystem(("x", "y"), [(("x", "y"), ("y", "x"))])


def test_rejects_duplicate_leading_word():
    with pytest.raises(CheckFailed):
        RewriteSystem(
            ("x", "y"),
            [(("y", "x"), ("x", "y")), (("y", "x"), {})],
        )


def test_rejects_malformed_rules():
    with pytest.raises(CheckFailed):
        RewriteSystem(("x", "y"), [(("x", "y", "y"), {})])
    with pytest.raises(CheckFailed):
        RewriteSystem(("x", "y"), [(("x", "z"), {})])
    with pytest.raises(CheckFailed):
        RewriteSystem(("x", "x"), [])


# ---------------------------------------------------------------------------
# overlap resolution
# ---------------------------------------------------------------------------


def test_a_system_overlaps_resolve():
    rep = resolve_overlaps(A)
    assert rep["resolved"]
    assert rep["count"] == 4
    assert rep["overlaps"] == [
        ("x3", "x1", "x2"),
        ("x4", "x1", "x2"),
        ("x4", "x3", "x1"),
        ("x4", "x3", "x2"),
    ]


def test_single_rule_has_no_overlaps():
    toy = RewriteSystem(("x", "y"), [(("x", "y"), {})])
    rep = resolve_overlaps(toy)
    assert rep["count"] == 0 and rep["resolved"]


def test_two_rule_toy_overlaps_resolve():
    # yx -> xy and xy -> 0: both reductions of yxy (and of xyx) reach zero
    toy = RewriteSystem(
        ("x", "y"), [(("y", "x"), ("x", "y")), (("x", "y"), {})]
    )
    rep = resolve_overlaps(toy)
    assert rep["overlaps"] == [("y", "x", "y"), ("x", "y", "x")]


def test_unresolvable_overlap_detected():
    # cab reduces to aac one way and to zero the other
    bad = RewriteSystem(
        ("a", "b", "c"),
        [
            (("c", "a"), ("a", "c")),
            (("c", "b"), ("a", "c")),
            (("a", "b"), {}),
        ],
    )
    with pytest.raises(UnresolvableOverlap):
        resolve_overlaps(bad)


# ---------------------------------------------------------------------------
# normal forms
# ---------------------------------------------------------------------------


def test_normal_form_single_rule():
    assert normal_form(A, ("x3", "x1")) == {("x1", "x3"): ONE}


def test_normal_form_three_step_chain():
    nf = normal_form(A, ("x4", "x3", "x1"))
    assert nf == {("x2", "x3", "x3"): ONE}
    assert normal_form(A, ("x4", "x3", "x1"), strategy="rightmost") == nf


def test_normal_form_fixes_irreducible_words():
    w = ("x2", "x1", "x3", "x4")
    assert normal_form(A, w) == {w: ONE}


def test_normal_form_is_linear_and_idempotent():
    combo = {("x3", "x1"): Fraction(2), ("x4", "x2"): Fraction(-1, 3)}
    nf = normal_form(A, combo)
    assert nf == {("x1", "x3"): Fraction(2), ("x2", "x4"): Fraction(-1, 3)}
    assert normal_form(A, nf) == nf


def test_strategies_agree_after_confluence():
    words = [()]
    for _ in range(4):
        words = [w + (s,) for w in words for s in A.alphabet]
    for w in words:
        assert normal_form(A, w) == normal_form(A, w, strategy="rightmost")


def test_normal_form_budget():
    loop = RewriteSystem(
        ("x", "y"),
        [(("x", "y"), ("y", "x")), (("y", "x"), ("x", "y"))],
        check_order=False,
    )
    with pytest.raises(NonTerminating):
        normal_form(loop, ("x", "y"), budget=50)


def test_normal_form_rejects_unknown_strategy():
    with pytest.raises(ValueError):
        normal_form(A, ("x3", "x1"), strategy="middle")


# ---------------------------------------------------------------------------
# irreducible words
# ---------------------------------------------------------------------------


def test_irreducible_words_degree_two():
    words = irreducible_words(A, 2)
    assert len(words) == 10
    assert words[0] == ("x2", "x2") and words[-1] == ("x4", "x4")
    assert all(A.is_irreducible(w) for w in words)


def test_irreducible_words_are_sorted_monomials():
    # degree-n basis: x2^i x1^j x3^k x4^l with i+j+k+l = n
    for n in range(6):
        expect = {
            ("x2",) * i + ("x1",) * j + ("x3",) * k + ("x4",) * (n - i - j - k)
            for i in range(n + 1)
            for j in range(n + 1 - i)
            for k in range(n + 1 - i - j)
        }
        assert set(irreducible_words(A, n)) == expect


def test_irreducible_count_values():
    assert irreducible_count(A, 0) == 1
    assert irreducible_count(A, 2) == 10
    assert irreducible_count(A, 5) == 56


def test_irreducible_count_matches_binomial():
    rows = a_counts_match_dimension(10)
    assert rows[-1] == (10, 286)
    for n, cnt in rows:
        assert cnt == math.comb(n + 3, 3)


def test_hilbert_coefficients():
    assert hilbert_coefficients(A, 6) == (1, 4, 10, 20, 35, 56, 84)


def test_counts_match_graded_dimensions():
    # two independent computations of the same graded dimension
    for n in range(9):
        assert irreducible_count(A, n) == skew.graded_piece(n, 0, TAU).dim


# ---------------------------------------------------------------------------
# normal-form tables
# ---------------------------------------------------------------------------


def test_normal_form_table_degree_two():
    t = NormalFormTable.build(A, 2)
    assert t.degree == 2
    assert len(t.irreducible) == 10
    assert len(t.matrix) == 16
    assert t.matrix[("x3", "x1")] == {("x1", "x3"): ONE}
    for w in t.irreducible:
        assert t.matrix[w] == {w: ONE}


def test_normal_form_table_degree_three():
    t = NormalFormTable.build(A, 3)
    assert len(t.irreducible) == 20
    assert len(t.matrix) == 64
    irr = set(t.irreducible)
    for nf in t.matrix.values():
        assert set(nf) <= irr


# ---------------------------------------------------------------------------
# ties to the algebra
# ---------------------------------------------------------------------------


def test_rules_are_exact_word_identities():
    # each binomial rule states an equality of letter words in the algebra,
    # verified on exact numerator forms at the collapsed parameter
    for lead, repl in A.rules:
        assert len(repl) == 1 and repl[0][1] == ONE
        lw = tuple(s.replace("x", "r") for s in lead)
        rw = tuple(s.replace("x", "r") for s in repl[0][0])
        assert skew.word_form(lw, 0, TAU) == skew.word_form(rw, 0, TAU)
