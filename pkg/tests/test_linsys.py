"""Fat-point linear systems: condition ranks, section counts, monomial routes.

Oracle policy: scheme shapes and lengths follow the closed combinatorial
formulas (asserted directly); condition ranks and section counts are frozen
from exact runs that the module itself certifies (sampled lower bound meeting
a structural upper bound, or a self-verifying exact kernel computation).
"""

import math

import pytest

from bcsurf import linsys, modes, skew
from bcsurf.errors import (
    AmbientCohomology,
    CertificationError,
    CheckFailed,
    GuardError,
)
from bcsurf.linsys import (
    FatPointScheme,
    MonomialRegion,
    a_h0_h1,
    a_monomial_basis,
    condition_rank,
    condition_rows,
    fat_point_scheme,
    h0_h1,
    region_bounds,
    scheme_length_formula,
    scheme_multiplicity,
    sections_equal_ring,
)
from bcsurf.surface import SurfacePoint, orbit_point

GEN = modes.generic()
TAU = modes.tau_one()


# ---------------------------------------------------------------------------
# scheme construction
# ---------------------------------------------------------------------------


def test_scheme_multiplicity_rule():
    # multiplicity min(n, n + m - 1 - j) at the j-th orbit pair
    assert scheme_multiplicity(2, 1, 0) == 2
    assert scheme_multiplicity(2, 1, 1) == 1
    assert scheme_multiplicity(3, 0, 0) == 2
    assert scheme_multiplicity(1, 4, 3) == 1


def test_scheme_length_formula_matches_multiplicities():
    for n in range(1, 6):
        for m in range(0, 5):
            total = sum(
                2 * math.comb(scheme_multiplicity(n, m, j) + 1, 2)
                for j in range(n + m - 1)
            )
            assert total == scheme_length_formula(n, m)


def test_fat_point_scheme_simple_pair():
    sch = fat_point_scheme(1, 1, GEN)
    assert sch.labels == ("F0", "Q0")
    assert [mu for _, mu in sch.points] == [1, 1]
    assert sch.length == 2


def test_fat_point_scheme_double_pair():
    sch = fat_point_scheme(2, 0, GEN)
    assert sch.labels == ("F0", "Q0")
    assert [mu for _, mu in sch.points] == [1, 1]
    assert sch.length == 2


def test_fat_point_scheme_mixed_multiplicities():
    sch = fat_point_scheme(2, 1, GEN)
    assert sch.labels == ("F0", "Q0", "F1", "Q1")
    assert [mu for _, mu in sch.points] == [2, 2, 1, 1]
    assert sch.length == 8
    assert sch.length == scheme_length_formula(2, 1)


def test_fat_point_scheme_guards():
    with pytest.raises(GuardError):
        fat_point_scheme(2, 1, TAU)
    with pytest.raises(ValueError):
        fat_point_scheme(0, 1, GEN)


def test_fat_point_scheme_validation():
    pt = orbit_point(0, GEN, "F")
    with pytest.raises(CheckFailed):
        FatPointScheme(points=((pt, 0),))
    with pytest.raises(CheckFailed):
        FatPointScheme(points=((pt, 1),), labels=("a", "b"))


# ---------------------------------------------------------------------------
# condition ranks
# ---------------------------------------------------------------------------


def test_condition_rank_simple_point():
    pt = orbit_point(0, GEN, "F")
    sch = FatPointScheme(points=((pt, 1),))
    assert condition_rank(sch, (1, 1), GEN) == 1


def test_condition_rank_simple_pair():
    sch = fat_point_scheme(1, 1, GEN)
    assert condition_rank(sch, (1, 1), GEN) == 2


def test_condition_rank_fat_pair():
    sch = fat_point_scheme(2, 1, GEN)
    assert condition_rank(sch, (2, 5), GEN) == 8


def test_condition_rank_empty_scheme():
    sch = FatPointScheme(points=())
    assert condition_rank(sch, (3, 3), GEN) == 0


def test_condition_rank_rejects_negative_bidegree():
    sch = fat_point_scheme(1, 1, GEN)
    with pytest.raises(ValueError):
        condition_rank(sch, (-1, 2), GEN)


def test_condition_rows_shape():
    sch = fat_point_scheme(2, 1, GEN)
    rows = condition_rows(sch, (2, 5), GEN)
    assert len(rows) == sch.length
    assert all(len(r) == 3 * 6 for r in rows)


def test_condition_rank_full_grid():
    # every orbit scheme imposes independent conditions in its natural bidegree
    for n in range(1, 6):
        for m in range(0, 6 - n):
            sch = fat_point_scheme(n, m, GEN)
            bd = skew.piece_bidegree(n, m)
            assert condition_rank(sch, bd, GEN) == sch.length


# ---------------------------------------------------------------------------
# section counts
# ---------------------------------------------------------------------------


def test_h0_h1_matches_algebra_dimension():
    for (n, m), expect in {
        (1, 0): (4, 0),
        (2, 0): (10, 0),
        (2, 1): (10, 0),
        (3, 1): (20, 0),
    }.items():
        assert h0_h1(n, m, 0, 0, GEN) == expect
        assert expect[0] == math.comb(n + 3, 3)


def test_h0_h1_twisted():
    assert h0_h1(2, 0, -1, 0, GEN) == (6, 0)


def test_h0_h1_deficient_system():
    # dropping the first-factor degree by 3 leaves a rank-deficient system:
    # the count is certified by the exact kernel route, not assumed
    assert h0_h1(3, 0, -3, 0, GEN) == (1, 2)


def test_h0_h1_ambient_guard():
    with pytest.raises(AmbientCohomology):
        h0_h1(2, 0, -3, 0, GEN)
    with pytest.raises(AmbientCohomology):
        h0_h1(1, 0, 0, -2, GEN)


def test_sections_equal_ring_small():
    for n, m in ((1, 0), (2, 0), (1, 1)):
        rep = sections_equal_ring(n, m, GEN)
        assert rep["dim"] == rep["h0"] == skew.dim_formula(n)
        assert rep["h1"] == 0
        assert rep["expanded_words"] == 0


def test_sections_equal_ring_report_fields():
    rep = sections_equal_ring(2, 1, GEN)
    assert rep["n"] == 2 and rep["m"] == 1
    assert rep["rows"] == rep["dim"] == 10
    assert rep["conditions"] == 8
    assert rep["points"] == ["F0", "Q0", "F1", "Q1"]


def test_sections_equal_ring_guards():
    with pytest.raises(GuardError):
        sections_equal_ring(1, 0, TAU)


def test_sections_equal_ring_specialized():
    spz = modes.specialized(2, 3)
    rep = sections_equal_ring(1, 1, spz)
    assert rep["dim"] == rep["h0"] == 4


# ---------------------------------------------------------------------------
# collapsed-parameter monomial route
# ---------------------------------------------------------------------------


def test_region_bounds_first_rows():
    assert region_bounds(2, 0, 0) == (0, 2)
    assert region_bounds(2, 0, 1) == (0, 3)
    assert region_bounds(2, 0, 2) == (1, 3)


def test_a_monomial_basis_degree_one():
    reg = a_monomial_basis(1, 0)
    assert reg.monomials() == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_a_monomial_basis_rows():
    reg = a_monomial_basis(2, 0)
    assert reg.rows == ((0, 2), (0, 3), (1, 3))
    assert reg.size == 10
    reg = a_monomial_basis(2, 1)
    assert reg.rows == ((0, 2), (1, 4), (3, 5))


def test_a_monomial_basis_grid():
    for n in range(0, 9):
        for m in range(0, 5):
            reg = a_monomial_basis(n, m)
            assert reg.size == skew.dim_formula(n)
            assert reg.monomials() == skew.tau_one_monomials(n, m)


def test_monomial_region_validation():
    with pytest.raises(CheckFailed):
        MonomialRegion(n=1, m=0, rows=((0, 1),))
    with pytest.raises(CheckFailed):
        MonomialRegion(n=1, m=0, rows=((0, 1), (2, 1)))


def test_a_h0_h1_examples():
    assert a_h0_h1(1, 0) == (4, 0)
    assert a_h0_h1(2, 0) == (10, 0)
    assert a_h0_h1(2, 3) == (10, 0)


def test_a_h0_h1_grid():
    for n in range(0, 9):
        for m in range(0, 5):
            h0, h1 = a_h0_h1(n, m)
            assert h0 == math.comb(n + 3, 3)
            assert h1 == 0
