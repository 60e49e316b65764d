"""Fat-fiber Čech cohomology and pushforwards along the second projection.

Oracle policy: cohomology dimensions, torsion profiles and pushforward
lengths follow closed combinatorial formulas (asserted directly, with the
module certifying each computation internally); curve germs are checked
against their defining identity eta = alpha * xi rebuilt here from the
pullback coefficients, plus hand-computed values at rational
specializations; the monomial ideal-membership rule behind the
collapsed-parameter pushforward is replayed against a full enumeration of
generator covers.
"""

import itertools
import math
from fractions import Fraction

import pytest

from bcsurf import modes
from bcsurf.errors import (
    CertificationError,
    CheckFailed,
    NotTransverse,
    RangeUnsupported,
    WindowTooSmall,
)
from bcsurf.fibercoh import (
    TorsionProfile,
    TruncElement,
    cech_h1_fatfiber,
    filtration_pointmodules,
    invert_unit,
    leray_balance,
    mu_t_and_stabilization,
    pushforward_split_A,
    r1p_length,
    restrict_curve_to_fiber,
    scaled_unit_inverse,
    trunc_monomial,
)
from bcsurf.surface import phi_iterate

GEN = modes.generic()
TAU = modes.tau_one()
SPZ = modes.specialized(Fraction(2), Fraction(3))


# ---------------------------------------------------------------------------
# truncated two-chart elements
# ---------------------------------------------------------------------------


def test_trunc_element_validates_and_drops_zeros():
    e = TruncElement(2, -3, 3, {(0, 0): Fraction(1), (1, 1): Fraction(0)})
    assert e.support() == {(0, 0)}
    with pytest.raises(CheckFailed):
        TruncElement(0, -1, 1, {})
    with pytest.raises(CheckFailed):
        TruncElement(2, 1, -1, {})
    with pytest.raises(CheckFailed):
        TruncElement(2, -1, 1, {(0, 2): Fraction(1)})
    with pytest.raises(WindowTooSmall):
        TruncElement(2, -1, 1, {(5, 0): Fraction(1)})


def test_trunc_arithmetic_truncates_v_and_guards_u():
    one = trunc_monomial(0, 0, Fraction(1), 2, -2, 2)
    v = trunc_monomial(0, 1, Fraction(1), 2, -2, 2)
    # (1 + v)^2 = 1 + 2v in k[v]/(v^2)
    sq = (one + v) * (one + v)
    assert sq.coeffs == {(0, 0): Fraction(1), (0, 1): Fraction(2)}
    # u-overflow is a hard error, in products and in shifts
    u2 = trunc_monomial(2, 0, Fraction(1), 2, -2, 2)
    with pytest.raises(WindowTooSmall):
        u2 * u2
    with pytest.raises(WindowTooSmall):
        u2.shift_u(1)
    # v-overflow in a monomial shift truncates like the ring does
    assert v.shift(0, 1).is_zero()
    assert v.shift(1, 0).coeffs == {(1, 1): Fraction(1)}
    # elements of different rings never mix
    other = trunc_monomial(0, 0, Fraction(1), 2, -2, 3)
    with pytest.raises(CheckFailed):
        one + other
    assert (one - one).is_zero()


def test_unit_inversion_verifies_itself():
    # Fraction coefficients (collapsed parameters)
    elt = TruncElement(3, -2, 2, {
        (0, 0): Fraction(2), (0, 1): Fraction(3), (1, 2): Fraction(1),
    })
    w, scale = scaled_unit_inverse(elt, TAU)
    assert scale == Fraction(8)  # t0^ell = 2^3
    assert elt * w == trunc_monomial(0, 0, scale, 3, -2, 2)
    inv = invert_unit(elt, TAU)
    assert elt * inv == trunc_monomial(0, 0, Fraction(1), 3, -2, 2)
    # symbolic coefficients reduce to the same identity
    sym = TruncElement(2, -1, 1, {(0, 0): GEN.gamma, (0, 1): GEN.delta})
    inv = invert_unit(sym, GEN)
    assert inv.coeffs[(0, 0)] == GEN.one / GEN.gamma
    assert inv.coeffs[(0, 1)] == -GEN.delta / (GEN.gamma * GEN.gamma)
    # no unit constant term / non-nilpotent correction are both rejected
    with pytest.raises(CheckFailed):
        scaled_unit_inverse(trunc_monomial(0, 1, Fraction(1), 2, -1, 1), TAU)
    bad = TruncElement(2, -1, 1, {(0, 0): Fraction(1), (1, 0): Fraction(1)})
    with pytest.raises(CheckFailed):
        scaled_unit_inverse(bad, TAU)


# ---------------------------------------------------------------------------
# curve germs on the fat fiber
# ---------------------------------------------------------------------------


def _germ_parts(i, ell, mode, window):
    # (eta, xi) of the i-th pullback x*eta + y*xi on the fat fiber, rebuilt
    # from the pullback coefficients independently of the module internals
    lo, hi = window
    eta, xi = {}, {}
    for (xe, ze), c in phi_iterate("y", i, mode).coeffs.items():
        if ze < ell:
            (eta if xe == 1 else xi)[(0, ze)] = c
    return (TruncElement(ell, lo, hi, eta), TruncElement(ell, lo, hi, xi))


def test_germ_base_cases():
    g0 = restrict_curve_to_fiber(0, 3, "minus", GEN)
    assert g0.support() == {(-1, 0)}
    g1 = restrict_curve_to_fiber(1, 3, "minus", GEN)
    assert g1.coeffs[(-1, 0)] == GEN.one
    assert g1.coeffs[(0, 1)] == GEN.delta / GEN.gamma
    assert g1.support() == {(-1, 0), (0, 1)}
    p1 = restrict_curve_to_fiber(1, 3, "plus", GEN)
    assert p1.coeffs[(0, 0)] == GEN.one
    assert p1.coeffs[(1, 1)] == GEN.delta / GEN.gamma
    assert restrict_curve_to_fiber(0, 2, "plus", GEN).support() == {(0, 0)}


def test_germ_satisfies_defining_identity():
    # the minus-chart germ is u^-1 + alpha with alpha * xi = eta truncated
    for mode in (GEN, SPZ):
        for i in range(4):
            ell, window = 3, (-5, 5)
            g = restrict_curve_to_fiber(i, ell, "minus", mode, window)
            alpha = g - trunc_monomial(-1, 0, mode.one, ell, *window)
            eta, xi = _germ_parts(i, ell, mode, window)
            assert alpha * xi == eta
            # alpha vanishes at the base point: pure positive v-powers
            assert all(j >= 1 for (_, j) in alpha.support())


def test_germ_rational_specialization_values():
    # rho=2, theta=3: gamma=3, delta=1, so alpha_1 = v/3; at level two the
    # unit constant is 19 and alpha_2 = (9/19) v + (72/361) v^2
    g1 = restrict_curve_to_fiber(1, 3, "minus", SPZ)
    assert g1.coeffs == {(-1, 0): Fraction(1), (0, 1): Fraction(1, 3)}
    g2 = restrict_curve_to_fiber(2, 3, "minus", SPZ)
    assert g2.coeffs == {
        (-1, 0): Fraction(1),
        (0, 1): Fraction(9, 19),
        (0, 2): Fraction(72, 361),
    }


def test_germ_collapsed_parameters_give_pure_poles():
    # with both parameters collapsed the pullbacks are coordinate monomials,
    # so every germ is exactly u^-1 (minus) and 1 (plus)
    for i in range(1, 5):
        assert restrict_curve_to_fiber(i, 3, "minus", TAU).support() == {(-1, 0)}
        assert restrict_curve_to_fiber(i, 3, "plus", TAU).support() == {(0, 0)}


def test_germ_charts_agree_and_reject_bad_input():
    m = restrict_curve_to_fiber(2, 3, "minus", GEN)
    p = restrict_curve_to_fiber(2, 3, "plus", GEN)
    assert m.shift_u(1) == p
    with pytest.raises(ValueError):
        restrict_curve_to_fiber(-1, 2, "minus", GEN)
    with pytest.raises(ValueError):
        restrict_curve_to_fiber(1, 2, "sideways", GEN)


def test_germ_detects_lost_transversality():
    # rho = -1 kills the second coefficient of the first pullback on the
    # fiber, so the curve is no longer transverse there
    degenerate = modes.specialized(-1, 5, strict=False)
    with pytest.raises(NotTransverse):
        restrict_curve_to_fiber(1, 2, "minus", degenerate)


# ---------------------------------------------------------------------------
# Čech cohomology on the fat fiber
# ---------------------------------------------------------------------------


def test_torsion_profile_validates():
    assert TorsionProfile((3, 2, 1)).total == 6
    assert TorsionProfile(()).total == 0
    with pytest.raises(CheckFailed):
        TorsionProfile((2, 0))
    with pytest.raises(CheckFailed):
        TorsionProfile((1, 2))


def test_cech_frozen_examples():
    dim, prof, basis = cech_h1_fatfiber(-3, 0, 0, 2, 2, GEN)
    assert dim == 3
    assert prof.multiplicities == (2, 1)
    assert set(basis) == {(1, 0), (2, 0), (2, 1)}
    dim, prof, basis = cech_h1_fatfiber(-4, 0, 1, 3, 3, GEN)
    assert dim == 3
    assert prof.multiplicities == (2, 1)
    assert set(basis) == {(2, 0), (3, 0), (3, 1)}
    dim, prof, basis = cech_h1_fatfiber(-4, 0, 0, 3, 3, GEN)
    assert dim == 6
    assert prof.multiplicities == (3, 2, 1)
    # trivial cases: no cohomology once the twist reaches -d-1
    assert cech_h1_fatfiber(-1, 5, 0, 1, 2, GEN) == (0, TorsionProfile(()), ())
    assert cech_h1_fatfiber(-2, 0, 1, 2, 2, GEN)[0] == 0


def test_cech_dimension_and_profile_grid():
    for a in (-1, -2, -3):
        for d in (0, 1):
            for ell in range(max(1, -a - 1), 4):
                for n in range(max(d, 1, -a - 1), 4):
                    dim, prof, basis = cech_h1_fatfiber(a, 0, d, ell, n, GEN)
                    assert dim == math.comb(max(0, -a - d), 2)
                    assert prof.multiplicities == tuple(range(-a - d - 1, 0, -1))
                    assert set(basis) == {
                        (i, j)
                        for i in range(d + 1, -a)
                        for j in range(i - d)
                    }


def test_cech_second_twist_is_immaterial():
    # the second-factor twist restricts to a unit on the fat fiber
    for b in (-2, 0, 7):
        assert cech_h1_fatfiber(-3, b, 0, 2, 2, GEN) == \
            cech_h1_fatfiber(-3, 0, 0, 2, 2, GEN)


def test_cech_matches_across_modes():
    for mode in (TAU, SPZ):
        assert cech_h1_fatfiber(-3, 0, 0, 2, 2, mode)[:2] == \
            cech_h1_fatfiber(-3, 0, 0, 2, 2, GEN)[:2]


def test_cech_preconditions():
    with pytest.raises(ValueError, match="d must be"):
        cech_h1_fatfiber(-2, 0, -1, 2, 2, GEN)
    with pytest.raises(ValueError, match="need ell >= 3"):
        cech_h1_fatfiber(-4, 0, 0, 2, 3, GEN)
    with pytest.raises(ValueError, match="need n >= 2"):
        cech_h1_fatfiber(-3, 0, 0, 2, 1, GEN)
    with pytest.raises(WindowTooSmall):
        cech_h1_fatfiber(-3, 0, 0, 2, 2, GEN, window=(0, 10))
    with pytest.raises(WindowTooSmall):
        cech_h1_fatfiber(-3, 0, 0, 2, 2, GEN, window=(-10, 3))


def test_degree_shift_bijective_and_truncation_stable():
    rep = mu_t_and_stabilization(-3, 0, 0, 2, 2, GEN)
    assert rep["mu_t_bijective"] and rep["restriction_bijective"]
    assert rep["dim"] == 3 and rep["profile"].multiplicities == (2, 1)
    rep = mu_t_and_stabilization(-4, 0, 1, 3, 3, GEN)
    assert rep["mu_t_bijective"] and rep["restriction_bijective"]
    assert rep["dim"] == 3
    rep = mu_t_and_stabilization(-1, 0, 0, 1, 1, GEN)
    assert rep["dim"] == 0 and rep["mu_t_bijective"]


# ---------------------------------------------------------------------------
# point-module filtration
# ---------------------------------------------------------------------------


def test_filtration_frozen_examples():
    rep = filtration_pointmodules(-3, 0, 0, 3, (2, 4), GEN)
    assert rep["subquotients"] == 3
    assert rep["flag_pairs"] == ((1, 0), (1, 1), (2, 0))
    assert rep["degrees"] == (2, 3, 4)
    assert rep["stable"]
    assert all(
        hf == {2: 1, 3: 1, 4: 1} for hf in rep["hilbert_functions"].values()
    )
    rep = filtration_pointmodules(-4, 0, 1, 3, (3, 4), GEN)
    assert rep["subquotients"] == 3
    assert rep["flag_pairs"] == ((2, 0), (2, 1), (3, 0))
    assert filtration_pointmodules(-2, 0, 0, 2, (1, 3), GEN)["subquotients"] == 1


def test_filtration_trivial_and_errors():
    rep = filtration_pointmodules(-1, 0, 0, 1, (1, 3), GEN)
    assert rep["subquotients"] == 0 and rep["flag_pairs"] == ()
    assert rep["hilbert_functions"] == {}
    with pytest.raises(ValueError, match="empty degree window"):
        filtration_pointmodules(-3, 0, 0, 2, (3, 2), GEN)


# ---------------------------------------------------------------------------
# first derived pushforward
# ---------------------------------------------------------------------------


def _in_product_ideal(i, j, n, m):
    # full enumeration: u^i v^j lies in (u, v^m)...(u, v^{m+n-1}) iff some
    # set of factors covered by u-powers fits in i and the uncovered
    # exponents fit in j
    for bits in itertools.product((0, 1), repeat=n):
        if sum(bits) <= i and sum(m + k for k, b in enumerate(bits) if not b) <= j:
            return True
    return False


def test_minimal_cover_rule_against_enumeration():
    for n in range(0, 7):
        for m in range(0, 4):
            top = n * m + math.comb(n, 2)
            for i in range(0, n + 3):
                for j in range(0, top + 3):
                    k = max(0, n - i)
                    rule = j < k * m + math.comb(k, 2)
                    assert rule == (not _in_product_ideal(i, j, n, m)), \
                        (n, m, i, j)


def test_r1p_generic_variant_frozen_profiles():
    total, prof = r1p_length(2, 1, -2, 0, "R", GEN)
    assert total == 2
    assert prof == {"f0": (1,), "f1": (), "f2": (),
                    "q0": (1,), "q1": (), "q2": ()}
    total, prof = r1p_length(2, 1, -3, 0, "R", GEN)
    assert total == 8
    assert prof == {"f0": (2, 1), "f1": (1,), "f2": (),
                    "q0": (2, 1), "q1": (1,), "q2": ()}
    total, prof = r1p_length(2, 0, -2, 0, "R", GEN)
    assert total == 0 and all(p == () for p in prof.values())
    total, prof = r1p_length(3, 2, -3, 0, "R", GEN)
    assert total == 14
    assert prof["f0"] == (2, 1) and prof["f1"] == (2, 1) and prof["f2"] == (1,)


def test_r1p_collapsed_variant_frozen_profiles():
    assert r1p_length(2, 1, -2, 0, "A", GEN) == (2, {"f": (1,), "q": (1,)})
    assert r1p_length(2, 1, -3, 0, "A", GEN) == (8, {"f": (3, 1), "q": (3, 1)})
    assert r1p_length(3, 2, -3, 0, "A", GEN) == (14, {"f": (5, 2), "q": (5, 2)})
    assert r1p_length(4, 2, -2, 0, "A", GEN) == (4, {"f": (2,), "q": (2,)})
    assert r1p_length(2, 0, -1, 0, "A", GEN) == (0, {"f": (), "q": ()})


def test_r1p_totals_match_closed_form_in_both_variants():
    for a in (-1, -2, -3):
        for m in (0, 1, 2):
            for n in range(-a - 1, -a + 2):
                if n < 1:
                    continue
                want = 2 * (m * math.comb(-a, 2) + math.comb(-a, 3))
                tot_r, _ = r1p_length(n, m, a, 0, "R", GEN)
                tot_a, _ = r1p_length(n, m, a, 0, "A", GEN)
                assert tot_r == tot_a == want, (n, m, a)


def test_r1p_per_point_multisets_differ_across_variants():
    # equal totals, genuinely different local distributions
    _, prof_r = r1p_length(2, 1, -3, 0, "R", GEN)
    _, prof_a = r1p_length(2, 1, -3, 0, "A", GEN)
    flat_r = sorted(x for p in prof_r.values() for x in p)
    flat_a = sorted(x for p in prof_a.values() for x in p)
    assert sum(flat_r) == sum(flat_a) == 8
    assert flat_r == [1, 1, 1, 1, 2, 2]
    assert flat_a == [1, 1, 3, 3]
    assert flat_r != flat_a


def test_r1p_preconditions():
    with pytest.raises(ValueError, match="need n >= 2"):
        r1p_length(1, 0, -3, 0, "R", GEN)
    with pytest.raises(ValueError, match="need n, m >= 0"):
        r1p_length(2, -1, -1, 0, "R", GEN)
    with pytest.raises(ValueError, match="unknown variant"):
        r1p_length(2, 1, -2, 0, "B", GEN)


# ---------------------------------------------------------------------------
# direct pushforward of the collapsed-parameter sheaves
# ---------------------------------------------------------------------------


def test_pushforward_split_frozen_examples():
    assert pushforward_split_A(2, 0, -1, 0) == ((2, 2), 0, 1)
    assert pushforward_split_A(3, 0, 0, 0) == ((3, 5, 5, 3), 0, 1)
    assert pushforward_split_A(3, 1, -2, 0) == ((0, 0), 0, 2)
    assert pushforward_split_A(4, 0, 1, 0) == ((4, 7, 9, 9, 7, 4), 0, 2)
    assert pushforward_split_A(2, 1, -1, 0) == ((1, 1), 0, 1)
    assert pushforward_split_A(3, 0, -3, 0) == ((0,), 0, 3)
    assert pushforward_split_A(5, 1, 0, -1) == ((4, 8, 10, 10, 8, 4), 0, 1)


def test_pushforward_split_symmetry_and_twist():
    for (n, m, a, b) in [(4, 1, -2, 0), (5, 2, -1, 3), (4, 0, 1, -2)]:
        twisted, h1, _ = pushforward_split_A(n, m, a, b)
        assert twisted == tuple(reversed(twisted))
        assert len(twisted) == n + a + 1
        assert h1 == sum(max(0, -e - 1) for e in twisted)
        # the second-factor twist shifts every summand degree by one
        shifted, _, _ = pushforward_split_A(n, m, a, b + 1)
        assert shifted == tuple(e + 1 for e in twisted)


def test_pushforward_split_range_errors():
    with pytest.raises(RangeUnsupported, match="needs n >= 2 for twist -2"):
        pushforward_split_A(1, 0, -2, 0)
    with pytest.raises(RangeUnsupported, match="needs n >= 3 for twist 2"):
        pushforward_split_A(2, 1, 2, 0)
    with pytest.raises(ValueError, match="need m >= 0"):
        pushforward_split_A(2, -1, -1, 0)


def test_leray_balance_frozen_examples():
    rep = leray_balance(2, 0, -1, 0, GEN)
    assert rep["h1_surface_two_ways"] == (0, 0)
    assert rep["h1_surface_generic"] == 0 and rep["h1_base_generic"] == 0
    rep = leray_balance(3, 1, -2, 0, GEN)
    assert rep["h1_surface_two_ways"] == (2, 2)
    assert rep["h1_base"] == 0 and rep["r1p_total"] == 2
    assert rep["h1_surface_generic"] == 2
    rep = leray_balance(2, 1, -2, 1, GEN)
    assert rep["h1_surface_two_ways"] == (2, 2)
    assert rep["h1_surface_generic_bounds"] == (2, 2)


def test_leray_balance_reports_bounds_when_not_pinned():
    # the sampled rank does not always close the squeeze; the report then
    # carries the two-sided bounds and no exact generic value
    rep = leray_balance(4, 1, -3, 0, GEN)
    assert rep["h1_surface_two_ways"] == (10, 10)
    assert rep["h1_base"] == 2 and rep["r1p_total"] == 8
    lo, hi = rep["h1_surface_generic_bounds"]
    assert lo == 8 and lo <= hi <= 10


def test_leray_balance_range_error():
    with pytest.raises(RangeUnsupported, match="outside the balanced range"):
        leray_balance(1, 0, -1, -2, GEN)
