"""Tests for the surface layer: bihomogeneous forms on P1 x P1, the pullback
substitution, orbit points, multiplicities, and the critical-density
determinant certificates."""

from fractions import Fraction

import pytest

from bcsurf import modes, surface
from bcsurf.errors import (
    BadIndexList,
    CheckFailed,
    DegreeMismatch,
    UndefinedOrbitPoint,
    ZeroForm,
)
from bcsurf.exact import MPoly, Scalar
from bcsurf.surface import (
    BiForm,
    SurfacePoint,
    base_point,
    critdens_certificate,
    critdens_matrix,
    gen_w,
    gen_x,
    gen_y,
    gen_z,
    mult_at,
    orbit_point,
    orbit_pq,
    phi_images,
    phi_iterate,
    phi_point,
    phi_pullback,
    pullback_form,
    zw_content,
)

GEN = modes.generic()
TAU = modes.tau_one()


# ---------------------------------------------------------------------------
# forms
# ---------------------------------------------------------------------------


def test_biform_arithmetic():
    x, y = gen_x(GEN), gen_y(GEN)
    z, w = gen_z(GEN), gen_w(GEN)
    assert (x * y).bidegree == (2, 0)
    assert (x * z).bidegree == (1, 1)
    assert ((x + y) * (x - y)) == x * x - y * y
    with pytest.raises(DegreeMismatch):
        x + z
    assert (x * z) ** 2 == x * x * z * z


def test_biform_eval():
    x, y = gen_x(GEN), gen_y(GEN)
    pt = SurfacePoint(Fraction(2), Fraction(3), Fraction(1), Fraction(1))
    f = x * x - y * y
    assert f.eval(pt) == Fraction(4 - 9)


def test_pullback_images():
    X, Y, Z, W = phi_images(GEN)
    # images are (1,1) and (0,1) forms built from gamma, delta, eps, zeta
    assert X.bidegree == (1, 1)
    assert Y.bidegree == (1, 1)
    assert Z.bidegree == (0, 1)
    assert W.bidegree == (0, 1)
    x, y, z, w = gen_x(GEN), gen_y(GEN), gen_z(GEN), gen_w(GEN)
    g, d = GEN.gamma, GEN.delta
    e, zt = GEN.eps, GEN.zeta
    assert X == g * (x * z) + d * (y * w)
    assert Y == d * (x * z) + g * (y * w)
    assert Z == e * z + zt * w
    assert W == zt * z + e * w


def test_pullback_is_multiplicative():
    x, z = gen_x(GEN), gen_z(GEN)
    f = x * z
    assert phi_pullback(f, GEN) == phi_pullback(x, GEN) * phi_pullback(z, GEN)


def test_iterate_bidegrees():
    for n in range(5):
        assert phi_iterate("x", n, GEN).bidegree == (1, n)
        assert phi_iterate("y", n, GEN).bidegree == (1, n)
        if n >= 1:
            # the second-factor coordinates stay (0,1): the second factor
            # maps to itself by a Moebius substitution
            assert phi_iterate("z", n, GEN).bidegree == (0, 1)
            assert phi_iterate("w", n, GEN).bidegree == (0, 1)


def test_iterates_preserve_linear_identities():
    # raw iterates of x+y and of x, y separately agree (no content removed)
    n = 3
    fx = phi_iterate("x", n, GEN)
    fy = phi_iterate("y", n, GEN)
    s = gen_x(GEN) + gen_y(GEN)
    for _ in range(n):
        s = phi_pullback(s, GEN)
    assert s == fx + fy


def test_pullback_point_compatibility():
    # pullback and pushforward of points: (phi^* f)(P) = f(phi(P))
    pt = SurfacePoint(Fraction(2), Fraction(1), Fraction(3), Fraction(1))
    img = phi_point(pt, GEN)

    # generic mode coefficients are rational functions; evaluate at a sample
    spz = modes.specialized(5, 7)
    pt_s = SurfacePoint(Fraction(2), Fraction(1), Fraction(3), Fraction(1))
    img_s = phi_point(pt_s, spz)
    for name in ("x", "y", "z", "w"):
        f = phi_iterate(name, 1, spz)
        base = {"x": pt_s.x, "y": pt_s.y, "z": pt_s.z, "w": pt_s.w}[name]
        # f(P) equals the matching coordinate of phi(P) up to the chart scale
        assert f.eval(pt_s) == {"x": img_s.x, "y": img_s.y, "z": img_s.z, "w": img_s.w}[
            name
        ]


# ---------------------------------------------------------------------------
# content of degenerate pullbacks
# ---------------------------------------------------------------------------


def test_zw_content_trivial():
    x, z = gen_x(GEN), gen_z(GEN)
    c, red = zw_content(x * z)
    assert c == z  # the z-factor is pure second-factor content
    assert red == x
    with pytest.raises(ZeroForm):
        zw_content(BiForm(1, 1, {}))


def test_pullback_form_generic_contentfree():
    x = gen_x(GEN)
    red, content = pullback_form(x, 2, GEN)
    assert content.bidegree == (0, 0)
    assert red.bidegree == (1, 2)


def test_degenerate_specialization_has_content():
    # at (rho, theta) = (-1, 1) the second iterate of x degenerates: its
    # honest bidegree-(1,2) image picks up a factor of z*w
    degen = modes.specialized(-1, 1, strict=False)
    red, content = pullback_form(gen_x(degen), 2, degen)
    assert content.bidegree == (0, 2)
    zw = gen_z(degen) * gen_w(degen)
    assert content == zw or content == Fraction(-1) * zw
    assert red.bidegree == (1, 0)


# ---------------------------------------------------------------------------
# points and orbits
# ---------------------------------------------------------------------------


def test_surface_point_validation():
    with pytest.raises(UndefinedOrbitPoint):
        SurfacePoint(0, 0, 1, 1)
    with pytest.raises(UndefinedOrbitPoint):
        SurfacePoint(1, 1, 0, 0)
    p = SurfacePoint(1, 2, 3, 4)
    assert p.swap().proj_eq(SurfacePoint(2, 1, 4, 3))
    assert p.proj_eq(SurfacePoint(2, 4, 6, 8))
    assert not p.proj_eq(SurfacePoint(1, 2, 4, 3))


def test_round_square_roundtrip():
    p = SurfacePoint.from_round(1, 2, 3, 4)
    (a, b), (c, d) = p.to_round()
    assert Fraction(a) * 2 == Fraction(b) * 1 or (a, b) == (1, 2)


def test_orbit_recurrence_oracle():
    # p1 = rho + theta, q1 = -1 - rho*theta
    p1, q1, t1 = orbit_pq(1, GEN)
    rho, theta = Scalar.var("rho"), Scalar.var("theta")
    assert p1 == rho + theta
    assert q1 == Scalar.const(-1) - rho * theta
    assert t1 == theta
    p0, q0, t0 = orbit_pq(0, GEN)
    assert p0 == Scalar.const(1)
    assert q0 == Scalar.const(-1)
    assert t0 == Scalar.const(1)


def test_orbit_points_flow_backward():
    # the map sends each orbit point to the previous one: phi(F_{n+1}) = F_n
    for mode in (GEN, modes.specialized(2, 3)):
        for n in range(4):
            nxt = orbit_point(n + 1, mode, "F")
            cur = orbit_point(n, mode, "F")
            assert phi_point(nxt, mode).proj_eq(cur)
            nxt_q = orbit_point(n + 1, mode, "Q")
            cur_q = orbit_point(n, mode, "Q")
            assert phi_point(nxt_q, mode).proj_eq(cur_q)


def test_orbit_zero_is_base_point():
    assert orbit_point(0, GEN, "F").proj_eq(base_point(GEN, "F"))
    assert orbit_point(0, GEN, "Q").proj_eq(base_point(GEN, "Q"))
    assert base_point(GEN, "Q").proj_eq(base_point(GEN, "F").swap())


def test_orbit_mod_theta_congruences():
    # p_n = rho^n and q_n = -1 modulo theta, for n <= 12
    rho = Scalar.var("rho")
    for n in range(13):
        pn, qn, _ = orbit_pq(n, GEN)
        assert pn.den.is_const() and qn.den.is_const()
        # reduce mod theta by evaluating theta -> 0
        p_at0 = pn.specialize_partial({"theta": Fraction(0)})
        q_at0 = qn.specialize_partial({"theta": Fraction(0)})
        assert p_at0 == rho ** n
        assert q_at0 == Scalar.const(-1)


def test_orbit_points_distinct():
    spz = modes.specialized(2, 3)
    pts = [orbit_point(n, spz, "F") for n in range(8)]
    pts += [orbit_point(n, spz, "Q") for n in range(8)]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            assert not pts[i].proj_eq(pts[j])


# ---------------------------------------------------------------------------
# multiplicities
# ---------------------------------------------------------------------------


def test_mult_at_basics():
    x, y = gen_x(GEN), gen_y(GEN)
    pt = SurfacePoint(Fraction(0), Fraction(1), Fraction(1), Fraction(1))
    assert mult_at(x, pt) == 1
    assert mult_at(y, pt) == 0
    assert mult_at(x * x, pt) == 2


def test_iterates_vanish_at_orbit_points():
    # both n-fold iterates vanish to order exactly 1 at F_j and Q_j for
    # j < n; at j = n only one of the pair vanishes (F_0 lies on x = 0 and
    # Q_0 on y = 0), so F_n, Q_n are not common zeros
    spz = modes.specialized(2, 3)
    n = 2
    fx = phi_iterate("x", n, spz)
    fy = phi_iterate("y", n, spz)
    for f in (fx, fy):
        for j in range(n):
            assert mult_at(f, orbit_point(j, spz, "F")) == 1
            assert mult_at(f, orbit_point(j, spz, "Q")) == 1
    assert mult_at(fx, orbit_point(n, spz, "F")) == 1
    assert mult_at(fy, orbit_point(n, spz, "F")) == 0
    assert mult_at(fx, orbit_point(n, spz, "Q")) == 0
    assert mult_at(fy, orbit_point(n, spz, "Q")) == 1


# ---------------------------------------------------------------------------
# critical-density certificates
# ---------------------------------------------------------------------------


def test_critdens_matrix_shape_and_validation():
    m = critdens_matrix(1, 0, (0, 1), GEN)
    assert len(m) == 2 and len(m[0]) == 2
    with pytest.raises(BadIndexList):
        critdens_matrix(1, 0, (0,), GEN)
    with pytest.raises(BadIndexList):
        critdens_matrix(1, 0, (1, 0), GEN)
    with pytest.raises(BadIndexList):
        critdens_matrix(1, 0, (0, 0), GEN)


def test_critdens_2x2_oracle():
    # det of the (m,s) = (1,0) matrix on indices (0,1) is -(1-rho)(1-theta)
    # up to sign
    cert = critdens_certificate(1, 0, (0, 1), GEN)
    assert cert["det_nonzero"]
    rho, theta = MPoly.var("rho"), MPoly.var("theta")
    expected = (MPoly.const(1) - rho) * (MPoly.const(1) - theta)
    det = cert["det"]
    assert det == expected or det == MPoly.const(-1) * expected


def test_critdens_certificates_consecutive():
    for (m, s) in ((1, 0), (0, 1), (1, 1)):
        N = (m + 1) * (s + 1)
        cert = critdens_certificate(m, s, tuple(range(N)), GEN)
        assert cert["det_nonzero"]
        assert cert["lowest_matches_diagonal"]


def test_critdens_certificates_nonconsecutive():
    for (m, s), idx in (((1, 0), (0, 2)), ((0, 1), (1, 3)), ((1, 1), (0, 2, 3, 5))):
        cert = critdens_certificate(m, s, idx, GEN)
        assert cert["det_nonzero"]


def test_critdens_specialized_mode():
    spz = modes.specialized(2, 3)
    cert = critdens_certificate(1, 1, (0, 1, 2, 3), spz)
    assert cert["det_nonzero"]


# ---------------------------------------------------------------------------
# curve pairs and their base loci
# ---------------------------------------------------------------------------


def test_curve_forms_identity_and_first_pullback():
    X0, Y0, Z0, W0 = surface.curve_forms(0, GEN)
    assert X0 == gen_x(GEN) and Y0 == gen_y(GEN)
    assert Z0 == gen_z(GEN) and W0 == gen_w(GEN)
    _, Y1, Z1, W1 = surface.curve_forms(1, GEN)
    x, y, z, w = gen_x(GEN), gen_y(GEN), gen_z(GEN), gen_w(GEN)
    assert Y1 == GEN.delta * (x * z) + GEN.gamma * (y * w)
    # the second-factor coordinates never move
    assert Z1 == z and W1 == w


def test_curve_forms_bidegrees():
    for n in range(5):
        Xn, Yn, Zn, Wn = surface.curve_forms(n, GEN)
        assert Xn.bidegree == (1, n) and Yn.bidegree == (1, n)
        assert Zn.bidegree == (0, 1) and Wn.bidegree == (0, 1)


def test_local_taylor_quadratic_oracle():
    # f = (x - rho*y)^2 has local expansion (u - rho)^2 at ((rho:1), (1:1))
    c = GEN.rho
    f = BiForm(2, 0, {(2, 0): GEN.one, (1, 0): -2 * c, (0, 0): c * c})
    pt = SurfacePoint(c, GEN.one, GEN.one, GEN.one)
    assert not surface.local_taylor(f, pt, 0, 0)
    assert not surface.local_taylor(f, pt, 1, 0)
    assert surface.local_taylor(f, pt, 2, 0) == GEN.one
    assert mult_at(f, pt) == 2
    with pytest.raises(ZeroForm):
        surface.local_taylor(BiForm(1, 0, {}), pt, 0, 0)


def test_local_taylor_agrees_with_evaluation():
    Y2 = phi_iterate("y", 2, GEN)
    pt = orbit_point(2, GEN, "F")
    # order (0,0) is the (scaled) value of the form at the point
    v = surface.local_taylor(Y2, pt, 0, 0)
    assert bool(v) == bool(Y2.eval(pt))


def test_base_locus_generic():
    for m in (1, 2, 3):
        rep = surface.base_locus_check(m, GEN)
        assert rep["distinct"] and rep["transverse"] and rep["reduced"]
        assert rep["length"] == 2 * m
        assert len(rep["points"]) == 2 * m


def test_base_locus_specialized():
    spz = modes.specialized(2, 3)
    rep = surface.base_locus_check(2, spz)
    assert rep["transverse"] and rep["length"] == 4


def test_base_locus_collapsed_parameter():
    rep = surface.base_locus_check(1, TAU)
    assert rep["reduced"] and rep["length"] == 2
    rep = surface.base_locus_check(3, TAU)
    assert not rep["distinct"] and not rep["transverse"] and not rep["reduced"]
    assert rep["local_exponents"]["F"] == (1, 3)
    assert rep["length"] == 6


def test_base_locus_rejects_degree_zero():
    with pytest.raises(ValueError):
        surface.base_locus_check(0, GEN)
