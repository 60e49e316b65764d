"""Geometry on the quadric surface P1 x P1.

Coordinates come in two flavors:

* *square* coordinates ([x:y], [z:w]) -- the ones the algebra is written in;
* *round* coordinates ((a:b), (c:d)) related by [x:y] = [a+b : -a+b], in
  which the distinguished points and their orbits have simple closed forms.

The self-map phi is the composition of the shear sigma([x:y],[z:w]) =
([xz:yw],[z:w]) with the linear automorphism tau whose pullback is
x -> gamma*x + delta*y, y -> delta*x + gamma*y, z -> eps*z + zeta*w,
w -> zeta*z + eps*w.  Its pullback on forms is therefore the substitution

    x -> gamma*x*z + delta*y*w,   y -> delta*x*z + gamma*y*w,
    z -> eps*z + zeta*w,          w -> zeta*z + eps*w,

which sends bidegree (a, b) to (a, a+b).  This module implements forms,
that substitution and its iterates, the two backward orbits, vanishing
multiplicities at points, and the orbit-determinant certificate used to show
no small divisor class passes through many orbit points.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import (
    BadIndexList,
    CheckFailed,
    DegreeMismatch,
    UndefinedOrbitPoint,
    ZeroForm,
)
from .exact import MPoly, det_bareiss
from .modes import Mode

# ---------------------------------------------------------------------------
# bihomogeneous forms
# ---------------------------------------------------------------------------


class BiForm:
    """Bihomogeneous form of bidegree (a, b) in square coordinates.

    Stored sparsely as {(i, k): c} for the term c * x^i y^(a-i) z^k w^(b-k).
    Coefficients are duck-typed (Fraction or Scalar, from a Mode's domain);
    instances are immutable by convention.
    """

    __slots__ = ("a", "b", "coeffs")

    def __init__(self, a: int, b: int, coeffs: dict):
        if a < 0 or b < 0:
            raise ValueError(f"negative bidegree ({a}, {b})")
        self.a = a
        self.b = b
        clean = {}
        for (i, k), c in coeffs.items():
            if not (0 <= i <= a and 0 <= k <= b):
                raise ValueError(f"exponent ({i}, {k}) outside bidegree ({a}, {b})")
            if c:
                clean[(i, k)] = c
        self.coeffs = clean

    @property
    def bidegree(self) -> tuple[int, int]:
        return (self.a, self.b)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiForm):
            return NotImplemented
        return (
            self.a == other.a and self.b == other.b and self.coeffs == other.coeffs
        )

    def __add__(self, other: "BiForm") -> "BiForm":
        if not isinstance(other, BiForm):
            return NotImplemented
        if self.bidegree != other.bidegree:
            raise DegreeMismatch(
                f"cannot add bidegrees {self.bidegree} and {other.bidegree}"
            )
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            v = out.get(e)
            v = c if v is None else v + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        res = BiForm.__new__(BiForm)
        res.a, res.b, res.coeffs = self.a, self.b, out
        return res

    def __neg__(self) -> "BiForm":
        res = BiForm.__new__(BiForm)
        res.a, res.b = self.a, self.b
        res.coeffs = {e: -c for e, c in self.coeffs.items()}
        return res

    def __sub__(self, other: "BiForm") -> "BiForm":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, BiForm):
            # coefficient multiple
            res = BiForm.__new__(BiForm)
            res.a, res.b = self.a, self.b
            res.coeffs = {e: c * other for e, c in self.coeffs.items()} if other else {}
            return res
        out: dict = {}
        for (i1, k1), c1 in self.coeffs.items():
            for (i2, k2), c2 in other.coeffs.items():
                e = (i1 + i2, k1 + k2)
                v = out.get(e)
                v = c1 * c2 if v is None else v + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        res = BiForm.__new__(BiForm)
        res.a, res.b = self.a + other.a, self.b + other.b
        res.coeffs = out
        return res

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int) -> "BiForm":
        if n < 0:
            raise ValueError("negative power of a form")
        result = BiForm(0, 0, {(0, 0): 1})
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def eval(self, point: "SurfacePoint"):
        """Value at a point (square coordinates); homogeneous, so only the
        vanishing/nonvanishing and ratios of values are meaningful."""
        x, y, z, w = point.x, point.y, point.z, point.w
        total = None
        for (i, k), c in self.coeffs.items():
            v = c
            if i:
                v = v * x ** i
            if self.a - i:
                v = v * y ** (self.a - i)
            if k:
                v = v * z ** k
            if self.b - k:
                v = v * w ** (self.b - k)
            total = v if total is None else total + v
        if total is None:
            return 0 * (x + y + z + w)  # zero in the coefficient domain
        return total

    def __str__(self) -> str:
        if not self.coeffs:
            return f"0[{self.a},{self.b}]"
        bits = []
        for (i, k) in sorted(self.coeffs, reverse=True):
            c = self.coeffs[(i, k)]
            mono = "".join(
                f"{v}^{e}" if e > 1 else (v if e == 1 else "")
                for v, e in (
                    ("x", i), ("y", self.a - i), ("z", k), ("w", self.b - k)
                )
            )
            bits.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(bits)

    def __repr__(self) -> str:
        return f"BiForm({self.a},{self.b}: {self})"


def gen_x(mode: Mode) -> BiForm:
    return BiForm(1, 0, {(1, 0): mode.one})


def gen_y(mode: Mode) -> BiForm:
    return BiForm(1, 0, {(0, 0): mode.one})


def gen_z(mode: Mode) -> BiForm:
    return BiForm(0, 1, {(0, 1): mode.one})


def gen_w(mode: Mode) -> BiForm:
    return BiForm(0, 1, {(0, 0): mode.one})


# ---------------------------------------------------------------------------
# the pullback substitution and its iterates
# ---------------------------------------------------------------------------


def substitute(f: BiForm, X: BiForm, Y: BiForm, Z: BiForm, W: BiForm) -> BiForm:
    """Substitute forms for the four coordinates of f.

    X and Y must share a bidegree, as must Z and W; the result has bidegree
    a*deg(X) + b*deg(Z) where (a, b) = bidegree of f.
    """
    if X.bidegree != Y.bidegree or Z.bidegree != W.bidegree:
        raise DegreeMismatch("substitution images must come in equal-bidegree pairs")
    xp = [BiForm(0, 0, {(0, 0): 1})]
    yp = [xp[0]]
    zp = [xp[0]]
    wp = [xp[0]]
    for _ in range(f.a):
        xp.append(xp[-1] * X)
        yp.append(yp[-1] * Y)
    for _ in range(f.b):
        zp.append(zp[-1] * Z)
        wp.append(wp[-1] * W)
    ra = f.a * X.a + f.b * Z.a
    rb = f.a * X.b + f.b * Z.b
    total = BiForm(ra, rb, {})
    for (i, k), c in f.coeffs.items():
        term = xp[i] * yp[f.a - i] * zp[k] * wp[f.b - k]
        total = total + term * c
    return total


def phi_images(mode: Mode) -> tuple[BiForm, BiForm, BiForm, BiForm]:
    """The pullbacks of the four coordinates under phi."""
    g, d, e, zt = mode.gamma, mode.delta, mode.eps, mode.zeta
    X = BiForm(1, 1, {(1, 1): g, (0, 0): d})
    Y = BiForm(1, 1, {(1, 1): d, (0, 0): g})
    Z = BiForm(0, 1, {(0, 1): e, (0, 0): zt})
    W = BiForm(0, 1, {(0, 1): zt, (0, 0): e})
    return X, Y, Z, W


def phi_pullback(f: BiForm, mode: Mode) -> BiForm:
    """One application of the pullback substitution (raw, no cancellation)."""
    return substitute(f, *phi_images(mode))


@lru_cache(maxsize=None)
def phi_iterate(name: str, n: int, mode: Mode) -> BiForm:
    """n-fold pullback of a coordinate generator ('x', 'y', 'z' or 'w').

    Iterates are raw products of substitutions: no common factor is removed,
    so linear identities between iterates hold on the nose.  Bidegrees are
    (1, n) for 'x'/'y' and (0, 1) for 'z'/'w' (the second factor maps to
    itself under phi).
    """
    if n < 0:
        raise ValueError("negative iterate")
    if n == 0:
        return {"x": gen_x, "y": gen_y, "z": gen_z, "w": gen_w}[name](mode)
    return phi_pullback(phi_iterate(name, n - 1, mode), mode)


def curve_forms(n: int, mode: Mode) -> tuple[BiForm, BiForm, BiForm, BiForm]:
    """The pair of bidegree-(1, n) curves X_n, Y_n cutting out the degree-n
    base locus, together with the second-factor coordinates (which stay the
    coordinates z and w of the base of the fibration for every n)."""
    return (
        phi_iterate("x", n, mode),
        phi_iterate("y", n, mode),
        gen_z(mode),
        gen_w(mode),
    )


# ---------------------------------------------------------------------------
# content of the second-factor variables, and the public pullback operation
# ---------------------------------------------------------------------------


def _pstrip(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _pmod(p: list, q: list) -> list:
    """Remainder of univariate division over the coefficient field."""
    p = list(p)
    dq = len(q) - 1
    lq = q[-1]
    while len(p) - 1 >= dq and p:
        if not p[-1]:
            p.pop()
            continue
        f = p[-1] / lq
        shift = len(p) - 1 - dq
        for i, c in enumerate(q):
            p[shift + i] = p[shift + i] - f * c
        p.pop()
    return _pstrip(p)


def _pdivexact(p: list, q: list) -> list:
    """Exact univariate quotient over the coefficient field."""
    p = list(p)
    dq = len(q) - 1
    lq = q[-1]
    out = [None] * (len(p) - dq)
    while len(p) - 1 >= dq:
        if not p[-1]:
            if len(p) - 1 - dq >= 0 and out[len(p) - 1 - dq] is None:
                out[len(p) - 1 - dq] = 0 * lq
            p.pop()
            continue
        f = p[-1] / lq
        shift = len(p) - 1 - dq
        out[shift] = f
        for i, c in enumerate(q):
            p[shift + i] = p[shift + i] - f * c
        p.pop()
    if _pstrip(p):
        raise ValueError("univariate division was not exact")
    return [0 * lq if c is None else c for c in out]


def _gcd_field(p: list, q: list) -> list:
    p, q = _pstrip(list(p)), _pstrip(list(q))
    while q:
        p, q = q, _pmod(p, q)
    if p:
        lead = p[-1]
        p = [c / lead for c in p]
    return p


def zw_content(f: BiForm) -> tuple[BiForm, BiForm]:
    """Split f = content * reduced where the content is a form in (z, w) only
    (the gcd of the second-factor slices of f) and the reduced part has no
    such common factor.  Returns (content, reduced); content has bidegree
    (0, d) with d = 0 exactly when nothing cancels.
    """
    if f.is_zero():
        raise ZeroForm("content of the zero form is undefined")
    # slice by x-exponent: each slice is a binary form in (z, w)
    slices: dict[int, list] = {}
    for (i, k), c in f.coeffs.items():
        s = slices.setdefault(i, [0] * (f.b + 1))
        s[k] = c
    zmin = f.b
    wmin = f.b
    polys = []
    for s in slices.values():
        lo = next(j for j, c in enumerate(s) if c)
        hi = next(j for j in range(f.b, -1, -1) if s[j])
        zmin = min(zmin, lo)
        wmin = min(wmin, f.b - hi)
        polys.append((lo, [c for c in s[lo : hi + 1]]))
    g: list = []
    for _, p in polys:
        g = _gcd_field(g, p) if g else [c / p[-1] for c in p]
        if len(g) == 1:
            break
    dcontent = zmin + wmin + len(g) - 1
    content_coeffs = {(0, zmin + j): c for j, c in enumerate(g)}
    content = BiForm(0, dcontent, content_coeffs)
    if dcontent == 0:
        return content, f
    reduced_coeffs: dict = {}
    for i, s in slices.items():
        lo = next(j for j, c in enumerate(s) if c)
        hi = next(j for j in range(f.b, -1, -1) if s[j])
        quo = _pdivexact([c for c in s[lo : hi + 1]], g)
        for j, c in enumerate(quo):
            if c:
                reduced_coeffs[(i, lo - zmin + j)] = c
    reduced = BiForm(f.a, f.b - dcontent, reduced_coeffs)
    return content, reduced


def pullback_form(f: BiForm, n: int, mode: Mode) -> tuple[BiForm, BiForm]:
    """n-fold pullback of f, split into (reduced form, second-factor content).

    In generic mode a nontrivial content would contradict the stability of
    the construction, so it raises CheckFailed; at deliberately degenerate
    specializations the content is returned for inspection.
    """
    g = f
    for _ in range(n):
        g = phi_pullback(g, mode)
    content, reduced = zw_content(g)
    if mode.symbolic and content.b > 0:
        raise CheckFailed(
            f"pullback acquired a second-factor content of degree {content.b}"
        )
    return reduced, content


# ---------------------------------------------------------------------------
# points and orbits
# ---------------------------------------------------------------------------


class SurfacePoint:
    """Point of P1 x P1 in square coordinates (x : y), (z : w).

    Coordinates are duck-typed coefficients; each factor must be a valid
    projective point ((0 : 0) is rejected).
    """

    __slots__ = ("x", "y", "z", "w")

    def __init__(self, x, y, z, w):
        if not x and not y:
            raise UndefinedOrbitPoint("first factor degenerated to (0 : 0)")
        if not z and not w:
            raise UndefinedOrbitPoint("second factor degenerated to (0 : 0)")
        self.x, self.y, self.z, self.w = x, y, z, w

    @classmethod
    def from_round(cls, a, b, c, d) -> "SurfacePoint":
        return cls(a + b, b - a, c + d, d - c)

    def to_round(self):
        """Round coordinates ((a : b), (c : d)), up to scale."""
        return (self.x - self.y, self.x + self.y), (self.z - self.w, self.z + self.w)

    def swap(self) -> "SurfacePoint":
        """The involution x <-> y, z <-> w (in round coordinates it negates
        the first coordinate of each factor)."""
        return SurfacePoint(self.y, self.x, self.w, self.z)

    def proj_eq(self, other: "SurfacePoint") -> bool:
        return (
            not (self.x * other.y - self.y * other.x)
            and not (self.z * other.w - self.w * other.z)
        )

    def __repr__(self) -> str:
        return f"SurfacePoint({self.x} : {self.y}; {self.z} : {self.w})"


def phi_point(pt: SurfacePoint, mode: Mode) -> SurfacePoint:
    """Image of a point under phi, where defined.

    Raises UndefinedOrbitPoint at the two fundamental points (where both new
    first-factor coordinates vanish).
    """
    g, d, e, zt = mode.gamma, mode.delta, mode.eps, mode.zeta
    xz = pt.x * pt.z
    yw = pt.y * pt.w
    return SurfacePoint(
        g * xz + d * yw, d * xz + g * yw, e * pt.z + zt * pt.w, zt * pt.z + e * pt.w
    )


def base_point(mode: Mode, kind: str = "F") -> SurfacePoint:
    """The two fundamental points: F = ([0:1], [1:0]) and Q = ([1:0], [0:1])."""
    one, zero = mode.one, mode.zero
    if kind == "F":
        return SurfacePoint(zero, one, one, zero)
    if kind == "Q":
        return SurfacePoint(one, zero, zero, one)
    raise ValueError(f"unknown point kind {kind!r}")


def orbit_pq(n: int, mode: Mode):
    """The pair (p_n, q_n) of first-factor round coordinates of the n-th
    backward-orbit point, together with theta^n, via the recurrence

        p_0 = 1, q_0 = -1,
        p_{k+1} = rho*p_k - theta^(k+1)*q_k,
        q_{k+1} = q_k - rho*theta^(k+1)*p_k.
    """
    p, q = mode.one, -mode.one
    tp = mode.one
    for k in range(1, n + 1):
        tp = tp * mode.theta
        p, q = mode.rho * p - tp * q, q - mode.rho * tp * p
    return p, q, tp


def orbit_point(n: int, mode: Mode, kind: str = "F") -> SurfacePoint:
    """The n-th backward-orbit point F_n (or its mirror Q_n = swap(F_n)).

    These satisfy phi(F_{n+1}) = F_n wherever phi is defined; F_0 and Q_0 are
    the two fundamental points themselves.
    """
    p, q, tp = orbit_pq(n, mode)
    if not p and not q:
        raise UndefinedOrbitPoint(f"orbit recurrence degenerated at n={n}")
    pt = SurfacePoint.from_round(p, q, tp, mode.one)
    if kind == "F":
        return pt
    if kind == "Q":
        return pt.swap()
    raise ValueError(f"unknown point kind {kind!r}")


# ---------------------------------------------------------------------------
# multiplicity of a form at a point
# ---------------------------------------------------------------------------


def mult_at(f: BiForm, pt: SurfacePoint) -> int:
    """Vanishing multiplicity of f at a point: the lowest total degree in the
    local expansion around the point in an affine chart containing it.

    Multiplicities are additive under products of forms, which is how larger
    membership statements are assembled without expanding huge products.
    """
    if f.is_zero():
        raise ZeroForm("multiplicity of the zero form is undefined")
    # first factor chart: exponent e1(i) and local center u0
    if pt.y:
        e1 = lambda i: i
        u0 = pt.x / pt.y
    else:
        e1 = lambda i: f.a - i
        u0 = pt.y / pt.x
    if pt.w:
        e2 = lambda k: k
        v0 = pt.z / pt.w
    else:
        e2 = lambda k: f.b - k
        v0 = pt.w / pt.z
    entries = [(e1(i), e2(k), c) for (i, k), c in f.coeffs.items()]
    maxdeg = max(d1 + d2 for d1, d2, _ in entries)
    for t in range(maxdeg + 1):
        for da in range(t + 1):
            db = t - da
            acc = None
            for d1, d2, c in entries:
                if d1 < da or d2 < db:
                    continue
                v = c * math.comb(d1, da) * math.comb(d2, db)
                if d1 - da:
                    v = v * u0 ** (d1 - da)
                if d2 - db:
                    v = v * v0 ** (d2 - db)
                acc = v if acc is None else acc + v
            if acc:
                return t
    raise ZeroForm("form vanished identically in the chart")  # unreachable


def local_taylor(f: BiForm, pt: SurfacePoint, da: int, db: int):
    """Order-(da, db) Taylor coefficient of the dehomogenized form at a point.

    The chart per factor is picked by nonzero coordinate, exactly as in
    :func:`mult_at`; all forms of one bidegree share the chart and hence the
    (nonzero) scale, so vanishing and Jacobian-determinant tests are exact.
    """
    if f.is_zero():
        raise ZeroForm("Taylor coefficient of the zero form is undefined")
    if pt.y:
        e1 = lambda i: i
        u0 = pt.x / pt.y
    else:
        e1 = lambda i: f.a - i
        u0 = pt.y / pt.x
    if pt.w:
        e2 = lambda k: k
        v0 = pt.z / pt.w
    else:
        e2 = lambda k: f.b - k
        v0 = pt.w / pt.z
    acc = None
    for (i, k), c in f.coeffs.items():
        d1, d2 = e1(i), e2(k)
        if d1 < da or d2 < db:
            continue
        v = c * math.comb(d1, da) * math.comb(d2, db)
        if d1 - da:
            v = v * u0 ** (d1 - da)
        if d2 - db:
            v = v * v0 ** (d2 - db)
        acc = v if acc is None else acc + v
    if acc is None:
        acc = 0 * (pt.x + pt.y)  # zero in the coefficient domain
    return acc


# ---------------------------------------------------------------------------
# base-locus certificate for the curve pairs (X_m, Y_m)
# ---------------------------------------------------------------------------


def base_locus_check(m: int, mode: Mode) -> dict:
    """Certify the common-zero scheme of the bidegree-(1, m) curve pair.

    In symbolic and specialized modes the scheme consists of the 2m orbit
    points F_j, Q_j (j < m), pairwise distinct, with an invertible 2x2
    Jacobian at each -- so it is reduced of length 2m, accounting for the
    whole intersection number (1,m).(1,m) = 2m.  At the collapsed parameter
    point the two chains pile onto the fundamental points: the curves become
    the monomials x*z^m and y*w^m, the local ideal at either point is
    (a, b^m) in chart coordinates, and the length is still 2m (transversality
    genuinely fails once m >= 2).  Raises CheckFailed on the first violated
    clause.
    """
    if m < 1:
        raise ValueError("base-locus degree must be >= 1")
    X = phi_iterate("x", m, mode)
    Y = phi_iterate("y", m, mode)
    if X.bidegree != (1, m) or Y.bidegree != (1, m):
        raise CheckFailed("curve pair has drifted from bidegree (1, m)")
    if mode.is_tau_one:
        if set(X.coeffs) != {(1, m)}:
            raise CheckFailed("collapsed X-curve is not the monomial x*z^m")
        if set(Y.coeffs) != {(0, 0)}:
            raise CheckFailed("collapsed Y-curve is not the monomial y*w^m")
        return {
            "m": m,
            "points": ["F", "Q"],
            "distinct": m == 1,
            "transverse": m == 1,
            "reduced": m == 1,
            "local_exponents": {"F": (1, m), "Q": (1, m)},
            "length": 2 * m,
        }
    pts, labels = [], []
    for j in range(m):
        for fam in ("F", "Q"):
            pts.append(orbit_point(j, mode, fam))
            labels.append(f"{fam}{j}")
    for lab, pt in zip(labels, pts):
        if X.eval(pt) or Y.eval(pt):
            raise CheckFailed(f"curve pair does not vanish at {lab}")
    for i in range(len(pts)):
        for k in range(i + 1, len(pts)):
            if pts[i].proj_eq(pts[k]):
                raise CheckFailed(f"points {labels[i]} and {labels[k]} coincide")
    for lab, pt in zip(labels, pts):
        det = local_taylor(X, pt, 1, 0) * local_taylor(Y, pt, 0, 1) - local_taylor(
            X, pt, 0, 1
        ) * local_taylor(Y, pt, 1, 0)
        if not det:
            raise CheckFailed(f"intersection is not transverse at {lab}")
    return {
        "m": m,
        "points": labels,
        "distinct": True,
        "transverse": True,
        "reduced": True,
        "length": 2 * m,
    }


# ---------------------------------------------------------------------------
# orbit determinant certificate
# ---------------------------------------------------------------------------


def _round_monomials(m: int, s: int) -> list[tuple[int, int]]:
    """Bidegree (m, s) monomials a^k b^(m-k) c^l d^(s-l) listed with l
    descending, then k descending (the order in which the orbit determinant
    is lower-triangular-dominant)."""
    return [(k, l) for l in range(s, -1, -1) for k in range(m, -1, -1)]


def critdens_matrix(m: int, s: int, indices, mode: Mode):
    """Square matrix whose (i, j) entry is the i-th round monomial of
    bidegree (m, s) evaluated at the orbit point with index indices[j].

    A nonzero determinant certifies that no curve of that bidegree passes
    through all the chosen orbit points."""
    monos = _round_monomials(m, s)
    n_req = len(monos)
    idx = list(indices)
    if len(idx) != n_req or any(i < 0 for i in idx) or sorted(set(idx)) != idx:
        raise BadIndexList(
            f"need {n_req} distinct nonnegative indices in increasing order, got {indices}"
        )
    pts = [orbit_pq(n, mode) for n in idx]
    rows = []
    for (k, l) in monos:
        row = []
        for (p, q, tp) in pts:
            v = mode.one
            if k:
                v = v * p ** k
            if m - k:
                v = v * q ** (m - k)
            if l:
                v = v * tp ** l
            row.append(v)
        rows.append(row)
    return rows


def critdens_certificate(m: int, s: int, indices, mode: Mode) -> dict:
    """Exact determinant of the orbit matrix plus, in generic mode, the
    structural reason it cannot vanish: its lowest term when ordered by
    theta-degree then rho-degree equals the product of the diagonal entries'
    lowest terms (the identity pairing of monomials with orbit indices is the
    unique minimizer, so nothing can cancel it).
    """
    rows = critdens_matrix(m, s, indices, mode)
    out: dict = {"size": len(rows), "m": m, "s": s, "indices": list(indices)}
    if mode.symbolic:
        poly_rows = [[c.num if c.den.is_const() else None for c in row] for row in rows]
        if any(e is None for row in poly_rows for e in row):
            raise CheckFailed("orbit matrix entries should be polynomial")
        det = det_bareiss(poly_rows)
        out["det"] = det
        out["det_nonzero"] = not det.is_zero()
        if not det.is_zero():
            key = lambda e: (e[1], e[0])  # theta-degree first, then rho
            low = min(det.terms, key=key)
            exp_e = (0, 0)
            exp_c = Fraction(1)
            ok = True
            for i, row in enumerate(poly_rows):
                entry = row[i]
                if entry.is_zero():
                    ok = False
                    break
                le = min(entry.terms, key=key)
                exp_e = (exp_e[0] + le[0], exp_e[1] + le[1])
                exp_c *= entry.terms[le]
            out["lowest_term"] = (low, det.terms[low])
            out["diagonal_lowest_product"] = (exp_e, exp_c) if ok else None
            out["lowest_matches_diagonal"] = ok and low == exp_e and det.terms[low] == exp_c
        return out
    det = det_bareiss([[Fraction(c) for c in row] for row in rows])
    out["det"] = det.constant()
    out["det_nonzero"] = out["det"] != 0
    return out
