"""Fat-point linear systems on the quadric: condition ranks and section counts.

The degree-n piece of the twisted ring sits inside the space of bidegree
(n, k) forms, k = n*m + C(n+1, 2), as the subspace vanishing on a fixed
fat-point scheme supported on the two backward orbits: multiplicity
min(n, n+m-1-j) at F_j and Q_j for 0 <= j <= n+m-2.  This module

* builds those schemes and their multiplicity-condition matrices,
* certifies the rank of the stacked conditions (modular sampling gives a
  sound lower bound; it is exact whenever it meets the trivial upper bound
  min(#conditions, #coefficients), with a symbolic fallback otherwise),
* derives h0/h1 of the twisted sheaves by exactness bookkeeping on the
  ambient line bundle (refusing twists whose ambient cohomology interferes),
* certifies that every ring basis form actually satisfies the conditions, so
  the ring piece *is* the section space, and
* handles the collapsed parameter point, where the orbit piles onto the two
  fundamental points and the sheaves instead acquire explicit monomial
  bases (a staircase region per u-exponent, and a four-chart intersection
  computation of the section space).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    AmbientCohomology,
    CertificationError,
    CheckFailed,
    DenominatorVanishes,
    GuardError,
    NoChart,
)
from .exact import PRIMES, modp_matrix, modp_rank, rank_and_kernel
from .modes import Mode
from .skew import (
    dim_formula,
    graded_piece,
    letter_numerator,
    piece_bidegree,
    tau_one_monomials,
    word_form,
)
from .surface import SurfacePoint, mult_at, orbit_point, phi_iterate

# ---------------------------------------------------------------------------
# fat-point schemes on the backward orbits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FatPointScheme:
    """A finite list of fat points: (point, multiplicity) pairs with labels.

    The length of the scheme is the number of linear conditions it imposes
    when all conditions are independent: sum of C(mult+1, 2).
    """

    points: tuple
    labels: tuple = ()

    def __post_init__(self):
        if any(mu < 1 for _, mu in self.points):
            raise CheckFailed("fat-point multiplicities must be >= 1")
        if not self.labels:
            object.__setattr__(
                self, "labels", tuple(f"pt{i}" for i in range(len(self.points)))
            )
        if len(self.labels) != len(self.points):
            raise CheckFailed("one label per fat point")

    @property
    def length(self) -> int:
        return sum(math.comb(mu + 1, 2) for _, mu in self.points)


def scheme_multiplicity(n: int, m: int, j: int) -> int:
    """Multiplicity imposed at the j-th orbit point (either family)."""
    return min(n, n + m - 1 - j)


def scheme_length_formula(n: int, m: int) -> int:
    """Closed form for the total length: 2(m*C(n+1,2) + C(n+1,3))."""
    return 2 * (m * math.comb(n + 1, 2) + math.comb(n + 1, 3))


def fat_point_scheme(n: int, m: int, mode: Mode) -> FatPointScheme:
    """The degree-n level-m base scheme on the two backward orbits.

    Places multiplicity min(n, n+m-1-j) at F_j and Q_j for 0 <= j <= n+m-2.
    Requires a mode where the orbit points are pairwise distinct; at the
    collapsed parameter point the orbit degenerates and the monomial route
    (:func:`a_monomial_basis`, :func:`a_h0_h1`) must be used instead.
    """
    if mode.is_tau_one:
        raise GuardError(
            "orbit points collapse at the collapsed parameter point; "
            "use the monomial basis route"
        )
    if n < 1:
        raise ValueError("fat-point scheme needs degree n >= 1")
    pts, labels = [], []
    for j in range(n + m - 1):
        mu = scheme_multiplicity(n, m, j)
        for fam in ("F", "Q"):
            pts.append((orbit_point(j, mode, fam), mu))
            labels.append(f"{fam}{j}")
    for i in range(len(pts)):
        for k in range(i + 1, len(pts)):
            if pts[i][0].proj_eq(pts[k][0]):
                raise GuardError(
                    f"orbit points {labels[i]} and {labels[k]} coincide at "
                    f"this specialization"
                )
    scheme = FatPointScheme(tuple(pts), tuple(labels))
    if scheme.length != scheme_length_formula(n, m):
        raise CheckFailed(
            f"scheme length {scheme.length} != closed form "
            f"{scheme_length_formula(n, m)}"
        )
    return scheme


# ---------------------------------------------------------------------------
# multiplicity-condition matrices
# ---------------------------------------------------------------------------
#
# A condition of order (al, be) at a point P is the vanishing of the mixed
# Taylor coefficient of that order of the dehomogenized form at P, in the
# chart (per factor) where some coordinate of P is nonzero.  Written on the
# coefficients of the bidegree-(A, B) monomial x^i y^(A-i) z^k w^(B-k), and
# cleared of denominators by the (nonzero) scale y0^(A-al) * w0^(B-be), the
# entry in column (i, k) is
#
#     perm(e1, al) * c1^(e1-al) * h1^(A-e1)
#   * perm(e2, be) * c2^(e2-be) * h2^(B-e2)
#
# where e1 = i, (c1, h1) = (x0, y0) in the y-chart (and e1 = A-i with the
# roles swapped in the x-chart), likewise for the second factor, and
# perm(e, a) = e!/(e-a)! kills monomials of local degree < order.


def _chart(pt: SurfacePoint):
    """Per-factor chart data (flip, affine coordinate, unit coordinate)."""
    if pt.y:
        first = (False, pt.x, pt.y)
    elif pt.x:
        first = (True, pt.y, pt.x)
    else:
        raise NoChart("first factor has no nonzero coordinate")
    if pt.w:
        second = (False, pt.z, pt.w)
    elif pt.z:
        second = (True, pt.w, pt.z)
    else:
        raise NoChart("second factor has no nonzero coordinate")
    return first, second


def _functionals(mu: int) -> list[tuple[int, int]]:
    """The C(mu+1, 2) orders (al, be) with al + be < mu, listed by total
    order then increasing be."""
    return [(o - be, be) for o in range(mu) for be in range(o + 1)]


def _modp_rows(scheme: FatPointScheme, bidegree, coords: np.ndarray, p: int):
    """Integer condition rows mod p from pre-reduced point coordinates."""
    A, B = bidegree
    rows = []
    for r, (pt, mu) in enumerate(scheme.points):
        (flip1, _, _), (flip2, _, _) = _chart(pt)
        x0, y0, z0, w0 = (int(c) % p for c in coords[r])
        c1, h1 = (y0, x0) if flip1 else (x0, y0)
        c2, h2 = (w0, z0) if flip2 else (z0, w0)
        pc1 = [1] * (A + 1)
        ph1 = [1] * (A + 1)
        pc2 = [1] * (B + 1)
        ph2 = [1] * (B + 1)
        for e in range(1, A + 1):
            pc1[e] = pc1[e - 1] * c1 % p
            ph1[e] = ph1[e - 1] * h1 % p
        for e in range(1, B + 1):
            pc2[e] = pc2[e - 1] * c2 % p
            ph2[e] = ph2[e - 1] * h2 % p
        for al, be in _functionals(mu):
            row = []
            for i in range(A + 1):
                e1 = A - i if flip1 else i
                if e1 < al:
                    row.extend([0] * (B + 1))
                    continue
                f1 = math.perm(e1, al) * pc1[e1 - al] % p * ph1[A - e1] % p
                for k in range(B + 1):
                    e2 = B - k if flip2 else k
                    if e2 < be:
                        row.append(0)
                    else:
                        row.append(
                            f1 * math.perm(e2, be) % p * pc2[e2 - be] % p
                            * ph2[B - e2] % p
                        )
            rows.append(row)
    return rows


def condition_rows(scheme: FatPointScheme, bidegree, mode: Mode) -> list[list]:
    """Exact (coefficient-field) condition rows, columns ordered by (i, k)."""
    A, B = bidegree
    one = mode.one
    rows = []
    for pt, mu in scheme.points:
        (flip1, c1, h1), (flip2, c2, h2) = _chart(pt)
        pc1, ph1 = [one], [one]
        pc2, ph2 = [one], [one]
        for e in range(A):
            pc1.append(pc1[-1] * c1)
            ph1.append(ph1[-1] * h1)
        for e in range(B):
            pc2.append(pc2[-1] * c2)
            ph2.append(ph2[-1] * h2)
        for al, be in _functionals(mu):
            row = []
            for i in range(A + 1):
                e1 = A - i if flip1 else i
                for k in range(B + 1):
                    e2 = B - k if flip2 else k
                    if e1 < al or e2 < be:
                        row.append(mode.zero)
                    else:
                        row.append(
                            math.perm(e1, al) * math.perm(e2, be)
                            * pc1[e1 - al] * ph1[A - e1]
                            * pc2[e2 - be] * ph2[B - e2]
                        )
            rows.append(row)
    return rows


def condition_rank(scheme: FatPointScheme, bidegree, mode: Mode,
                   samples: int = 2) -> int:
    """Rank of the stacked multiplicity conditions on bidegree-(A, B) forms.

    Modular evaluation gives a sound lower bound; whenever it meets the
    trivial upper bound min(length, (A+1)(B+1)) the rank is certified exact
    with no symbolic work.  A deficient matrix falls back to an exact
    symbolic rank (self-verifying elimination), so the returned value is
    always the true rank -- rank deficiencies are reported, not assumed away.
    """
    A, B = bidegree
    if A < 0 or B < 0:
        raise ValueError("condition matrices need a nonnegative bidegree")
    if not scheme.points:
        return 0
    ncols = (A + 1) * (B + 1)
    upper = min(scheme.length, ncols)
    coord_rows = [[pt.x, pt.y, pt.z, pt.w] for pt, _ in scheme.points]
    best, used = 0, 0
    for point in mode.cert_points():
        hit = False
        for p in PRIMES:
            try:
                coords = modp_matrix(coord_rows, point, p)
            except DenominatorVanishes:
                continue
            rows = _modp_rows(scheme, (A, B), coords, p)
            best = max(best, modp_rank(np.array(rows, dtype=np.int64), p))
            hit = True
            break
        if hit:
            used += 1
            if best == upper or used >= samples:
                break
    if best == upper:
        return best
    if used == 0:
        raise CertificationError("no admissible evaluation point for the rank")
    rank, _ = rank_and_kernel(condition_rows(scheme, (A, B), mode))
    return rank


# ---------------------------------------------------------------------------
# section counts of the twisted sheaves
# ---------------------------------------------------------------------------


def h0_h1(n: int, m: int, a: int, b: int, mode: Mode) -> tuple[int, int]:
    """(h0, h1) of the degree-n level-m sheaf twisted by (a, b).

    The sheaf is the ambient line bundle of bidegree (n+a, k+b) cut down by
    the fat-point conditions, k = n*m + C(n+1, 2).  With both ambient
    degrees nonnegative the ambient has no higher cohomology, so

        h0 = (n+a+1)(k+b+1) - rank,      h1 = length - rank

    by exactness bookkeeping.  Twists violating the precondition raise
    AmbientCohomology: counting there needs the fiberwise machinery instead,
    and a silently wrong h1 would poison everything downstream.  For the
    untwisted sheaf the result is asserted to be (C(n+3,3), 0).
    """
    k = n * m + math.comb(n + 1, 2)
    A, B = n + a, k + b
    if A < 0 or B < 0:
        raise AmbientCohomology(
            f"ambient bidegree ({A}, {B}) has higher cohomology; "
            "use the fiberwise route"
        )
    scheme = fat_point_scheme(n, m, mode)
    rank = condition_rank(scheme, (A, B), mode)
    h0 = (A + 1) * (B + 1) - rank
    h1 = scheme.length - rank
    if (a, b) == (0, 0) and (h0, h1) != (dim_formula(n), 0):
        raise CheckFailed(
            f"untwisted section count ({h0}, {h1}) != ({dim_formula(n)}, 0) "
            f"at (n, m) = ({n}, {m})"
        )
    return h0, h1


# Each generator letter's numerator at level l is the l-fold pullback of a
# product of two coordinates, so its vanishing multiplicity at a point is the
# sum of the two (small) coordinate-pullback multiplicities.
_LETTER_COORDS = {
    "r1": ("y", "w"),
    "r2": ("x", "w"),
    "r3": ("y", "z"),
    "r4": ("x", "z"),
}


@lru_cache(maxsize=None)
def _coord_mult(coord: str, level: int, j: int, fam: str, mode: Mode) -> int:
    return mult_at(phi_iterate(coord, level, mode), orbit_point(j, mode, fam))


@lru_cache(maxsize=None)
def _letter_factorization_ok(level: int, mode: Mode) -> bool:
    """Certify letter numerator == product of its two coordinate pullbacks."""
    for name, (c1, c2) in _LETTER_COORDS.items():
        prod = phi_iterate(c1, level, mode) * phi_iterate(c2, level, mode)
        if letter_numerator(name, level, mode) != prod:
            raise CheckFailed(
                f"letter {name} at level {level} is not the coordinate product"
            )
    return True


def sections_equal_ring(n: int, m: int, mode: Mode, samples: int = 2) -> dict:
    """Certify that the ring piece equals the section space at (n, m).

    Containment: every basis word of the graded piece is a product of letter
    numerators, each letter a product of two coordinate pullbacks, and
    vanishing multiplicities add along products of forms; so the word
    satisfies the order-mu conditions at a point as soon as its factors'
    multiplicities there sum to mu.  The factorization is certified exactly
    per level, and the factor table realizes exactly the required
    multiplicities; if a sum ever fell short, the word would be expanded and
    checked directly (exact local Taylor expansion) before failing.
    Equality: the certified dimension of the piece must meet h0.
    """
    if mode.is_tau_one:
        raise GuardError(
            "the collapsed parameter point uses the monomial route; "
            "section spaces are compared via a_monomial_basis/a_h0_h1"
        )
    gp = graded_piece(n, m, mode, samples=samples)
    scheme = fat_point_scheme(n, m, mode)
    for level in range(m, m + n):
        _letter_factorization_ok(level, mode)
    fams = [lab[0] for lab in scheme.labels]
    js = [int(lab[1:]) for lab in scheme.labels]

    def lmult(name: str, level: int, idx: int) -> int:
        c1, c2 = _LETTER_COORDS[name]
        return _coord_mult(c1, level, js[idx], fams[idx], mode) + _coord_mult(
            c2, level, js[idx], fams[idx], mode
        )

    expanded = 0
    for word in gp.words:
        for idx, (pt, mu) in enumerate(scheme.points):
            total = sum(lmult(name, m + i, idx) for i, name in enumerate(word))
            if total < mu:
                expanded += 1
                if mult_at(word_form(word, m, mode), pt) < mu:
                    raise CheckFailed(
                        f"basis word {'*'.join(word)} violates the order-{mu} "
                        f"conditions at {scheme.labels[idx]}"
                    )
    h0, h1 = h0_h1(n, m, 0, 0, mode)
    if gp.dim > h0:
        raise CheckFailed(
            f"ring piece dimension {gp.dim} exceeds section count {h0}"
        )
    if gp.dim < h0:
        raise CertificationError(
            f"ring piece dimension only certified >= {gp.dim} < h0 = {h0}"
        )
    return {
        "n": n,
        "m": m,
        "dim": gp.dim,
        "h0": h0,
        "h1": h1,
        "rows": len(gp.words),
        "conditions": scheme.length,
        "points": list(scheme.labels),
        "expanded_words": expanded,
    }


# ---------------------------------------------------------------------------
# the collapsed parameter point: explicit monomial bases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonomialRegion:
    """Staircase monomial region: for each u-exponent i = 0..n a j-interval
    [lo, hi] of v-exponents; the monomials u^i v^j fill the region."""

    n: int
    m: int
    rows: tuple

    def __post_init__(self):
        if len(self.rows) != self.n + 1:
            raise CheckFailed("one j-interval per u-exponent 0..n")
        for lo, hi in self.rows:
            if lo > hi:
                raise CheckFailed("empty j-interval in a monomial region")

    @property
    def size(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.rows)

    def monomials(self) -> set[tuple[int, int]]:
        return {
            (i, j)
            for i, (lo, hi) in enumerate(self.rows)
            for j in range(lo, hi + 1)
        }


def region_bounds(n: int, m: int, i: int) -> tuple[int, int]:
    """Closed-form j-interval of the degree-n level-m region at u-exponent i:
    [i*m + C(i,2), i*m + C(n+1,2) - C(n-i,2)]."""
    return (
        i * m + math.comb(i, 2),
        i * m + math.comb(n + 1, 2) - math.comb(n - i, 2),
    )


def a_monomial_basis(n: int, m: int = 0) -> MonomialRegion:
    """Monomial basis of the degree-n level-m piece at the collapsed
    parameter point, as a staircase region; cross-checked against the direct
    product enumeration of the n letter spans."""
    region = MonomialRegion(
        n, m, tuple(region_bounds(n, m, i) for i in range(n + 1))
    )
    if region.size != dim_formula(n):
        raise CheckFailed(
            f"region size {region.size} != {dim_formula(n)} at ({n}, {m})"
        )
    if region.monomials() != tau_one_monomials(n, m):
        raise CheckFailed(
            f"staircase region differs from the product enumeration at ({n}, {m})"
        )
    return region


def a_h0_h1(n: int, m: int = 0) -> tuple[int, int]:
    """(h0, h1) of the collapsed-parameter sheaf via its four chart spans.

    Sections over the four affine charts are the quadrant closures of the
    monomial set W (up/down per factor); global sections are their
    intersection, which must equal W itself.  h1 then comes from the
    Euler-characteristic identity

        h0 - (n+1)(k+1) + 2(m*C(n+1,2) + C(n+1,3)) = h1

    (the ambient count minus the scheme length), and both are asserted to be
    (C(n+3,3), 0).
    """
    W = tau_one_monomials(n, m)
    k = piece_bidegree(n, m)[1]
    box = [(i, j) for i in range(n + 1) for j in range(k + 1)]
    up_up = {c for c in box if any(p <= c[0] and q <= c[1] for p, q in W)}
    up_dn = {c for c in box if any(p <= c[0] and q >= c[1] for p, q in W)}
    dn_up = {c for c in box if any(p >= c[0] and q <= c[1] for p, q in W)}
    dn_dn = {c for c in box if any(p >= c[0] and q >= c[1] for p, q in W)}
    sections = up_up & up_dn & dn_up & dn_dn
    if sections != W:
        raise CheckFailed(
            f"four-chart intersection differs from the monomial span at ({n}, {m})"
        )
    h0 = len(sections)
    h1 = h0 - (n + 1) * (k + 1) + scheme_length_formula(n, m)
    if (h0, h1) != (dim_formula(n), 0):
        raise CheckFailed(
            f"collapsed-parameter counts ({h0}, {h1}) != ({dim_formula(n)}, 0)"
        )
    return h0, h1
