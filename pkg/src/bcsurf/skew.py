"""The graded algebra R inside a twisted Laurent extension of k(u, v).

Degree-one elements are c*t with c in the four-dimensional space
E = span(1, u, v, uv), where u = x/y and v = z/w are the affine coordinates
of the two factors.  Multiplication twists coefficients by the pullback of
phi: (c1 t)(c2 t) = c1 * (c2 o phi) * t^2, so the i-th letter of a length-n
word formed at *level* m is composed with phi^(m+i-1).  Levels arise from
shifted modules and from multiplying on the right of an existing degree-m
element.

A length-n word at level m has a canonical numerator of bidegree
(n, n*m + n(n+1)/2): the product of the per-letter numerator forms

    N_j(c) = alpha*Y_j*W_j + beta*X_j*W_j + gamma*Y_j*Z_j + delta*X_j*Z_j,

for c = alpha + beta*u + gamma*v + delta*uv, where X_j, ..., W_j are the
j-fold pullbacks of the coordinates, over the common denominator
prod_j Y_j W_j.  All span and rank computations happen on numerator
coefficient vectors:

* tau-one mode: words are monomials in (u, v), so spans are literal monomial
  sets and every dimension is exact by counting;
* generic/specialized modes: coefficients are reduced at integer sample
  points modulo a large prime, which certifies exact *lower* bounds (a
  nonzero minor lifts); upper bounds come from structure (free-algebra
  relation counts, fat-point membership) and the two are checked to meet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import (
    CertificationError,
    CheckFailed,
    DenominatorVanishes,
    RelationFailed,
)
from .exact import PRIMES, ModpEchelon, Scalar, modp_rank, rank_and_kernel
from .modes import Mode
from .surface import BiForm, phi_iterate, phi_images, substitute

R_NAMES = ("r1", "r2", "r3", "r4")
Z_NAMES = ("z1", "z2", "z3", "z4", "z5", "z6", "z7", "z8", "z9", "z10")


def dim_formula(n: int) -> int:
    """Expected dimension of the degree-n piece: C(n+3, 3)."""
    return math.comb(n + 3, 3)


def piece_bidegree(n: int, m: int) -> tuple[int, int]:
    """Bidegree of numerators of length-n words at level m."""
    return (n, n * m + n * (n + 1) // 2)


# ---------------------------------------------------------------------------
# letters
# ---------------------------------------------------------------------------


def letter_vectors(mode: Mode) -> dict:
    """Coefficient vectors (alpha, beta, gamma, delta) on (1, u, v, uv) of the
    four generators r1 = t, r2 = u t, r3 = v t, r4 = uv t and of the ten
    distinguished degree-one elements z1..z10 used by the resolution."""
    o, n = mode.one, mode.zero
    g, d, e, z = mode.gamma, mode.delta, mode.eps, mode.zeta
    return {
        "r1": (o, n, n, n),
        "r2": (n, o, n, n),
        "r3": (n, n, o, n),
        "r4": (n, n, n, o),
        "z1": (z, n, -e, n),           # (zeta - eps*v) t
        "z2": (e, n, -z, n),           # (eps - zeta*v) t
        "z3": (n, z, n, -e),           # u*(zeta - eps*v) t
        "z4": (n, e, n, -z),           # (eps*u - zeta*u*v) t
        "z5": (d, -g, n, n),           # (delta - gamma*u) t
        "z6": (g, -d, n, n),           # (gamma - delta*u) t
        "z7": (n, n, d, -g),           # (delta*v - gamma*u*v) t
        "z8": (n, n, g, -d),           # (gamma*v - delta*u*v) t
        "z9": (-d * e, g * e, d * z, -g * z),   # (gamma*u - delta)(eps - zeta*v) t
        "z10": (g * z, -d * z, -g * e, d * e),  # (delta*u - gamma)(eps*v - zeta) t
    }


@lru_cache(maxsize=None)
def _phi_iterate_f(name: str, n: int, mode: Mode, flipped: bool) -> BiForm:
    """phi-iterates, optionally for the sign-flipped constants
    (gamma, -delta, eps, -zeta) which present the opposite ring."""
    if not flipped:
        return phi_iterate(name, n, mode)
    if n == 0:
        return phi_iterate(name, 0, mode)
    g, d, e, z = mode.gamma, -mode.delta, mode.eps, -mode.zeta
    X = BiForm(1, 1, {(1, 1): g, (0, 0): d})
    Y = BiForm(1, 1, {(1, 1): d, (0, 0): g})
    Z = BiForm(0, 1, {(0, 1): e, (0, 0): z})
    W = BiForm(0, 1, {(0, 1): z, (0, 0): e})
    return substitute(_phi_iterate_f(name, n - 1, mode, flipped), X, Y, Z, W)


def e_numerator(vec, level: int, mode: Mode, flipped: bool = False) -> BiForm:
    """Numerator form N_level(c) of the coefficient c with vector vec."""
    X = _phi_iterate_f("x", level, mode, flipped)
    Y = _phi_iterate_f("y", level, mode, flipped)
    Z = _phi_iterate_f("z", level, mode, flipped)
    W = _phi_iterate_f("w", level, mode, flipped)
    alpha, beta, gamma, delta = vec
    total = None
    for c, f1, f2 in ((alpha, Y, W), (beta, X, W), (gamma, Y, Z), (delta, X, Z)):
        if not c:
            continue
        term = (f1 * f2) * c
        total = term if total is None else total + term
    if total is None:
        return BiForm(1, level + 1, {})
    return total


@lru_cache(maxsize=None)
def letter_numerator(name: str, level: int, mode: Mode, flipped: bool = False) -> BiForm:
    return e_numerator(letter_vectors(mode)[name], level, mode, flipped)


def word_form(word, m: int, mode: Mode) -> BiForm:
    """Symbolic numerator of a word (tuple of letter names) at level m.
    Intended for short words; long products should go through a
    :class:`SampleContext`."""
    n = len(word)
    total = BiForm(0, 0, {(0, 0): mode.one})
    for i, name in enumerate(word):
        total = total * letter_numerator(name, m + i, mode)
    D = piece_bidegree(n, m)
    assert (total.a, total.b) == D or total.is_zero()
    return total


# ---------------------------------------------------------------------------
# relations
# ---------------------------------------------------------------------------

# Each relation is a sum of two 2-letter products, sum_i (left_i * right_i).
# The first six are the defining relations of the algebra (z1..z8 are linear
# combinations of r1..r4, so these are quadratic in the generators); the
# remaining six are two-term identities among the z-elements: exactly the
# entries of the resolution's matrix composites.
RELATIONS: tuple = (
    ("f1", (("r1", "z1"), ("r3", "z2"))),
    ("f2", (("r1", "z3"), ("r3", "z4"))),
    ("f3", (("r2", "z1"), ("r4", "z2"))),
    ("f4", (("r2", "z3"), ("r4", "z4"))),
    ("f5", (("r1", "z5"), ("r4", "z6"))),
    ("f6", (("r1", "z7"), ("r4", "z8"))),
    ("g1", (("z5", "z1"), ("z7", "z2"))),
    ("g2", (("z5", "z3"), ("z7", "z4"))),
    ("g3", (("z6", "z1"), ("z8", "z2"))),
    ("g4", (("z6", "z3"), ("z8", "z4"))),
    ("g7", (("z1", "z9"), ("z3", "z10"))),
    ("g8", (("z2", "z9"), ("z4", "z10"))),
)

# Two-term pairings with z9, z10 as LEFT factors do NOT vanish: the map
# (f, g) |-> z9*(f t) + z10*(g t) is injective on E^2 (full rank 8), so no
# such identity exists for any choice of right factors.  z9 and z10 admit
# only the right-sided identities g7, g8 above.  These two combinations are
# kept as negative controls: their residuals staying nonzero guards against
# a silent flip of the twist convention in the product code.
NEGATIVE_CONTROLS: tuple = (
    ("g5", (("z9", "z1"), ("z10", "z2"))),
    ("g6", (("z9", "z3"), ("z10", "z4"))),
)

DEFINING = tuple(name for name, _ in RELATIONS[:6])

_ALL_PAIRINGS = dict(RELATIONS + NEGATIVE_CONTROLS)


def relation_residual(name: str, mode: Mode, level: int = 0) -> BiForm:
    """The numerator form of the relation at the given level (zero iff the
    relation holds there)."""
    pairs = _ALL_PAIRINGS[name]
    total = None
    for left, right in pairs:
        term = letter_numerator(left, level, mode) * letter_numerator(
            right, level + 1, mode
        )
        total = term if total is None else total + term
    return total


def verify_relations(mode: Mode, levels=(0, 1), names=None) -> dict:
    """Check the named relations symbolically at the given levels (default:
    all twelve identities).  Returns {name: True}; raises RelationFailed on
    the first failure."""
    if names is None:
        names = [name for name, _ in RELATIONS]
    out = {}
    for i, name in enumerate(names):
        for level in levels:
            res = relation_residual(name, mode, level)
            if not res.is_zero():
                raise RelationFailed(i, f"relation {name} fails at level {level}")
        out[name] = True
    return out


def negative_control_report(mode: Mode, level: int = 0) -> dict:
    """Expand the non-identities and confirm their residuals are nonzero.
    Returns {name: term count of the residual}; raises CheckFailed if one of
    them unexpectedly vanishes (which would indicate the product convention
    has drifted)."""
    out = {}
    for name, _ in NEGATIVE_CONTROLS:
        res = relation_residual(name, mode, level)
        if res.is_zero():
            raise CheckFailed(
                f"negative control {name} vanished; twist convention drifted"
            )
        out[name] = len(res.coeffs)
    return out


def z_elements(mode: Mode):
    """The ten distinguished degree-one elements as coefficient vectors on
    the basis (1, u, v, uv), after verifying every two-term identity in
    RELATIONS and confirming the two NEGATIVE_CONTROLS do not vanish."""
    verify_relations(mode, levels=(0,))
    negative_control_report(mode)
    vecs = letter_vectors(mode)
    return [vecs[name] for name in Z_NAMES]


def relation_vector16(name: str, mode: Mode) -> list:
    """The defining relation as an element of the degree-2 part of the free
    algebra on r1..r4: a 16-vector of coefficients indexed by ordered pairs
    (left, right) of generators.  Only the six defining relations are
    quadratic in the generators."""
    if name not in DEFINING:
        raise ValueError(f"{name} is not one of the defining relations")
    pairs = _ALL_PAIRINGS[name]
    vecs = letter_vectors(mode)
    out = [mode.zero] * 16
    for left, right in pairs:
        a = R_NAMES.index(left)
        rv = vecs[right]
        for b in range(4):
            if rv[b]:
                out[4 * a + b] = out[4 * a + b] + rv[b]
    return out


# ---------------------------------------------------------------------------
# tau-one monomial computations
# ---------------------------------------------------------------------------

# at tau-one, phi^j sends u -> u v^j and fixes v, so the generator r with
# u-v exponents (du, dv) appends (du, dv + du*level) to a monomial
_R_EXP = {"r1": (0, 0), "r2": (1, 0), "r3": (0, 1), "r4": (1, 1)}


def tau_one_monomials(n: int, m: int = 0) -> set[tuple[int, int]]:
    """Exact monomial support of the degree-n piece at level m in tau-one
    mode: the set of (i, j) with u^i v^j t^n in the piece."""
    cur = {(0, 0)}
    for step in range(n):
        level = m + step
        nxt = set()
        for (i, j) in cur:
            for (du, dv) in _R_EXP.values():
                nxt.add((i + du, j + dv + du * level))
        cur = nxt
    return cur


def tau_one_word_monomial(word, m: int = 0) -> tuple[int, int]:
    i = j = 0
    for step, name in enumerate(word):
        du, dv = _R_EXP[name]
        i, j = i + du, j + dv + du * (m + step)
    return (i, j)


def monomial_product(m1: tuple[int, int], a: int, m2: tuple[int, int]) -> tuple[int, int]:
    """(u^i v^j t^a) * (u^k v^l t^b) = u^(i+k) v^(j+l+k*a) t^(a+b):
    the right factor's u-exponent picks up a twisted v-power."""
    (i, j), (k, l) = m1, m2
    return (i + k, j + l + k * a)


# ---------------------------------------------------------------------------
# sampled (mod-p) computation context
# ---------------------------------------------------------------------------


class SampleContext:
    """All mod-p data for one evaluation sample of a mode.

    For the generic mode the sample is an integer point (rho0, theta0) and a
    prime; for tau-one/specialized modes the coefficients are already
    rational and only the prime matters.  Everything computed from a sample
    yields sound lower bounds on symbolic ranks.
    """

    def __init__(self, mode: Mode, point, p: int, flipped: bool = False):
        self.mode = mode
        self.point = point
        self.p = p
        self.flipped = flipped
        self._letters: dict = {}
        self._pieces: dict = {}

    # -- forms mod p, as {(i, k): residue} dicts --------------------------------

    def _coeff_mod(self, c) -> int:
        p = self.p
        if isinstance(c, Fraction):
            v = c.numerator % p
            if c.denominator != 1:
                v = v * pow(c.denominator % p, p - 2, p) % p
            return v
        if isinstance(c, Scalar):
            return c.eval_mod(self.point, p)
        raise TypeError(f"unexpected coefficient type {type(c).__name__}")

    def form_fp(self, f: BiForm) -> dict:
        return {e: v for e, v in ((e, self._coeff_mod(c)) for e, c in f.coeffs.items()) if v}

    def letter_fp(self, name: str, level: int) -> dict:
        key = (name, level)
        got = self._letters.get(key)
        if got is None:
            got = self.form_fp(
                letter_numerator(name, level, self.mode, self.flipped)
            )
            self._letters[key] = got
        return got

    def mul_fp(self, f1: dict, f2: dict) -> dict:
        p = self.p
        out: dict = {}
        for (i1, k1), c1 in f1.items():
            for (i2, k2), c2 in f2.items():
                e = (i1 + i2, k1 + k2)
                v = (out.get(e, 0) + c1 * c2) % p
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return out

    def vector(self, fp: dict, n: int, m: int) -> np.ndarray:
        """Dense coefficient vector over the monomial support of the (n, m)
        piece's bidegree."""
        a, b = piece_bidegree(n, m)
        vec = np.zeros((a + 1) * (b + 1), dtype=np.int64)
        for (i, k), c in fp.items():
            vec[i * (b + 1) + k] = c
        return vec

    # -- the degree-n piece at level m ------------------------------------------

    def piece(self, n: int, m: int = 0):
        """(dimension lower bound, independent words, their fp forms).

        Built inductively: the span of length-(k+1) words is generated by
        (basis of length-k span) * (each generator at level m+k); an
        incremental echelon keeps exactly the products that grow the rank.
        Words kept independent mod p are independent over the function field.
        """
        key = (n, m)
        got = self._pieces.get(key)
        if got is not None:
            return got
        words: list[tuple] = [()]
        fps: list[dict] = [{(0, 0): 1}]
        for k in range(n):
            level = m + k
            a, b = piece_bidegree(k + 1, m)
            ech = ModpEchelon((a + 1) * (b + 1), self.p)
            new_words: list[tuple] = []
            new_fps: list[dict] = []
            for word, fp in zip(words, fps):
                for name in R_NAMES:
                    prod = self.mul_fp(fp, self.letter_fp(name, level))
                    if not prod:
                        continue
                    if ech.add_row(self.vector(prod, k + 1, m)):
                        new_words.append(word + (name,))
                        new_fps.append(prod)
            words, fps = new_words, new_fps
        got = (len(words), words, fps)
        self._pieces[key] = got
        return got

    def image_rank(self, fps: list[dict], names: list[str], level: int,
                   n_out: int, m_out: int) -> int:
        """Rank of span{ f * letter : f in fps, letter in names } inside the
        (n_out, m_out) piece's ambient space."""
        ech = ModpEchelon(_ambient_dim(n_out, m_out), self.p)
        for fp in fps:
            for name in names:
                prod = self.mul_fp(fp, self.letter_fp(name, level))
                ech.add_row(self.vector(prod, n_out, m_out))
        return ech.rank

    def concat_image_rank(self, fps: list[dict], names: list[str], level: int,
                          n_out: int, m_out: int) -> int:
        """Rank of the map f -> (f*letter_1, ..., f*letter_s): rows are the
        concatenated images, one row per f."""
        width = _ambient_dim(n_out, m_out)
        ech = ModpEchelon(width * len(names), self.p)
        for fp in fps:
            row = np.concatenate(
                [
                    self.vector(self.mul_fp(fp, self.letter_fp(nm, level)), n_out, m_out)
                    for nm in names
                ]
            )
            ech.add_row(row)
        return ech.rank


def _ambient_dim(n: int, m: int) -> int:
    a, b = piece_bidegree(n, m)
    return (a + 1) * (b + 1)


def sample_contexts(mode: Mode, samples: int = 2, flipped: bool = False) -> list[SampleContext]:
    """Up to ``samples`` usable evaluation samples for the mode (each sample
    is checked to not kill the degree-one letter denominators)."""
    out = []
    for point in mode.cert_points():
        ctx = None
        for p in PRIMES:
            cand = SampleContext(mode, point, p, flipped)
            try:
                for name in R_NAMES:
                    cand.letter_fp(name, 0)
                    cand.letter_fp(name, 1)
            except (DenominatorVanishes, ZeroDivisionError):
                continue
            ctx = cand
            break
        if ctx is not None:
            out.append(ctx)
            if len(out) >= samples:
                break
    if not out:
        raise CertificationError("no usable evaluation sample for this mode")
    return out


# ---------------------------------------------------------------------------
# graded pieces and dimensions
# ---------------------------------------------------------------------------


@dataclass
class GradedPiece:
    """Result of a degree-n span computation at level m.

    ``dim`` is exact in tau-one mode (monomial counting); otherwise it is a
    certified lower bound (the best over the samples) and ``exact`` records
    whether a structural upper bound confirmed it elsewhere."""

    n: int
    m: int
    dim: int
    exact: bool
    words: list = field(default_factory=list)
    sample_dims: list = field(default_factory=list)

    @property
    def expected(self) -> int:
        return dim_formula(self.n)


def graded_piece(n: int, m: int, mode: Mode, samples: int = 2,
                 flipped: bool = False) -> GradedPiece:
    if mode.is_tau_one and not flipped:
        monos = tau_one_monomials(n, m)
        return GradedPiece(n, m, len(monos), True, sorted(monos), [len(monos)])
    ctxs = sample_contexts(mode, samples, flipped)
    best_dim = -1
    best_words: list = []
    dims = []
    for ctx in ctxs:
        d, words, _ = ctx.piece(n, m)
        dims.append(d)
        if d > best_dim:
            best_dim, best_words = d, words
    return GradedPiece(n, m, best_dim, False, best_words, dims)


def piece_dims(max_n: int, mode: Mode, m: int = 0, samples: int = 2) -> list[GradedPiece]:
    """Graded pieces for n = 0..max_n, sharing samples across degrees."""
    if mode.is_tau_one:
        return [graded_piece(n, m, mode) for n in range(max_n + 1)]
    ctxs = sample_contexts(mode, samples)
    out = []
    for n in range(max_n + 1):
        best_dim = -1
        best_words: list = []
        dims = []
        for ctx in ctxs:
            d, words, _ = ctx.piece(n, m)
            dims.append(d)
            if d > best_dim:
                best_dim, best_words = d, words
        out.append(GradedPiece(n, m, best_dim, False, best_words, dims))
    return out


# ---------------------------------------------------------------------------
# the quadratic presentation
# ---------------------------------------------------------------------------


def presentation_certificate(mode: Mode, max_degree: int = 4, samples: int = 2) -> dict:
    """Certify that the six defining relations are independent and present
    the algebra up to the requested degree.

    For each degree d the free algebra on the four generators has dimension
    4^d; the span of the shifted relations u * f_i * v (|u| + |v| = d - 2)
    sits inside the kernel of (free algebra -> R).  A mod-p lower bound s_d
    on that span's rank gives dim R_d <= 4^d - s_d, while the word-span
    echelon gives dim R_d >= its count.  When both meet C(d+3, 3) the
    dimension is exact *and* the relations generate every relation in degree
    d.  Raises CertificationError if the bounds fail to meet.
    """
    verify_relations(mode)
    rel_vecs = [relation_vector16(name, mode) for name in DEFINING]
    rk2, _ = rank_and_kernel([[_to_scalar(c) for c in v] for v in rel_vecs])
    out = {
        "defining_count": len(rel_vecs),
        "defining_rank": rk2,
        "degrees": {},
    }
    if rk2 != 6:
        raise CertificationError(f"defining relations have rank {rk2}, expected 6")
    ctxs = sample_contexts(mode, samples)
    for d in range(2, max_degree + 1):
        piece = graded_piece(d, 0, mode, samples=samples)
        dim_lower = piece.dim
        expected = dim_formula(d)
        span_target = 4 ** d - expected
        span_lower = 0
        for ctx in ctxs:
            vecs = [[_entry(c, ctx) for c in v] for v in rel_vecs]
            rows = []
            width = 4 ** d
            for v in vecs:
                for pre in range(d - 1):
                    post = d - 2 - pre
                    for uw in range(4 ** pre):
                        for vw in range(4 ** post):
                            row = np.zeros(width, dtype=np.int64)
                            base = uw * (16 * 4 ** post)
                            for idx, c in enumerate(v):
                                if c:
                                    row[base + idx * 4 ** post + vw] = c
                            rows.append(row)
            span_lower = max(span_lower, modp_rank(np.array(rows), ctx.p))
            if span_lower >= span_target:
                break
        closes = dim_lower == expected and span_lower == span_target
        out["degrees"][d] = {
            "expected_dim": expected,
            "dim_lower": dim_lower,
            "relation_span_target": span_target,
            "relation_span_lower": span_lower,
            "closes": closes,
        }
        if not closes:
            raise CertificationError(
                f"presentation bounds did not meet in degree {d}: "
                f"dim {dim_lower}/{expected}, span {span_lower}/{span_target}"
            )
    return out


def _to_scalar(c):
    if isinstance(c, Scalar):
        return c
    return Scalar.const(c)


def _entry(c, ctx: SampleContext) -> int:
    return ctx._coeff_mod(c if not isinstance(c, int) else Fraction(c))


# ---------------------------------------------------------------------------
# tau-one syzygies
# ---------------------------------------------------------------------------


def _tau_one_pair_map(pair, side: str, d: int):
    """Matrix of (a, b) -> ell1*a + ell2*b (right syzygies) or a*ell1 + b*ell2
    (left syzygies) from A_d + A_d to A_{d+1} in monomial bases, over Q.

    Returns (rows, cols, matrix, domain monomial list)."""
    dom = sorted(tau_one_monomials(d))
    cod = sorted(tau_one_monomials(d + 1))
    cod_index = {mono: i for i, mono in enumerate(cod)}
    mat = [[Fraction(0)] * (2 * len(dom)) for _ in cod]
    for slot, name in enumerate(pair):
        le = _R_EXP[name]
        for j, mono in enumerate(dom):
            if side == "right":
                img = monomial_product(le, 1, mono)
            elif side == "left":
                img = monomial_product(mono, d, le)
            else:
                raise ValueError(f"side must be 'left' or 'right', not {side!r}")
            mat[cod_index[img]][slot * len(dom) + j] += 1
    return mat, dom


def syzygy_kernel(pair, side: str, d: int):
    """Exact kernel of the tau-one two-generator map in degree d.

    Returns (kernel dimension, kernel basis as vectors over the doubled
    monomial basis of A_d, domain monomial list)."""
    mat, dom = _tau_one_pair_map(pair, side, d)
    rank, basis = rank_and_kernel(mat, ncols=2 * len(dom))
    return 2 * len(dom) - rank, basis, dom


def _predicted_span_rank(gens, side: str, d: int, dom) -> tuple[int, list]:
    """Rank of the span of predicted syzygies { (g*m, h*m) : m in A_{d-1} }
    (right side; mirrored for left), as vectors over A_d + A_d."""
    dom_index = {mono: i for i, mono in enumerate(dom)}
    rows = []
    for g_pair in gens:
        for mono in sorted(tau_one_monomials(d - 1)):
            row = [Fraction(0)] * (2 * len(dom))
            for slot, (name, sign) in enumerate(g_pair):
                le = _R_EXP[name]
                if side == "right":
                    # syzygy entries multiply the pair on the right: a = g*m
                    img = monomial_product(le, 1, mono)
                else:
                    # left syzygies: a = m*g
                    img = monomial_product(mono, d - 1, le)
                row[slot * len(dom) + dom_index[img]] += sign
            rows.append(row)
    rank, _ = rank_and_kernel(rows, ncols=2 * len(dom))
    return rank, rows


SYZYGY_CLAIMS = (
    # (pairs sharing the same syzygies, side, predicted generators)
    ((("r1", "r2"), ("r3", "r4")), "right", ((("r2", 1), ("r3", -1)),)),
    ((("r1", "r3"), ("r2", "r4")), "right",
     ((("r3", 1), ("r1", -1)), (("r4", 1), ("r2", -1)))),
    ((("r1", "r2"), ("r3", "r4")), "left", ((("r4", 1), ("r1", -1)),)),
    ((("r1", "r3"),), "left", ((("r3", 1), ("r1", -1)), (("r4", 1), ("r2", -1)))),
)


def syzygy_certificate(max_degree: int = 3) -> dict:
    """Verify, in tau-one mode, that the kernels of the two-generator maps
    match their predicted module generators degree by degree: the predicted
    vectors lie in the kernel, and their span has the kernel's dimension."""
    out: dict = {}
    for pairs, side, gens in SYZYGY_CLAIMS:
        for d in range(1, max_degree + 1):
            dims = []
            for pair in pairs:
                kdim, _, dom = syzygy_kernel(pair, side, d)
                prank, rows = _predicted_span_rank(gens, side, d, dom)
                # predicted vectors must be killed by the map
                mat, _ = _tau_one_pair_map(pair, side, d)
                for row in rows:
                    for out_row in mat:
                        s = sum(a * b for a, b in zip(out_row, row))
                        if s:
                            raise CertificationError(
                                f"predicted syzygy of {pair} ({side}) fails in degree {d}"
                            )
                if kdim != prank:
                    raise CertificationError(
                        f"syzygies of {pair} ({side}, degree {d}): kernel {kdim} "
                        f"!= predicted span {prank}"
                    )
                dims.append(kdim)
            out[(pairs, side, d)] = dims[0]
            if len(set(dims)) != 1:
                raise CertificationError(f"paired kernels differ: {pairs} {side} {d}")
    return out


# ---------------------------------------------------------------------------
# the non-noetherian witness (tau-one)
# ---------------------------------------------------------------------------


def witness_certificate(max_n: int = 4) -> dict:
    """Check that w_n = u v^(2n-1) t^n lies in the degree-n piece but not in
    sum_{0 < k < n} w_k * A_{n-k}, for n = 2..max_n -- so the right ideal
    generated by the w's needs a new generator in every degree.

    Everything is monomial at tau-one, so membership is literal set
    membership."""
    out = {}
    for n in range(1, max_n + 1):
        wn = (1, 2 * n - 1)
        piece = tau_one_monomials(n)
        in_ring = wn in piece
        reachable = set()
        for k in range(1, n):
            wk = (1, 2 * k - 1)
            for mono in tau_one_monomials(n - k, m=k):
                reachable.add(monomial_product(wk, k, mono))
        out[n] = {
            "witness": wn,
            "in_ring": in_ring,
            "in_smaller_ideal": wn in reachable,
        }
        if not in_ring or (n > 1 and wn in reachable):
            raise CertificationError(f"witness certificate failed at n={n}")
    return out


# ---------------------------------------------------------------------------
# opposite-ring dimension check
# ---------------------------------------------------------------------------


def opposite_dims_check(max_n: int, mode: Mode, samples: int = 2) -> dict:
    """Dimension lower bounds of the sign-flipped-constants algebra (which
    presents the opposite ring) against the straight ones."""
    straight = piece_dims(max_n, mode, samples=samples)
    if mode.is_tau_one:
        flky = [graded_piece(n, 0, mode, samples, flipped=True) for n in range(max_n + 1)]
    else:
        ctxs = sample_contexts(mode, samples, flipped=True)
        flky = []
        for n in range(max_n + 1):
            dims = [ctx.piece(n, 0)[0] for ctx in ctxs]
            flky.append(GradedPiece(n, 0, max(dims), False, [], dims))
    return {
        n: {"dim": straight[n].dim, "opposite_dim": flky[n].dim,
            "match": straight[n].dim == flky[n].dim}
        for n in range(max_n + 1)
    }
