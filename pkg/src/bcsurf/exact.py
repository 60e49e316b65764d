"""Exact arithmetic kernel.

Everything downstream computes with coefficients that are either rational
numbers or rational functions in the two parameters ``rho`` and ``theta``.
This module supplies the two carriers

* :class:`MPoly`  -- sparse multivariate polynomials over Q, and
* :class:`Scalar` -- reduced fractions of MPoly, i.e. the field Q(rho, theta),

together with the linear algebra used to certify ranks exactly:

* :func:`rank_and_kernel` / :func:`det_bareiss` -- fraction-free Bareiss
  elimination.  Every division performed is exact, so results carry no
  rounding error by construction.
* :func:`modp_matrix`, :func:`modp_rank`, :class:`ModpEchelon`,
  :func:`rank_lower_bound` -- fast modular evaluation.  A nonzero r x r minor
  of a matrix evaluated at an integer point mod p lifts to a nonzero
  polynomial minor, hence certifies rank >= r over the function field.  Lower
  bounds obtained this way are exact statements, not heuristics; upper bounds
  must always come from structure (row counts, membership arguments).

No floating point is used anywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import CertificationError, DenominatorVanishes

# default variable names for the parameter field Q(rho, theta)
RT = ("rho", "theta")

# primes below 2**31 so that numpy int64 products (p-1)**2 cannot overflow
PRIMES = (2147483647, 998244353, 1000000007)

# integer evaluation points (rho0, theta0) used for rank certification;
# each avoids 0 and +-1 and small multiplicative relations between the two
CERT_POINTS = ((2, 3), (3, 5), (5, 2), (-2, 5), (7, 3))


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


def _inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 is not invertible mod {p}")
    return pow(a, p - 2, p)


# ---------------------------------------------------------------------------
# sparse multivariate polynomials over Q
# ---------------------------------------------------------------------------


class MPoly:
    """Sparse multivariate polynomial over Q.

    ``terms`` maps exponent tuples to nonzero Fractions; ``vars`` carries the
    variable names so polynomials from different rings cannot mix silently.
    Instances are immutable by convention: no method mutates ``terms`` after
    construction.  The monomial order used for leading terms is graded lex
    with the first variable heaviest.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, terms=None, vars: tuple[str, ...] = RT):
        self.vars = tuple(vars)
        width = len(self.vars)
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exps, c in terms.items():
                c = _frac(c)
                if not c:
                    continue
                exps = tuple(int(e) for e in exps)
                if len(exps) != width or any(e < 0 for e in exps):
                    raise ValueError(f"bad exponent tuple {exps} for vars {self.vars}")
                clean[exps] = c
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, vars: tuple[str, ...] = RT) -> "MPoly":
        return cls({}, vars)

    @classmethod
    def const(cls, c, vars: tuple[str, ...] = RT) -> "MPoly":
        c = _frac(c)
        if not c:
            return cls({}, vars)
        return cls({(0,) * len(vars): c}, vars)

    @classmethod
    def var(cls, name: str, vars: tuple[str, ...] = RT) -> "MPoly":
        i = vars.index(name)
        e = [0] * len(vars)
        e[i] = 1
        return cls({tuple(e): Fraction(1)}, vars)

    # -- predicates and simple accessors -------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant(self) -> Fraction:
        """Value of a constant polynomial (raises on nonconstant input)."""
        if not self.terms:
            return Fraction(0)
        if not self.is_const():
            raise ValueError(f"not a constant: {self}")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        """Degree in the i-th variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def coeff(self, exps: tuple[int, ...]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def subs_var(self, name: str, value) -> "MPoly":
        """Substitute a Fraction for one variable, keeping the others
        symbolic (the variable tuple is unchanged; its exponent becomes 0)."""
        i = self.vars.index(name)
        value = _frac(value)
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            scaled = c * value ** exps[i]
            if not scaled:
                continue
            key = exps[:i] + (0,) + exps[i + 1 :]
            got = out.get(key)
            tot = scaled if got is None else got + scaled
            if tot:
                out[key] = tot
            elif got is not None:
                del out[key]
        return MPoly(out, self.vars)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other, self.vars)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def _check(self, other: "MPoly") -> None:
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other, self.vars)
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        res = MPoly.__new__(MPoly)
        res.vars = self.vars
        res.terms = out
        return res

    __radd__ = __add__

    def __neg__(self):
        res = MPoly.__new__(MPoly)
        res.vars = self.vars
        res.terms = {e: -c for e, c in self.terms.items()}
        return res

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other, self.vars)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            if not c:
                return MPoly.zero(self.vars)
            res = MPoly.__new__(MPoly)
            res.vars = self.vars
            res.terms = {e: q * c for e, q in self.terms.items()}
            return res
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                v = c1 * c2 if v is None else v + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        res = MPoly.__new__(MPoly)
        res.vars = self.vars
        res.terms = out
        return res

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- evaluation -----------------------------------------------------------

    def eval(self, point: Sequence) -> Fraction:
        """Evaluate at a point given as a sequence of ints/Fractions."""
        pt = [_frac(x) for x in point]
        total = Fraction(0)
        for exps, c in self.terms.items():
            v = c
            for x, e in zip(pt, exps):
                if e:
                    v *= x ** e
            total += v
        return total

    def eval_mod(self, point: Sequence[int], p: int) -> int:
        """Evaluate at an integer point, reduced mod the prime p."""
        total = 0
        for exps, c in self.terms.items():
            v = c.numerator % p
            if c.denominator != 1:
                v = v * _inv_mod(c.denominator, p) % p
            for x, e in zip(point, exps):
                if e:
                    v = v * pow(x % p, e, p) % p
            total = (total + v) % p
        return total

    # -- term order helpers ---------------------------------------------------

    @staticmethod
    def _grlex_key(exps: tuple[int, ...]):
        return (sum(exps), exps)

    def leading(self) -> tuple[tuple[int, ...], Fraction]:
        """(exponents, coefficient) of the largest term under graded lex."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=MPoly._grlex_key)
        return e, self.terms[e]

    def lowest_lex(self) -> tuple[tuple[int, ...], Fraction]:
        """(exponents, coefficient) of the smallest term under plain lex
        (first variable heaviest)."""
        if not self.terms:
            raise ValueError("zero polynomial has no terms")
        e = min(self.terms)
        return e, self.terms[e]

    def icontent_primitive(self) -> tuple[Fraction, "MPoly"]:
        """Write self = c * P where P has coprime integer coefficients and a
        positive leading coefficient.  Returns (c, P); zero gives (0, 0)."""
        if not self.terms:
            return Fraction(0), self
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = math.gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
        c = Fraction(num_gcd, den_lcm)
        if self.leading()[1] < 0:
            c = -c
        prim = MPoly.__new__(MPoly)
        prim.vars = self.vars
        prim.terms = {e: q / c for e, q in self.terms.items()}
        return c, prim

    # -- printing -------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, key=MPoly._grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            if mono:
                if c == 1:
                    bits.append(mono)
                elif c == -1:
                    bits.append(f"-{mono}")
                else:
                    bits.append(f"{c}*{mono}")
            else:
                bits.append(str(c))
        return " + ".join(bits).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"MPoly({self})"


def _mono(vars: tuple[str, ...], i: int, d: int) -> MPoly:
    e = [0] * len(vars)
    e[i] = d
    return MPoly({tuple(e): Fraction(1)}, vars)


# ---------------------------------------------------------------------------
# polynomial gcd / exact division
# ---------------------------------------------------------------------------


def divide_exact(a: MPoly, b: MPoly) -> MPoly:
    """Exact quotient a / b in Q[vars]; raises ValueError if b does not
    divide a.

    Greedy leading-term division: when b | a, the leading term of b divides
    the leading term of every intermediate remainder, so the loop ends with
    remainder zero precisely in the divisible case.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return MPoly.zero(a.vars)
    a._check(b)
    if b.is_const():
        return a * (Fraction(1) / b.constant())
    eb, cb = b.leading()
    cur = dict(a.terms)
    out: dict[tuple[int, ...], Fraction] = {}
    while cur:
        ea = max(cur, key=MPoly._grlex_key)
        ca = cur[ea]
        eq = tuple(x - y for x, y in zip(ea, eb))
        if any(e < 0 for e in eq):
            raise ValueError(f"({b}) does not divide ({a})")
        cq = ca / cb
        out[eq] = cq
        for e2, c2 in b.terms.items():
            e = tuple(x + y for x, y in zip(eq, e2))
            v = cur.get(e, Fraction(0)) - cq * c2
            if v:
                cur[e] = v
            else:
                cur.pop(e, None)
    return MPoly(out, a.vars)


def _univar_coeffs(a: MPoly, k: int) -> dict[int, MPoly]:
    """View a as a univariate polynomial in variable k: degree -> coefficient
    (the coefficients are polynomials in the remaining variables)."""
    split: dict[int, dict] = {}
    for e, c in a.terms.items():
        rest = e[:k] + (0,) + e[k + 1 :]
        split.setdefault(e[k], {})[rest] = c
    return {d: MPoly(t, a.vars) for d, t in split.items()}


def _lead_coeff_in(a: MPoly, k: int) -> MPoly:
    d = a.degree_in(k)
    out = {
        e[:k] + (0,) + e[k + 1 :]: c for e, c in a.terms.items() if e[k] == d
    }
    return MPoly(out, a.vars)


def _cont_prim(a: MPoly, k: int) -> tuple[MPoly, MPoly]:
    """Split a = cont * prim with cont free of variable k and prim primitive
    (content 1) as a polynomial in variable k."""
    coeffs = _univar_coeffs(a, k)
    cont = MPoly.zero(a.vars)
    for d in sorted(coeffs):
        cont = poly_gcd(cont, coeffs[d])
        if cont.is_const() and not cont.is_zero():
            break
    if cont.is_const():
        return MPoly.const(1, a.vars), a
    return cont, divide_exact(a, cont)


def _prem(f: MPoly, g: MPoly, k: int) -> MPoly:
    """Pseudo-remainder of f by g viewed as univariate polynomials in
    variable k, up to a nonzero rational factor.

    Each pass multiplies by the leading coefficient of g and then strips the
    integer content again: scaling commutes with the passes, and the one
    caller only tests the result for zero and takes its primitive part, so
    the rescaling is invisible while keeping coefficients near the sizes the
    subresultant bounds allow instead of letting them compound."""
    dg = g.degree_in(k)
    lg = _lead_coeff_in(g, k)
    r = f
    while not r.is_zero():
        dr = r.degree_in(k)
        if dr < dg:
            break
        lr = _lead_coeff_in(r, k)
        r = (lg * r - lr * _mono(f.vars, k, dr - dg) * g).icontent_primitive()[1]
    return r


_GCD_SUBST = (3, 5, 7, 11, -2, 9)


def _frac_mod(c: Fraction, p: int) -> int | None:
    den = c.denominator % p
    if den == 0:
        return None
    return c.numerator % p * pow(den, p - 2, p) % p


def _uni_image(a: MPoly, k: int, vals: Sequence[int], p: int) -> list[int] | None:
    """Dense coefficient list of the image of a in F_p[x_k] under the
    substitution x_j -> vals[j] for j != k; None if a denominator dies."""
    out: dict[int, int] = {}
    for e, c in a.terms.items():
        v = _frac_mod(c, p)
        if v is None:
            return None
        for j, ej in enumerate(e):
            if j != k and ej:
                v = v * pow(vals[j] % p, ej, p) % p
        out[e[k]] = (out.get(e[k], 0) + v) % p
    coeffs = [out.get(d, 0) for d in range(max(out) + 1)] if out else []
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _uni_gcd_degree(f: list[int], g: list[int], p: int) -> int:
    """Degree of gcd(f, g) over F_p (degree -1 for the zero polynomial)."""
    f, g = list(f), list(g)
    while g:
        inv = pow(g[-1], p - 2, p)
        while len(f) >= len(g):
            coef = f[-1] * inv % p
            off = len(f) - len(g)
            for i in range(len(g)):
                f[off + i] = (f[off + i] - coef * g[i]) % p
            while f and f[-1] == 0:
                f.pop()
            if not f:
                break
        f, g = g, f
    return len(f) - 1


def _certified_coprime(pa: MPoly, pb: MPoly, k: int) -> bool:
    """True only with proof that pa and pb (primitive in variable k) are
    coprime: a substitution of the other variables that keeps both leading
    coefficients in x_k nonzero maps any common divisor to a common divisor
    of the same x_k-degree, so a coprime image in F_p[x_k] certifies a
    trivial gcd.  Returning False means nothing was learned."""
    la, lb = _lead_coeff_in(pa, k), _lead_coeff_in(pb, k)
    nvars = len(pa.vars)
    for s in range(3):
        vals = tuple(
            _GCD_SUBST[(s + j) % len(_GCD_SUBST)] for j in range(nvars)
        )
        for p in PRIMES[:2]:
            fa = _uni_image(pa, k, vals, p)
            fb = _uni_image(pb, k, vals, p)
            la_img = _uni_image(la, k, vals, p)
            lb_img = _uni_image(lb, k, vals, p)
            if None in (fa, fb, la_img, lb_img) or not la_img or not lb_img:
                continue
            if _uni_gcd_degree(fa, fb, p) == 0:
                return True
            break
    return False


def poly_gcd(a: MPoly, b: MPoly) -> MPoly:
    """Gcd in Q[vars], normalized to coprime integer coefficients with a
    positive leading coefficient (so the result is a canonical representative
    of the gcd up to units).

    Classical primitive pseudo-remainder sequence in the lowest-index
    variable that occurs, recursing on the remaining variables for contents;
    a modular image certifying coprimality short-circuits the sequence in
    the common trivial-gcd case.
    """
    a._check(b)
    if a.is_zero() and b.is_zero():
        return MPoly.zero(a.vars)
    if a.is_zero():
        return b.icontent_primitive()[1]
    if b.is_zero():
        return a.icontent_primitive()[1]
    if a.is_const() or b.is_const():
        return MPoly.const(1, a.vars)
    used = [
        i
        for i in range(len(a.vars))
        if a.degree_in(i) > 0 or b.degree_in(i) > 0
    ]
    if not used:
        return MPoly.const(1, a.vars)
    if all(_certified_coprime(a, b, j) for j in used):
        # degree 0 in every occurring variable forces a constant gcd, with
        # no need to split off contents first
        return MPoly.const(1, a.vars)
    k = used[0]
    ca, pa = _cont_prim(a, k)
    cb, pb = _cont_prim(b, k)
    cg = poly_gcd(ca, cb)
    if _certified_coprime(pa, pb, k):
        return cg.icontent_primitive()[1]
    f, g = (pa, pb) if pa.degree_in(k) >= pb.degree_in(k) else (pb, pa)
    while True:
        if g.is_zero():
            prim = f
            break
        if g.degree_in(k) == 0:
            prim = MPoly.const(1, a.vars)
            break
        r = _prem(f, g, k)
        if r.is_zero():
            prim = g
            break
        f, g = g, _cont_prim(r, k)[1]
    return (cg * prim).icontent_primitive()[1]


def poly_lcm(a: MPoly, b: MPoly) -> MPoly:
    """Lcm in Q[vars], normalized like :func:`poly_gcd`."""
    if a.is_zero() or b.is_zero():
        return MPoly.zero(a.vars)
    g = poly_gcd(a, b)
    return divide_exact(a * b, g).icontent_primitive()[1]


# ---------------------------------------------------------------------------
# the fraction field Q(rho, theta)
# ---------------------------------------------------------------------------


class Scalar:
    """Element of the fraction field Q(vars), in reduced canonical form.

    Invariants: den != 0, gcd(num, den) = 1, den has coprime integer
    coefficients with positive leading coefficient, and zero is 0/1.  Since
    the representation is canonical, == is plain structural equality.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced: bool = False):
        if not isinstance(num, MPoly):
            num = MPoly.const(num)
        if den is None:
            den = MPoly.const(1, num.vars)
        elif not isinstance(den, MPoly):
            den = MPoly.const(den, num.vars)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("scalar with zero denominator")
        if num.is_zero():
            self.num = num
            self.den = MPoly.const(1, num.vars)
            return
        if not _reduced:
            if den.is_const():
                c = den.constant()
                if c != 1:
                    num = num * (Fraction(1) / c)
                den = MPoly.const(1, num.vars)
            else:
                g = poly_gcd(num, den)
                if not g.is_const():
                    num = divide_exact(num, g)
                    den = divide_exact(den, g)
                c, den = den.icontent_primitive()
                if c != 1:
                    num = num * (Fraction(1) / c)
        self.num = num
        self.den = den

    # -- constructors ---------------------------------------------------------

    @classmethod
    def const(cls, c, vars: tuple[str, ...] = RT) -> "Scalar":
        return cls(MPoly.const(c, vars))

    @classmethod
    def var(cls, name: str, vars: tuple[str, ...] = RT) -> "Scalar":
        return cls(MPoly.var(name, vars))

    # -- predicates -------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.den.is_const() and self.num.is_const() and self.num.constant() == 1

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other) -> bool:
        other = _as_scalar(other, self.num.vars)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        other = _as_scalar(other, self.num.vars)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self.num, self.den, other.num, other.den
        if b == d:
            return Scalar(a + c, b)
        g0 = poly_gcd(b, d)
        if g0.is_const():
            # gcd(ad + cb, bd) = 1 automatically, and a product of primitive
            # positive-leading denominators is again primitive positive-leading
            return Scalar(a * d + c * b, b * d, _reduced=True)
        b1 = divide_exact(b, g0)
        d1 = divide_exact(d, g0)
        num = a * d1 + c * b1
        den = b * d1
        g1 = poly_gcd(num, g0)
        if not g1.is_const():
            num = divide_exact(num, g1)
            den = divide_exact(den, g1)
        return Scalar(num, den, _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        out = Scalar.__new__(Scalar)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other):
        other = _as_scalar(other, self.num.vars)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_scalar(other, self.num.vars)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self.num, self.den, other.num, other.den
        if a.is_zero() or c.is_zero():
            return Scalar(MPoly.zero(a.vars))
        g1 = poly_gcd(a, d)
        g2 = poly_gcd(c, b)
        if not g1.is_const():
            a = divide_exact(a, g1)
            d = divide_exact(d, g1)
        if not g2.is_const():
            c = divide_exact(c, g2)
            b = divide_exact(b, g2)
        return Scalar(a * c, b * d, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar(self.den, self.num)

    def __truediv__(self, other):
        other = _as_scalar(other, self.num.vars)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _as_scalar(other, self.num.vars)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        # num^n / den^n stays reduced: gcd(num, den) = 1 and powers of
        # primitive positive-leading polynomials keep both properties
        return Scalar(self.num ** n, self.den ** n, _reduced=True)

    # -- evaluation ---------------------------------------------------------------

    def specialize(self, point: Sequence) -> Fraction:
        """Evaluate at a point with Fraction coordinates; raises
        DenominatorVanishes if the denominator is zero there."""
        d = self.den.eval(point)
        if d == 0:
            raise DenominatorVanishes(f"denominator {self.den} vanishes at {tuple(point)}")
        return self.num.eval(point) / d

    def specialize_partial(self, assignments: dict) -> "Scalar":
        """Substitute Fractions for a subset of the variables, staying in the
        fraction field; raises DenominatorVanishes if the denominator becomes
        zero under the substitution."""
        num, den = self.num, self.den
        for name, value in assignments.items():
            num = num.subs_var(name, value)
            den = den.subs_var(name, value)
        if den.is_zero():
            raise DenominatorVanishes(
                f"denominator {self.den} vanishes under {assignments}"
            )
        return Scalar(num, den)

    def eval_mod(self, point: Sequence[int], p: int) -> int:
        """Evaluate at an integer point mod p; raises DenominatorVanishes if
        the denominator reduces to zero mod p (callers then switch to another
        point or prime -- this does not mean the denominator vanishes over Q)."""
        d = self.den.eval_mod(point, p)
        if d == 0:
            raise DenominatorVanishes(
                f"denominator {self.den} is 0 mod {p} at {tuple(point)}"
            )
        return self.num.eval_mod(point, p) * _inv_mod(d, p) % p

    # -- printing -------------------------------------------------------------------

    def __str__(self) -> str:
        if self.den.is_const():
            return str(self.num)
        ns = str(self.num)
        if len(self.num.terms) > 1:
            ns = f"({ns})"
        return f"{ns}/({self.den})"

    def __repr__(self) -> str:
        return f"Scalar({self})"


def _as_scalar(x, vars: tuple[str, ...]):
    if isinstance(x, Scalar):
        if x.num.vars != vars:
            raise ValueError(f"variable mismatch: {x.num.vars} vs {vars}")
        return x
    if isinstance(x, MPoly):
        return Scalar(x)
    if isinstance(x, (int, Fraction)):
        return Scalar(MPoly.const(x, vars))
    return NotImplemented


# ---------------------------------------------------------------------------
# fraction-free exact linear algebra
# ---------------------------------------------------------------------------


def _as_mpoly(x, vars: tuple[str, ...]) -> MPoly:
    if isinstance(x, MPoly):
        if x.vars != vars:
            raise ValueError(f"variable mismatch: {x.vars} vs {vars}")
        return x
    if isinstance(x, Scalar):
        if not x.den.is_const():
            raise ValueError("entry has a nontrivial denominator; clear it first")
        return x.num
    return MPoly.const(x, vars)


def _cleared_row(row: Sequence[Scalar]) -> list[MPoly]:
    """Multiply a row of scalars by the lcm of its denominators, giving
    polynomial entries with the same row span."""
    vars = row[0].num.vars
    l = MPoly.const(1, vars)
    for s in row:
        if not s.den.is_const():
            l = poly_lcm(l, s.den)
    return [s.num * divide_exact(l, s.den) for s in row]


def rank_and_kernel(
    rows: Sequence[Sequence], ncols: int | None = None, vars: tuple[str, ...] = RT
) -> tuple[int, list[tuple[Scalar, ...]]]:
    """Exact rank and right kernel of a matrix over Q(vars).

    Entries may be int, Fraction, MPoly or Scalar.  Rows are cleared of
    denominators, then reduced by fraction-free Bareiss elimination with full
    pivoting (pivot chosen to minimize term count, ties by position, for
    deterministic output).  The kernel basis is back-substituted in the
    fraction field and finally verified against every original row; a failure
    there would indicate a bug and raises CertificationError.

    Returns (rank, basis) where basis is a list of length-ncols tuples of
    Scalar spanning the right kernel.
    """
    srows = [[_as_scalar(x, vars) for x in row] for row in rows]
    m = len(srows)
    if m == 0:
        if ncols is None:
            raise ValueError("ncols is required for an empty matrix")
        n = ncols
    else:
        n = len(srows[0])
        if any(len(r) != n for r in srows):
            raise ValueError("ragged matrix")
        if ncols is not None and ncols != n:
            raise ValueError("ncols disagrees with row length")
    if m == 0 or n == 0:
        basis = [
            tuple(
                Scalar.const(1 if j == f else 0, vars) for j in range(n)
            )
            for f in range(n)
        ] if m == 0 else []
        return 0, basis

    a = [_cleared_row(r) for r in srows]
    colperm = list(range(n))
    prev = MPoly.const(1, vars)
    r = 0
    while r < m and r < n:
        # pick the nonzero pivot with fewest terms (deterministic tie-break)
        best = None
        for i in range(r, m):
            for j in range(r, n):
                if not a[i][j].is_zero():
                    key = (len(a[i][j].terms), i, j)
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            break
        _, pi, pj = best
        if pi != r:
            a[pi], a[r] = a[r], a[pi]
        if pj != r:
            for row in a:
                row[pj], row[r] = row[r], row[pj]
            colperm[pj], colperm[r] = colperm[r], colperm[pj]
        piv = a[r][r]
        for i in range(r + 1, m):
            head = a[i][r]
            for j in range(r + 1, n):
                a[i][j] = divide_exact(piv * a[i][j] - head * a[r][j], prev)
            a[i][r] = MPoly.zero(vars)
        prev = piv
        r += 1

    # kernel by back-substitution over the fraction field
    basis: list[tuple[Scalar, ...]] = []
    zero = Scalar.const(0, vars)
    one = Scalar.const(1, vars)
    for f in range(r, n):
        v = [zero] * n
        v[f] = one
        for k in range(r - 1, -1, -1):
            acc = zero
            for j in range(k + 1, n):
                if not v[j].is_zero() and not a[k][j].is_zero():
                    acc = acc + Scalar(a[k][j]) * v[j]
            v[k] = -acc / Scalar(a[k][k])
        w = [zero] * n
        for j in range(n):
            w[colperm[j]] = v[j]
        basis.append(tuple(w))

    for vec in basis:
        for row in srows:
            acc = zero
            for x, y in zip(row, vec):
                if not x.is_zero() and not y.is_zero():
                    acc = acc + x * y
            if not acc.is_zero():
                raise CertificationError("kernel verification failed")
    return r, basis


def rank_exact(rows: Sequence[Sequence], ncols: int | None = None,
               vars: tuple[str, ...] = RT) -> int:
    return rank_and_kernel(rows, ncols, vars)[0]


def det_bareiss(rows: Sequence[Sequence], vars: tuple[str, ...] = RT) -> MPoly:
    """Determinant of a square matrix with polynomial entries, by
    fraction-free Bareiss elimination (all divisions exact)."""
    n = len(rows)
    if n == 0:
        return MPoly.const(1, vars)
    a = [[_as_mpoly(x, vars) for x in row] for row in rows]
    if any(len(r) != n for r in a):
        raise ValueError("matrix is not square")
    sign = 1
    prev = MPoly.const(1, vars)
    for k in range(n - 1):
        best = None
        for i in range(k, n):
            for j in range(k, n):
                if not a[i][j].is_zero():
                    key = (len(a[i][j].terms), i, j)
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            return MPoly.zero(vars)
        _, pi, pj = best
        if pi != k:
            a[pi], a[k] = a[k], a[pi]
            sign = -sign
        if pj != k:
            for row in a:
                row[pj], row[k] = row[k], row[pj]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            head = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = divide_exact(piv * a[i][j] - head * a[k][j], prev)
            a[i][k] = MPoly.zero(vars)
        prev = piv
    return a[n - 1][n - 1] * sign


# ---------------------------------------------------------------------------
# modular certification helpers
# ---------------------------------------------------------------------------


def _entry_mod(x, point: Sequence[int] | None, p: int) -> int:
    if isinstance(x, int):
        return x % p
    if isinstance(x, Fraction):
        v = x.numerator % p
        if x.denominator != 1:
            v = v * _inv_mod(x.denominator, p) % p
        return v
    if isinstance(x, MPoly):
        if point is None and not x.is_const():
            raise ValueError("matrix has variable entries; an evaluation point is required")
        return x.eval_mod(point or (), p) if not x.is_const() else _entry_mod(x.constant(), point, p)
    if isinstance(x, Scalar):
        if point is None and not (x.num.is_const() and x.den.is_const()):
            raise ValueError("matrix has variable entries; an evaluation point is required")
        if x.num.is_const() and x.den.is_const():
            return _entry_mod(x.num.constant() / x.den.constant(), point, p)
        return x.eval_mod(point, p)
    raise TypeError(f"cannot reduce {type(x).__name__} mod p")


def modp_matrix(
    rows: Sequence[Sequence], point: Sequence[int] | None = None, p: int = PRIMES[0]
) -> np.ndarray:
    """Reduce a matrix of int/Fraction/MPoly/Scalar entries mod p, evaluating
    any variables at the given integer point.  Raises DenominatorVanishes if
    some denominator reduces to 0 (callers switch point or prime)."""
    data = [[_entry_mod(x, point, p) for x in row] for row in rows]
    return np.array(data, dtype=np.int64)


def modp_rank(mat: np.ndarray, p: int = PRIMES[0]) -> int:
    """Rank of an integer matrix mod p by in-place echelon reduction.

    Requires p < 2**31 so that (p-1)**2 fits in int64 -- the primes in
    PRIMES all qualify.
    """
    a = np.array(mat, dtype=np.int64) % p
    m, n = a.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = _inv_mod(int(a[r, c]), p)
        a[r] = a[r] * inv % p
        below = np.nonzero(a[r + 1 :, c])[0]
        if below.size:
            rows = below + r + 1
            a[rows] = (a[rows] - np.outer(a[rows, c], a[r])) % p
        r += 1
    return r


class ModpEchelon:
    """Incremental row echelon mod p.

    Stored rows stay mutually reduced (each pivot column is zero in every
    other stored row), so testing a new vector for membership in the current
    row space is a single elimination pass.  :meth:`add_row` returns True
    when the vector was independent, i.e. the rank grew.
    """

    def __init__(self, ncols: int, p: int = PRIMES[0]):
        self.ncols = ncols
        self.p = p
        self.pivots: dict[int, np.ndarray] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def residual(self, vec: Sequence[int] | np.ndarray) -> np.ndarray:
        v = np.array(vec, dtype=np.int64) % self.p
        if v.shape != (self.ncols,):
            raise ValueError(f"expected a vector of length {self.ncols}")
        for c, row in self.pivots.items():
            f = int(v[c])
            if f:
                v = (v - f * row) % self.p
        return v

    def contains(self, vec) -> bool:
        return not self.residual(vec).any()

    def add_row(self, vec) -> bool:
        v = self.residual(vec)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = v * _inv_mod(int(v[c]), self.p) % self.p
        for c2 in list(self.pivots):
            row = self.pivots[c2]
            f = int(row[c])
            if f:
                self.pivots[c2] = (row - f * v) % self.p
        self.pivots[c] = v
        return True


def rank_lower_bound(
    rows: Sequence[Sequence],
    points: Sequence[tuple[int, int]] = CERT_POINTS,
    primes: Sequence[int] = PRIMES,
    samples: int = 2,
) -> int:
    """Sound lower bound for the rank of a matrix over Q(rho, theta).

    The matrix is evaluated at up to ``samples`` integer points (each mod the
    first prime that does not kill a denominator) and the best rank seen is
    returned.  Any nonzero minor of an evaluated matrix lifts to a nonzero
    minor over the function field, so the bound is exact logic, never a
    heuristic.  Raises CertificationError if no point/prime pair is usable.
    """
    best = 0
    used = 0
    for pt in points:
        got = False
        for p in primes:
            try:
                m = modp_matrix(rows, pt, p)
            except DenominatorVanishes:
                continue
            best = max(best, modp_rank(m, p))
            got = True
            break
        if got:
            used += 1
            if used >= samples:
                break
    if used == 0:
        raise CertificationError("no admissible evaluation point for rank bound")
    return best
