"""Computation modes: which coefficient domain the whole tower works over.

* ``generic``     -- coefficients in the field Q(rho, theta), fully symbolic;
* ``tau-one``     -- rho = theta = 1, the degenerate case where the twisting
                     collapses to the standard shift (gamma = eps = 2,
                     delta = zeta = 0);
* ``specialized`` -- rho, theta frozen at chosen rational values.

A :class:`Mode` hands out the structure constants

    gamma = rho + 1,  delta = rho - 1,  eps = theta + 1,  zeta = theta - 1

in the right coefficient domain (:class:`~bcsurf.exact.Scalar` for generic,
:class:`fractions.Fraction` otherwise), so downstream code is written once
against duck-typed coefficients.  It also centralizes the integer evaluation
points used for modular rank certification.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import GuardError
from .exact import CERT_POINTS, Scalar

GENERIC = "generic"
TAU_ONE = "tau-one"
SPECIALIZED = "specialized"


@dataclass(frozen=True)
class Mode:
    """Coefficient mode for the whole computation tower.

    Use the factories :func:`generic`, :func:`tau_one`, :func:`specialized`
    rather than the constructor.
    """

    kind: str
    rho0: Fraction | None = None
    theta0: Fraction | None = None

    def __post_init__(self):
        if self.kind not in (GENERIC, TAU_ONE, SPECIALIZED):
            raise GuardError(f"unknown mode kind {self.kind!r}")

    # -- coefficient domain ---------------------------------------------------

    @property
    def symbolic(self) -> bool:
        return self.kind == GENERIC

    @property
    def is_tau_one(self) -> bool:
        return self.kind == TAU_ONE

    @property
    def rho(self):
        if self.kind == GENERIC:
            return Scalar.var("rho")
        return self.rho0

    @property
    def theta(self):
        if self.kind == GENERIC:
            return Scalar.var("theta")
        return self.theta0

    @property
    def gamma(self):
        return self.rho + 1

    @property
    def delta(self):
        return self.rho - 1

    @property
    def eps(self):
        return self.theta + 1

    @property
    def zeta(self):
        return self.theta - 1

    def scalar(self, c):
        """Lift an int/Fraction into this mode's coefficient domain."""
        if self.kind == GENERIC:
            return Scalar.const(c)
        return Fraction(c)

    @property
    def zero(self):
        return self.scalar(0)

    @property
    def one(self):
        return self.scalar(1)

    def theta_pow(self, n: int):
        """theta**n in the coefficient domain (n may be negative)."""
        return self.theta ** n

    # -- certification data -----------------------------------------------------

    def cert_points(self):
        """Integer (rho, theta) points admissible for modular rank bounds.

        In non-generic modes the matrices built downstream are already over Q
        and need no evaluation point, so ``(None,)`` is returned.
        """
        if self.kind == GENERIC:
            return CERT_POINTS
        return (None,)

    def label(self) -> str:
        if self.kind == SPECIALIZED:
            return f"rho={self.rho0},theta={self.theta0}"
        return self.kind

    def __str__(self) -> str:
        return self.label()


def generic() -> Mode:
    return Mode(GENERIC)


def tau_one() -> Mode:
    return Mode(TAU_ONE, Fraction(1), Fraction(1))


def specialized(rho, theta, strict: bool = True) -> Mode:
    """Mode with rho, theta frozen at rational values.

    With ``strict`` (the default) the values must avoid 0 and +-1: rational
    theta is a root of unity exactly when theta is +-1, and those values (and
    0) collapse the constructions this package verifies.  ``strict=False``
    allows deliberately degenerate values for exploratory computations (for
    instance to watch common factors appear in iterated pullbacks); results
    there are whatever the arithmetic says, with no genericity promise.
    """
    rho = Fraction(rho)
    theta = Fraction(theta)
    if strict:
        bad = {Fraction(0), Fraction(1), Fraction(-1)}
        if rho in bad or theta in bad:
            raise GuardError(
                f"specialized mode needs rho, theta outside {{0, 1, -1}}; "
                f"got rho={rho}, theta={theta}"
            )
    return Mode(SPECIALIZED, rho, theta)
