"""Exception hierarchy for bcsurf.

Every failure mode that a caller is expected to handle gets its own class so
that the CLI can map them onto exit codes and tests can assert on them
precisely.  All inherit from :class:`BcsurfError`.
"""

from __future__ import annotations


class BcsurfError(Exception):
    """Base class for all bcsurf-specific errors."""


class GuardError(BcsurfError):
    """A mode/configuration guard was violated (bad rho/theta, root of unity...)."""


class DenominatorVanishes(BcsurfError):
    """Specializing a rational function at a point where the denominator is 0."""


class ZeroForm(BcsurfError):
    """An operation received or produced the zero form where nonzero is required."""


class UndefinedOrbitPoint(BcsurfError):
    """An orbit point recurrence degenerated (both coordinates vanish)."""


class BadIndexList(BcsurfError):
    """A critical-density index list has the wrong length or repeats."""


class CheckFailed(BcsurfError):
    """A verification routine found a concrete counterexample; message says which."""


class RelationFailed(CheckFailed):
    """A defining relation did not vanish; carries the failing index."""

    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(message or f"relation {index} does not vanish")


class BoundExceeded(BcsurfError):
    """A degree/size request exceeded the configured bound for the mode."""


class DegreeMismatch(BcsurfError):
    """Graded elements of incompatible degrees were combined."""


class UnresolvableOverlap(BcsurfError):
    """A rewrite-system overlap ambiguity did not resolve to zero."""


class NonTerminating(BcsurfError):
    """Rewriting exceeded its step budget."""


class NoChart(BcsurfError):
    """No affine chart contains the requested point with a unit denominator."""


class NotTransverse(BcsurfError):
    """A curve germ failed to meet a fiber transversely (its leading local
    coefficient is not a unit in the truncated ring)."""


class AmbientCohomology(BcsurfError):
    """An Euler-characteristic count is invalid because the ambient line bundle
    has higher cohomology in the requested twist."""


class WindowTooSmall(BcsurfError):
    """A truncation window was too small: computed data touched its boundary."""


class RangeUnsupported(BcsurfError):
    """Parameters fall outside the range covered by the implemented closed forms."""


class CertificationError(BcsurfError):
    """An exact certificate could not be established (bounds did not meet)."""
