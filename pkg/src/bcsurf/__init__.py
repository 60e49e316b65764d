"""bcsurf: an exact symbolic laboratory for a family of graded algebras
attached to birational self-maps of the quadric surface P1 x P1.

The package constructs the algebras inside a skew Laurent extension of the
function field of the surface, and mechanically verifies -- in exact
arithmetic, at bounded degree -- their graded dimensions, defining relations,
resolutions and Ext groups, orbit and linear-system certificates, and the
cohomology of the associated sheaves.  The command line entry point is
``bcsurf`` (see :mod:`bcsurf.cli`).
"""

__version__ = "0.1.0"
