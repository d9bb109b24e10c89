"""Exception types shared across the package.

Grouped here so that the algebra, solver and geometry modules can raise a
common vocabulary of errors without importing each other.
"""

from __future__ import annotations


class BicircleError(Exception):
    """Base class for all package-specific errors."""


# --- scalar tower errors -------------------------------------------------

class ScalarError(BicircleError):
    pass


class DivisionByZero(ScalarError, ZeroDivisionError):
    pass


class IncompatibleTowers(ScalarError):
    """Operands live in square-root towers neither of which embeds in the other."""


class NegativeRadicand(ScalarError):
    """Square root of a negative quantity was requested."""


class TowerDepthExceeded(ScalarError):
    """Adjoining the radical would push the tower past the supported depth."""


class DependentRadicands(ScalarError):
    """Radicand set is multiplicatively dependent (some subset product is a square)."""


class NoExactSquareRoot(ScalarError):
    """The element has no square root in any representable tower."""


class ParseError(BicircleError):
    pass


# --- polynomial errors ---------------------------------------------------

class PolyError(BicircleError):
    pass


class DivisorZero(PolyError):
    pass


class LeadingCoefficientNotInvertible(PolyError):
    """Division requested in a variable whose leading coefficient is not a
    nonzero constant quaternion."""


class NotDivisible(PolyError):
    """Exact division was requested but a nonzero remainder was produced."""


class NonRealNorm(PolyError):
    """Internal consistency failure: a norm came out with nonreal coefficients."""


# --- solver errors -------------------------------------------------------

class SolverError(BicircleError):
    pass


class InvariantViolated(SolverError):
    """A value failed its defining identity (norm-product or sum-of-squares)."""


class HypothesisViolated(SolverError):
    """An invariant failed mid-pipeline; the input is not a true solution."""


class DegreeOutOfRange(SolverError):
    pass


class NoSplit(SolverError):
    """No bilinear factorization of the requested shape exists."""


class ConstraintViolated(SolverError):
    """Constructed factors violate a requested degree bound."""


class ExactnessUnavailable(SolverError):
    """A real factorization left every representable tower while an exact
    certificate was requested; rerun with the approximate backend."""


# --- surface errors ------------------------------------------------------

class SurfaceError(BicircleError):
    pass


class AntipodalDegeneracy(SurfaceError):
    """An entire iso-curve of a sphere-pair surface collapsed (p + q ~ 0)."""


class EmptyIntersection(SurfaceError):
    """No zero crossing of the implicit surface was found inside the box."""


class PoleSingularity(SurfaceError):
    """Projective evaluation hit a vanishing denominator."""


class CenterSingularity(SurfaceError):
    """Inversion was evaluated at its own center."""


class DegenerateCurve(SurfaceError):
    """A sampled curve is collinear or collapsed and admits no circle fit."""
