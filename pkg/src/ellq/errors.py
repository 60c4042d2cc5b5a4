"""Exception hierarchy shared by all ellq modules."""


class EllqError(Exception):
    """Base class for all library errors."""


# -- curves and lattices ----------------------------------------------------

class SingularCurve(EllqError):
    """g2^3 - 27*g3^2 = 0: the Weierstrass cubic is degenerate."""


class BadMultiplier(EllqError):
    """The dilation multiplier must be an integer >= 2."""


class BadOrientation(EllqError):
    """Im(omega1/omega2) <= 0: the period basis is not oriented."""


class BadPoint(EllqError):
    """A torsion point outside the allowed set was supplied."""


# -- function field arithmetic ----------------------------------------------

class DivisionByZero(EllqError, ZeroDivisionError):
    """Division by the zero element of an exact field."""


class NotInPhiImage(EllqError):
    """The element is not of the form f(qz) for f in the same function field."""


class DomainViolation(EllqError):
    """Operation not allowed in the restricted ring (e.g. z^-1 with s0 set)."""


# -- numerics ---------------------------------------------------------------

class AtPole(EllqError):
    """Evaluation point is within the pole-rejection radius of the lattice."""


class NearPole(EllqError):
    """A denominator fell below the precision floor during evaluation."""


class RadiusTooSmall(EllqError):
    """No circle of the requested radius avoids nearby singularities."""


class PrecisionFailure(EllqError):
    """Internal consistency check of the evaluator failed after retries."""


# -- divisors ---------------------------------------------------------------

class NonIntegralValues(EllqError):
    """Divisor values are required to be integers here."""


class NonzeroDegree(EllqError):
    """Operation requires a degree-zero divisor."""


class SupportTooLarge(EllqError):
    """Divisor support exceeds the requested torsion grid."""


# -- linear systems ----------------------------------------------------------

class SingularGauge(EllqError):
    """Gauge matrix is not invertible."""


class SingularA(EllqError):
    """The difference-system matrix must be invertible."""


class ZeroTrailingCoefficient(EllqError):
    """Companion construction needs a nonzero trailing coefficient."""


class NotADivisorOfAFunction(EllqError):
    """Input divisor fails the principality preconditions."""


# -- monodromy ---------------------------------------------------------------

class NotUnipotent(EllqError):
    """(M - I)^n != 0."""


class NotNilpotent(EllqError):
    """N^n != 0."""


class NotCommuting(EllqError):
    """The two monodromy matrices do not commute."""


# -- difference-differential solver ------------------------------------------

class HypothesisViolated(EllqError):
    """The exact residual of the input relation is nonzero."""


class ImpossibleCase(EllqError):
    """A branch that cannot occur under a valid hypothesis was reached.

    Reaching this indicates corrupted input that slipped past the residual
    precheck, or an arithmetic bug; it is a tripwire, not a user error.
    """


class UnresolvedPoles(EllqError):
    """Pole support could not be resolved to torsion points."""


# -- CLI ----------------------------------------------------------------------

class SchemaError(EllqError):
    """Input JSON does not match the subcommand schema (exit code 2)."""


class CheckFailed(EllqError):
    """An embedded verification check failed (exit code 1)."""
