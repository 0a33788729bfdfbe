"""Exception hierarchy for kerrflow.

Every domain error derives from KerrflowError so callers (and the CLI)
can distinguish bad inputs from genuine numerical failures.
"""


class KerrflowError(Exception):
    """Base class for all kerrflow errors."""


class NonpositiveMass(KerrflowError):
    """Mass parameter must be strictly positive."""


class ExtremalOrSuper(KerrflowError):
    """|a| >= M: extremal or super-extremal spins are not admitted."""


class OutsideChart(KerrflowError):
    """Point lies outside the domain of the requested chart."""


class ChartDomain(KerrflowError):
    """Image coordinates leave the target chart's domain."""


class HorizonSingular(KerrflowError):
    """Boyer-Lindquist-type map evaluated exactly at r = r_plus."""


class NoBracket(KerrflowError):
    """Root bracketing failed: no sign change on the search interval."""


class ZeroSpatialPart(KerrflowError):
    """Null completion requires a nonzero spatial covector part."""


class OnAxis(KerrflowError):
    """Polar-chart operation called too close to the rotation axis."""


class OnAxisInPolarChart(OnAxis):
    """Flow right-hand side requested at the axis in a polar chart."""


class NotNull(KerrflowError):
    """Covector fails the null-shell tolerance."""


class DegenerateZero(KerrflowError):
    """Orientation test returned a contraction below tolerance."""


class NotInKHat(KerrflowError):
    """Projected data fail validation as trapped-set projection data."""


class NoRoot(KerrflowError):
    """Radial potential has no root on the bracketed interval."""


class MultipleRoots(KerrflowError):
    """Radial potential root expected to be unique; a second root was found."""


class PositivityViolation(KerrflowError):
    """Radial certificate polynomial failed positivity/monotonicity."""


class DivisionDomain(KerrflowError):
    """Ratio undefined: denominator parameter combination vanishes."""


class StepBudgetExceeded(KerrflowError):
    """Integrator exhausted max_steps before reaching a stop condition."""


class TolFailure(KerrflowError):
    """Adaptive step control could not satisfy the requested tolerances."""
