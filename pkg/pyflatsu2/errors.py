"""
Exceptions raised by pyflatsu2.

Input problems subclass ValueError (the command line maps them to exit code 2),
numerical findings subclass RuntimeError (exit code 1).
"""


class WeightParseError(ValueError):
    """A weight string is not an exact rational 'p/q' or integer in [0, 1]."""


class NotNormalized(ValueError):
    """An operation that needs a Classic or Parabolic configuration got a Raw one."""


class SubsetOverflow(ValueError):
    """Exhaustive subset enumeration requested for more than 30 punctures."""


class NoInteriorWeight(ValueError):
    """The odd-parity sign flip has no weight strictly inside (0, 1) to act on."""


class IrregularWeights(ValueError):
    """I is a critical value of the product map: some kappa_J is an integer."""

    def __init__(self, witness, message=None):
        self.witness = tuple(witness)
        if message is None:
            members = ", ".join(str(j) for j in self.witness)
            message = f"irregular weights: kappa_J is an integer for J = {{{members}}}"
        super().__init__(message)


class GenusZero(ValueError):
    """A genus zero configuration where the operation is undefined."""


class AntipodalLog(ValueError):
    """The principal logarithm is undefined at -1."""


class ActionUndefined(ValueError):
    """The circle action does not extend over A_g = +I or -I."""


class InexactDivision(ArithmeticError):
    """A polynomial division that must be exact left a remainder."""

    def __init__(self, remainder):
        self.remainder = remainder
        super().__init__(f"division left remainder {remainder}")


class NoConvergence(RuntimeError):
    """Newton iteration failed to reach the fiber."""

    def __init__(self, residual, iterations):
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"no convergence after {iterations} iterations (residual {residual:.3e})"
        )


class UnresolvedBaseCase(RuntimeError):
    """Genus-zero space asserted empty, but the numeric probe found a point."""


class SliceDimensionMismatch(RuntimeError):
    """The computed slice dimension disagrees with the moduli space dimension."""


class DegenerateHessian(RuntimeError):
    """Hessian nullity differs from the dimension of the critical torus."""

    def __init__(self, report, expected):
        self.report = report
        self.expected = expected
        super().__init__(
            f"hessian nullity {report.nullity} != expected {expected} "
            f"(index {report.index}, slice dim {report.slice_dim})"
        )


class CensusMismatch(RuntimeError):
    """Critical torus census disagrees with the index formula."""

    def __init__(self, census, message):
        self.census = census
        super().__init__(message)
