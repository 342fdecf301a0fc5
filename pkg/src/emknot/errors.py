"""Exception hierarchy shared by all emknot modules."""


class EmknotError(Exception):
    """Base class for every error raised by emknot."""


class SingularPoint(EmknotError, ArithmeticError):
    """Closed-form denominator underflowed at the requested point."""


class QuadratureNotConverged(EmknotError, ArithmeticError):
    """Adaptive quadrature exhausted its refinement budget."""


class GridMismatch(EmknotError, ValueError):
    """Two fields were sampled on different grids."""


class NotTransversal(EmknotError, ValueError):
    """A spectrum has a longitudinal part beyond tolerance (k.F != 0)."""


class RealityViolated(EmknotError, ArithmeticError):
    """An inverse transform produced a non-negligible imaginary part."""


class ZeroWavevector(EmknotError, ValueError):
    """Operation needs a direction e_k but was given k = 0."""


class StagnationPoint(EmknotError, ArithmeticError):
    """Field magnitude underflowed while tracing a field line."""


class NoClosure(EmknotError):
    """Step budget exhausted before the traced line closed.

    The open curve is kept on ``self.curve`` for diagnostics.
    """

    def __init__(self, message, curve=None):
        super().__init__(message)
        self.curve = curve


class OpenCurve(EmknotError, ValueError):
    """Linking number requested for a curve that is not closed."""


class CurvesTooClose(EmknotError, ValueError):
    """Two curves intersect or nearly so; the Gauss integral is unreliable."""
