"""Exception types raised across the package."""


class SylvesterError(Exception):
    """Base class for all errors raised by :mod:`sylvlike`."""


class DimensionMismatch(SylvesterError, ValueError):
    pass


class SingularMatrix(SylvesterError, ArithmeticError):
    pass


class ConvergenceFailure(SylvesterError, ArithmeticError):
    pass


class IndexOutOfRange(SylvesterError, IndexError):
    pass


class SingularPencil(SylvesterError, ArithmeticError):
    pass


class QuadratureNotConverged(SylvesterError, ArithmeticError):
    pass


class MissingCoefficient(SylvesterError, KeyError):
    pass


class NotTriangular(SylvesterError, ValueError):
    pass


class WrongOperatorClass(SylvesterError, ValueError):
    pass


class NotUniquelySolvable(SylvesterError, ArithmeticError):
    """The coefficient map of the equation is (numerically) singular.

    The smallest singular value that triggered the error is kept in
    ``sigma_min``.
    """

    def __init__(self, message, sigma_min=float("nan")):
        super().__init__(message)
        self.sigma_min = sigma_min


class ResidualCheckFailed(SylvesterError, ArithmeticError):
    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class SingularClosedFormMatrix(SylvesterError, ArithmeticError):
    def __init__(self, message, sigma_min=float("nan")):
        super().__init__(message)
        self.sigma_min = sigma_min


class NotPalindromic(SylvesterError, ValueError):
    pass


class OddDimension(SylvesterError, ValueError):
    pass


class NewtonStepSingular(SylvesterError, ArithmeticError):
    def __init__(self, message, sigma_min=float("nan"), trace=None):
        super().__init__(message)
        self.sigma_min = sigma_min
        self.trace = trace


class NotConverged(SylvesterError, ArithmeticError):
    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class ResidualTooLarge(SylvesterError, ArithmeticError):
    pass
