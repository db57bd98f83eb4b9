"""
Exception hierarchy shared by every module
"""


class CogrowthError(Exception):
    """Base class for all toolkit errors"""


class GraphError(CogrowthError, ValueError):
    """Invalid graph, vertex index or vertex-function alignment"""


class SizeCapExceeded(CogrowthError):
    """A ball or cover would exceed the configured vertex cap"""


class WorkCapExceeded(CogrowthError):
    """A brute-force computation would exceed the configured work cap"""


class TruncationError(CogrowthError):
    """A count was requested beyond the exactness horizon of a ball"""


class PreconditionError(CogrowthError, ValueError):
    """A convergence or domain precondition does not hold"""


class SingularMatrixError(PreconditionError):
    """Matrix too close to singular for a dense inverse"""


class InsufficientSeriesError(PreconditionError):
    """Series too short to reach the requested tolerance"""


class ParityError(PreconditionError):
    """Estimator incompatible with the zero pattern of the series"""


class ConvergenceError(CogrowthError, RuntimeError):
    """Iterative method did not converge"""
