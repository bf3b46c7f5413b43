"""Exception hierarchy shared by all modules."""


class OspNlieError(Exception):
    """Base class. ``module`` and ``quantity`` feed the CLI error record."""

    module = "ospnlie"

    def __init__(self, message, quantity=None, module=None):
        super().__init__(message)
        self.quantity = quantity
        if module is not None:
            self.module = module


class PoleError(OspNlieError, ZeroDivisionError):
    """Evaluation hit a pole of a rational/meromorphic expression."""


class DimensionError(OspNlieError, ValueError):
    """Requested dense operator exceeds the configured size cap."""


class KernelCollisionError(OspNlieError, ValueError):
    """Evaluation point too close to a Cauchy-kernel singularity."""


class DivisionBlowupError(OspNlieError, FloatingPointError):
    """Denominator of an NLIE integrand vanished at a quadrature node."""


class ConvergenceError(OspNlieError, RuntimeError):
    """Iterative solver did not reach its tolerance.

    ``result`` carries the last iterate when one exists.
    """

    def __init__(self, message, quantity=None, module=None, result=None):
        super().__init__(message, quantity, module)
        self.result = result


class AnsatzError(OspNlieError, ArithmeticError):
    """High-temperature expansion left the assumed pole family."""


class PadeDegeneracyError(OspNlieError, ArithmeticError):
    """Singular Hankel system in a Pade construction."""
