"""Free energy and specific heat of the osp(1|2s) quantum spin chain at finite
temperature.  A fixed-point solver for a finite system of contour-integral
equations is cross-checked against an exact high-temperature series and
against lattice computations."""

from .errors import (AnsatzError, ConvergenceError, DimensionError, DivisionBlowupError,
                     KernelCollisionError, OspNlieError, PadeDegeneracyError, PoleError)

__version__ = "0.1.0"
