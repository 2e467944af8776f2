"""hyperline: exact arithmetic on a computable fragment of the extended
hyperreal line, with Goldbach-Euler and Hermite verification engines."""

from . import errors, extsum, goldbach, hermite, seqfield, wattenberg
from .intervals import Interval

__all__ = ["errors", "extsum", "goldbach", "hermite", "seqfield", "wattenberg",
           "Interval"]
__version__ = "0.1.0"
