"""Numerical companion for gaps between zeros of xi'(s).

Modules:

* ``arith``       multiplicative coefficients, von Mangoldt convolutions, oracle sums
* ``analytic``    zeta, xi and their logarithmic derivatives near the critical line
* ``zerofinder``  zeros of zeta and xi', normalized gaps, D(alpha, T)
* ``quadrature``  adaptive Gauss-Kronrod rules on intervals, triangles and squares
* ``functionals`` closed-form and empirical h_1, U, V, c_plus/c_minus, prime sums
* ``optimize``    search for the extremal alpha on either side of h_1 = 1
* ``cli``         the ``xigap`` command
"""

from .errors import (AccuracyError, CapacityError, ConditioningError, DegenerateError, DomainError,
                     PoleProximityError, PrecisionError, SearchFailure, ValidationError, XigapError)
from .functionals import (FunctionalResult, MollifierSpec, PolyF, UV, c_opt, empirical_h, g_sums,
                          h1_theorem1, h1_theorem2, moment2)
from .optimize import OptReport, optimize_theorem1, optimize_theorem2
from .quadrature import adaptive_quad
from .zerofinder import ZeroList, distribution, normalized_gaps, scan_zeros

__version__ = "0.1.0"
