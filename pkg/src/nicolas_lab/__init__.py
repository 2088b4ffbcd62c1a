"""Numerical toolkit for Nicolas's inequality and the Mertens error term."""

__version__ = "0.1.0"

from .bounded import BoundedReal
from .compensated import CompensatedSum
from .errors import CacheFormatError, DomainError, NicolasLabError, PrecisionError, RangeError, ResourceError
from .primes import SieveConfig, PrimeStream, nth_prime, prime_count, primes_up_to
from .summatory import (O1, R, frac_mangoldt_ratio, mangoldt, mangoldt_over_d_sum,
                        prime_reciprocal_sum, psi, sum_log_n, theta)
from .prime_zeta import (B, mertens_b_via_zeta, prime_power_log_sum, prime_zeta_partial,
                         prime_zeta_tail_bound, zeta_series_partial)
from .error_term import (E, b_via_integral, bigo_via_integral, integral_R,
                         stieltjes_decomposition_check)
from .nicolas import (CorollaryBranch, NicolasVerdict, c_x_decomposition, corollary_check,
                      nicolas_holds, nicolas_margin, theorem1_hypothesis_scan, theorem2_check)
from .scanner import Checkpoint, ScanConfig, ScanReport, checkpoint, scan
from .reproduce import reproduce_paper
