"""Stored mathematical constants.

EULER_GAMMA and MERTENS_B are the standard published decimal expansions
(OEIS A001620 and A077761), rounded to the nearest double. MERTENS_B is
re-derived at run time by :func:`nicolas_lab.prime_zeta.mertens_b_via_zeta`
and :func:`nicolas_lab.error_term.b_via_integral` as a consistency gate.
"""

import math

EULER_GAMMA = 0.57721566490153286060651209008240243
MERTENS_B = 0.26149721284764278375542683860869585905
GAMMA_MINUS_B = EULER_GAMMA - MERTENS_B
EXP_GAMMA = math.exp(EULER_GAMMA)

# High-precision decimal strings for mpmath-based oracles.
EULER_GAMMA_STR = "0.57721566490153286060651209008240243104215933593992"
MERTENS_B_STR = "0.26149721284764278375542683860869585905156664826120"

LOG_LOG_2 = math.log(math.log(2.0))
EPS = 2.0**-52

# Window constants quoted by the reduction argument.
R_WINDOW_LOWER = -1.645
R_WINDOW_UPPER = -0.048
E_LOG_BOUND = 1.597
PSI_LOWER_A = 0.780355
FRAC_UPPER_BOUND = 0.58526625
FRAC_WINDOW_LOWER = 0.41
FRAC_WINDOW_UPPER = 0.43
PRIME_POWER_SUM_TARGET = 0.753365132271
PI2_OVER_6_BOUND = 1.645
