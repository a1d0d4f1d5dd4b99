"""Central limits, tolerances, and defaults.

Every cap or tolerance used by more than one module lives here under one
name, so tests and the command line agree about what "too large" or
"close enough" means.
"""

import math
import os

# Dense sign-table operations allocate 2^n entries.
DENSE_DIMENSION_LIMIT = 24

# Cap on the support size of an exact flow-law DP before raising BudgetExceeded.
SUPPORT_CAP = 10**6

# Exhaustive path enumeration caps (2^t paths).
EXHAUSTIVE_T_CAP = 12

# Conditional stickiness reports enumerate the full law by (a, b) slice.
CONDITIONAL_T_CAP = 12

# Subset enumeration cap for the averaged zero-inclusion identity (2^n subsets).
SUBSET_ENUM_CAP = 4096

# Coupled-pair DP identity is checked exhaustively only up to this chain length.
ZERO_SPECTRAL_N_CAP = 8

# Total atom budget for an exact conditional-correlation bound instance.
CORRELATION_ATOM_CAP = 20000

# Monotone statistics tolerances.
EXACT_REL_TOL = 2.0 ** -40        # dual-route float agreement, sign analysis
KERNEL_ABS_TOL = 1e-10            # coupling-vs-spectral correlation agreement
EIGEN_TOL = 1e-12                 # final float eigenvalue stage of the bound check
MICRO_CORRELATION_TOL = 1e-6      # declared-scale micro correlation ceiling
LIMIT_KS_TOL = 0.05               # spread and stickiness limit-law KS ceiling
TRAP_KS_TOL = 0.1                 # trap waiting-time KS ceiling

# The waiting-time KS ceiling only holds in the deep-trap regime; at small m
# the statistic is visibly discrete (its atom at 0 alone has mass 2^{1-m}).
# The Monte Carlo waiting check therefore always runs at least this deep/long.
TRAP_WAITING_MIN_M = 5
TRAP_WAITING_MIN_T = 1024
POISSON_TV_TOL = 0.1              # pattern-count total-variation ceiling

# Threshold checks of the micro/block report only apply from this size up;
# smaller sizes exist for cross-checking against dense sign-table oracles.
MICRO_BLOCK_DECLARED_SCALE = 1024

# The trap-flow defect |b + min a| is required to stay below this multiple of m.
TRAP_BOUND_CONSTANT = 1

# Fixed default seed so every report is reproducible without flags.
DEFAULT_SEED = 20260816

BUDGET_ENV_VAR = "SIGNFLOWS_BUDGET"


def get_budget(override=None):
    """Resolve the enumeration budget: explicit override, else env var, else cap."""
    if override is not None:
        return int(override)
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is not None:
        return int(raw)
    return SUPPORT_CAP


# Number of ECDF points retained in on-disk data series (keeps artifacts small).
SERIES_POINT_CAP = 512

# Default noise level used by size-scan reports: exp(-1).
DEFAULT_NOISE_LEVEL = math.exp(-1)
