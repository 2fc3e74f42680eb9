# ===== Precision configuration =====
# Significant decimal digits for the asymptotic modules
WORKING_DIGITS = 30
# Zero expansions are compared against 18-digit estimator values
ZERO_DIGITS = 50
# Significant digits written to CSV files
CSV_DIGITS = 16

# ===== Branch map configuration =====
# Below this distance from z=1 the Taylor series about the turning point is used
TAYLOR_RADIUS = 0.1
# Terms kept in every Taylor series about z=1
TAYLOR_TERMS = 24
# tau(x) switches to its u-series for u = sqrt(1-x^2) below this value
TAU_SERIES_CUTOFF = 1e-3
TAU_SERIES_TERMS = 7
# Newton iterations allowed when inverting rho
RHO_INVERSE_MAXSTEPS = 60

# ===== Coefficient configuration =====
# Largest s for the E_s(beta) polynomials
MAX_E_ORDER = 12
# Largest s for the Airy coefficients a_s, a~_s
MAX_AIRY_COEFF_ORDER = 20
# Largest s for A_s(z), B_s(z)
MAX_AB_ORDER = 3
# Largest s for q_s(x)
MAX_Q_ORDER = 4
# Real x at or beyond this uses the direct A_s/B_s formulas
AB_DIRECT_MIN_X = 1.1
# Real x at or below this uses the tau-form
AB_TAU_MAX_X = 0.9

# ===== Airy configuration =====
# |t| at or below this uses the Maclaurin series
AIRY_SEAM = 4.5
AIRY_MAX_ARG = 1e5
# Extra digits for the Maclaurin series (cancellation for negative t)
AIRY_GUARD_DIGITS = 12
# Exponential-form expansions need nu*|xi| at least this large
EXPFORM_MIN_NU_XI = 2

# ===== Liouville-Green configuration =====
# Points closer than this to the turning point are rejected
LG_EXCLUSION_RADIUS = 0.25
# Default number of terms n (the exponent sum runs to n-1)
LG_DEFAULT_TERMS = 6

# ===== Zero configuration =====
# kappa0 switches to the 2/(eU) seed above this right-hand side
KAPPA_SEED_SWITCH = 3
# Half-width of the first bracket when refining an L-zero on the Airy assembly
L_ZERO_BRACKET = 1e-3

# ===== Oracle configuration =====
ORACLE_DIGITS = 40
ORACLE_MIN_DIGITS = 30
# Digits added on top of the series padding
ORACLE_GUARD_DIGITS = 10
# Requests needing more padding than this are refused
ORACLE_MAX_PADDING = 600
# Quadrature tail is dropped once exp(-t cosh s) falls below 10^-(digits + this)
QUAD_TAIL_DIGITS = 10
# Zero estimators refuse derivatives smaller than this
ORACLE_MIN_DERIVATIVE = 1e-280

# ===== Logging configuration =====
LOG_LEVEL = "WARNING"
LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"
