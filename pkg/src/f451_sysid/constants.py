"""Global constants for f451 System Identification module.

This module holds all global constants used within various components of
the f451 System Identification module. Most constants are used as keyword
equivalents for attributes in experiment config files, or as numerical
tolerances shared by several modules.
"""
# =========================================================
#              M I S C .   C O N S T A N T S
# =========================================================
DELIM_STD: str = "|"

MODE_SINGLE: str = "single"
MODE_MULTI: str = "multi"
VALID_MODES: tuple = (MODE_SINGLE, MODE_MULTI)

STATUS_OK: str = "ok"
STATUS_FAILED: str = "failed"

# =========================================================
#    N U M E R I C A L   T O L E R A N C E S
# =========================================================
TOL_RANK: float = 1e-8  # s_i >= TOL_RANK * s_1 counts towards numerical rank
TOL_PINV: float = 1e-12  # pseudoinverse cut-off relative to s_1
TOL_HOKALMAN: float = 1e-12  # compact SVD cut-off inside Ho-Kalman
TOL_LSTSQ: float = 1e-10  # regressor rank test relative to s_1

HINF_GRID_SIZE: int = 4096

# =========================================================
#    K E Y W O R D S   F O R   C O N F I G   F I L E S
# =========================================================
CONFIG_SCTN: str = "f451_sysid"

KWD_MODE: str = "mode"
KWD_N: str = "n"
KWD_D_U: str = "d_u"
KWD_D_Y: str = "d_y"
KWD_TAU: str = "tau"
KWD_SIGMA_U: str = "sigma_u"
KWD_SIGMA_Z: str = "sigma_z"
KWD_DELTA: str = "delta"
KWD_T_GRID: str = "T_grid"
KWD_TRIALS: str = "trials_per_T"
KWD_SEED: str = "master_seed"
KWD_BETA: str = "beta_override"
KWD_OUTPUT: str = "output_path"
KWD_ALLOW_SHORT_TAU: str = "allow_short_tau"

ENV_THREADS: str = "SYSID_THREADS"

# =========================================================
#    D E F A U L T   E X P E R I M E N T   S E T U P
# =========================================================
DEFAULT_MODE: str = MODE_MULTI
DEFAULT_N: int = 5
DEFAULT_D_U: int = 3
DEFAULT_D_Y: int = 2
DEFAULT_TAU: int = 6
DEFAULT_SIGMA_U: float = 1.0
DEFAULT_SIGMA_Z: float = 0.1
DEFAULT_DELTA: float = 0.05
DEFAULT_T_GRID: tuple = (500, 1000, 2000, 5000, 10000, 20000)
DEFAULT_TRIALS: int = 20
DEFAULT_SEED: int = 455
DEFAULT_OUTPUT: str = "f451-sysid.results.csv"

# Random system generator (diagonal A, Gaussian B and C)
SYS_EIG_LOW: float = 0.1
SYS_EIG_HIGH: float = 0.9
SYS_BC_STD: float = 2.0

# =========================================================
#    T R I A L   R E C O R D   C S V   C O L U M N S
# =========================================================
COL_STATUS: str = "status"
RECORD_COLUMNS: tuple = (
    "T",
    "trial",
    "xi",
    "order_estimate",
    "hankel_op_error",
    "hankel_fro_error_thresholded",
    "markov_cab_error",
    "oracle_cab_error",
    "bound_rhs_prop1",
)
