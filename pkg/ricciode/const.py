"""Project-wide constants"""

import os

__all__ = [
    "PKG_NAME",
    "EPS_SING",
    "TOL_MIN",
    "TOL_MAX",
    "MAX_STEPS",
    "UNIT_RATE_TOL",
    "ODE_RESIDUAL_TOL",
    "RICCI_RESIDUAL_TOL",
    "FORMATS",
    "FORM_NAMES",
    "TAUB_NUT",
    "EGUCHI_HANSON",
    "FUBINI_STUDY",
    "FUBINI_STUDY_HYPERBOLIC",
    "CASE3",
    "FLAT_CONE",
    "TRAJECTORY_COLUMNS",
    "CATALOG_COLUMNS",
    "FLOAT_FORMAT",
    "SCHEMAS_DIR",
    "RUN_CONFIG_SCHEMA",
    "DEFAULTS",
    "T_END",
    "SINGULAR_EVENT",
    "BLOW_UP",
    "STEP_UNDERFLOW",
    "TERMINATION_REASONS",
    "SIDE_A2_TO_ZERO",
    "SIDE_A1_BLOWUP",
    "SIDE_A1_TO_ZERO",
    "SIDE_BOTH",
    "EXIT_OK",
    "EXIT_VALIDATION",
    "EXIT_NUMERICAL",
]

PKG_NAME = "ricciode"

# integrator
EPS_SING = 1e-9
TOL_MIN = 1e-14
TOL_MAX = 1e-3
MAX_STEPS = 1_000_000

# termination reasons
T_END = "t_end"
SINGULAR_EVENT = "singular_event"
BLOW_UP = "blow_up"
STEP_UNDERFLOW = "step_underflow"
TERMINATION_REASONS = [T_END, SINGULAR_EVENT, BLOW_UP, STEP_UNDERFLOW]

# singular event sides
SIDE_A2_TO_ZERO = "a2_to_zero"
SIDE_A1_BLOWUP = "a1_blowup"
SIDE_A1_TO_ZERO = "a1_to_zero"
SIDE_BOTH = "both"

# slope within this distance of 0 or 1 counts as exactly that
UNIT_RATE_TOL = 0.05

# closed forms pass verification below these
ODE_RESIDUAL_TOL = 1e-12
RICCI_RESIDUAL_TOL = 1e-9

# closed-form metrics, as named on the command line
TAUB_NUT = "taub-nut"
EGUCHI_HANSON = "eguchi-hanson"
FUBINI_STUDY = "fubini-study"
FUBINI_STUDY_HYPERBOLIC = "fubini-study-hyperbolic"
CASE3 = "case3"
FLAT_CONE = "flat-cone"
FORM_NAMES = [TAUB_NUT, EGUCHI_HANSON, FUBINI_STUDY, FUBINI_STUDY_HYPERBOLIC, CASE3, FLAT_CONE]

# output
FORMATS = ["json", "csv", "table"]
FLOAT_FORMAT = "%.17g"
TRAJECTORY_COLUMNS = ["t", "A1", "A2", "x", "ric00", "ric11", "ric22", "scalar"]
CATALOG_COLUMNS = [
    "coord",
    "t",
    "A1",
    "A2",
    "ric00",
    "ric11",
    "ric22",
    "scalar",
    "res1",
    "res2",
]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

SCHEMAS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "schemas")
RUN_CONFIG_SCHEMA = os.path.join(SCHEMAS_DIR, "run_config_schema.yaml")

# values used when neither the command line nor the config file sets an option
DEFAULTS = {
    "format": "json",
    "output": None,
    "bound": 3,
    "workers": 1,
    "points": 100,
    "tol": 1e-10,
    "t0": 0.0,
    "window_decades": 4.0,
    "window_upper": 1e-2,
    "leading_only": False,
}
