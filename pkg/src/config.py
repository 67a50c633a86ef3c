import logging
import math
import os

# --- Integration ---
REL_TOL = 1e-10
ABS_TOL = 1e-12
ANCHORED_ABS_TOL = 1e-20  # x - arm and u after an arm restart
ENERGY_TOLERANCE = 1e-8
MAX_STEP = 0.05
SIGMA_BUDGET = 400.0
MAX_ARM_PASSES = 60
INTEGRATOR_METHOD = "RK45"  # Dormand-Prince 5(4), quartic dense output

# --- Branch tracing ---
SEED_EPSILON = 1e-6
ARM_PROXIMITY = 1e-6
CAPTURE_RADIUS = 1e-6
ESCAPE_MARGIN = 1.0
SADDLE_TOLERANCE = 1e-8
BOUNDARY_MARGIN = 1e-14
CONSTRAINT_FACTOR = 10.0
SINGULAR_GUARD = 1e-10

# --- Root finding ---
ANGLE_TOL = 1e-12
ALPHA_XTOL = 1e-8
ALPHA_STAR_BRACKET = (1.4, 1.7)
ALPHA0_STAR_BRACKET = (1.01, 1.46136)
MONOTONE_GRID = 20

# --- Bounds ---
REPORT_TOLERANCE = 5e-3
QUAD_ABS_TOL = 1e-10
QUAD_AGREEMENT = 1e-8
ENVELOPE_GRID = 1000
HOMOGENEOUS_LIMIT_ALPHA = 1e-6
BETA_GRID = 26  # samples of beta in (0, 1/2] for bounds uniform in beta

# --- Geometry ---
THETA_C = math.atan(1.0 / math.sqrt(2.0))

# --- Output ---
SIG_DIGITS = 12
SVG_HASH_SALT = "dihedral4"
PNG_MAX_SIZE = (1600, 1200)
PORTRAIT_SIZE = (8.0, 5.0)
PORTRAIT_DPI = 150

# --- Exit codes ---
EXIT_OK = 0
EXIT_NUMERICAL = 2
EXIT_USAGE = 64

# --- Concurrency ---
def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        logging.getLogger(__name__).warning(f"Ignoring {name}={raw!r}: not an integer, using {default}")
        return default


MAX_THREADS = max(1, _env_int("D4_THREADS", 1))

# --- Logging ---
LOG_LEVEL = getattr(logging, os.getenv("D4_LOG_LEVEL", "INFO").upper(), logging.INFO)
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_DIR = os.getenv("D4_LOG_DIR")  # unset: no log files
