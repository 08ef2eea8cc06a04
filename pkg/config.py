"""
Configuration settings for the semigroup contour-quadrature toolkit.
"""

VERSION = "1.0.0"

# Logging
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
LOG_LEVELS = {0: "WARNING", 1: "INFO", 2: "DEBUG"}

# CSV output
CSV_FLOAT_FORMAT = "%.12e"
CSV_HEADER_PREFIX = "# semigroup-contour"

# Output
DEFAULT_OUTPUT_DIRECTORY = "results"

# Exit codes
EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3

# Contour assembly guardrails
IMAG_TOLERANCE = 1e-8       # relative size of discarded imaginary part
RESIDUAL_CEILING = 1e-8     # per-node residual above this is a warning

# Parameter selection
DEFAULT_MAX_NODES = 10**7
NODE_GROWTH = 1.25
GOLDEN_RTOL = 1e-6
SPACING_BRACKET = (1e-4, 10.0)  # multiples of delta
SPACING_GRID_POINTS = 100

# Spectral backends
CHOP_TOLERANCE = 1e-13      # relative to the largest Chebyshev coefficient

# Contour-cost study: start of the degree ladder, then doubling up to the cap
COST_LADDER = [8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256, 384, 512]
COST_MAX_DEGREE = 2048
COST_PROFILE_DEGREE = 512
COST_FINE_POINTS = 2049
PROFILE_POINTS = 401

# Required keys per config section
REQUIRED_KEYS = {
    "experiment": ["example"],
    "scheme": ["m", "delta"],
}

# Keys accepted in each section (anything else is a typo)
KNOWN_KEYS = {
    "experiment": ["example"],
    "scheme": ["m", "delta", "h", "n", "epsilon", "t_max", "pole_offset",
               "strategy", "M", "symmetry"],
    "discretization": ["resolution", "half_width"],
    "sweep": ["kind", "n_values", "a_values", "m_values", "t", "t_points",
              "graph_norm", "norm_model", "epsilons", "deltas", "error_floor",
              "tolerances", "profile_deltas", "max_degree"],
    "output": ["directory", "checkpoint", "solution"],
}

# Default settings per numerical example
EXAMPLE_PRESETS = {
    1: {
        "dim": 1,
        "m": 6,
        "delta": 2.0,
        "n": 80,
        "t_max": 1.0,
        "resolution": 64,
        "half_width": 1.0,
    },
    2: {
        "dim": 1,
        "m": 6,
        "delta": 5.0,
        "n": 500,
        "t_max": 1.0,
        "resolution": 128,
        "half_width": 1.0,
    },
    3: {
        "dim": 2,
        "m": 10,
        "delta": 4.0,
        "n": 194,
        # spacing from the discretization half of this budget
        "h": "auto",
        "epsilon": 1.6e-2,
        "t_max": 2.0,
        "resolution": 201,
        "half_width": 3.0,
    },
    4: {
        "dim": 2,
        "m": 4,
        "delta": 16.0,
        "n": 97,
        "t_max": 0.2,
        "resolution": 251,
        "half_width": 1.0,
    },
}

# Sweep defaults for the bound and convergence sweeps
BOUND_SWEEP_N = [10, 20, 50, 100, 200, 400, 800]
POLE_SWEEP_N = [100, 200, 400, 800]
CONVERGENCE_ORDERS = [2, 4, 6, 8]
POLE_SWEEP_A = [0.25 * i for i in range(1, 41)]
PLAN_SWEEP_EPSILONS = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8]
COST_DELTAS = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0]
CONVERGENCE_N = [10, 14, 20, 28, 40, 56, 80, 113, 160]
CONVERGENCE_N_LONG = [10, 14, 20, 28, 40, 56, 80, 113, 160, 226, 320, 400, 500]
PLAN_SWEEP_MAX_NODES = 10**10  # node cap for bound-only sweeps
