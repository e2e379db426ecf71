from dotenv import load_dotenv
import os

load_dotenv()

# Sampling
DEFAULT_SEED = 42
DEFAULT_N = 1_000_000
CHUNK_SIZE = 2 ** 16  # samples per counter block
DEFAULT_SAMPLER = 'direct'
DEFAULT_WORKERS = 1

# Numerical tolerances
CLASSIFY_TOLERANCE = 1e-10  # relative to max side squared
RESIDUAL_LIMIT = 1e-9
RESIDUAL_FLOOR = 1e-6  # relative to the largest target component
QUAD_ABS_TOLERANCE = 1e-10
QUAD_SINGULAR_TOLERANCE = 1e-8
BISECTOR_TOLERANCE = 1e-10
BISECTOR_MAX_ITER = 10_000

# Cross-validation
AGREEMENT_SIGMAS = 4.0
EXPERIMENTAL_TOLERANCE = 0.003
QUAD_AGREEMENT_FLOOR = 1e-12

# Plots
OUTPUT_DIR = os.getenv('BROKEN_STICK_OUTPUT_DIR', 'plots')
DEFAULT_RESOLUTION = 512
MIN_RESOLUTION = 64
MAX_RESOLUTION = 4096

# Integer search
MAX_INTEGER_LIMIT = 10_000

# Reports
SCHEMA_VERSION = 1
LOG_LEVEL = os.getenv('BROKEN_STICK_LOG_LEVEL', 'WARNING')


def get_default_seed() -> int:
    """Seed from the environment at call time, falling back to DEFAULT_SEED."""
    value = os.getenv('BROKEN_STICK_SEED')
    if value is None or value.strip() == '':
        return DEFAULT_SEED
    return int(value)
