import os

from dotenv import load_dotenv

load_dotenv()

# Output settings
OUTPUT_DIR = os.getenv('FITBO_OUTPUT_DIR', 'results')
SCHEMA_VERSION = 1

# Hyperparameter sampling
DEFAULT_SAMPLES = 200  # M per BO iteration
DEFAULT_BURN_IN = 100
DEFAULT_THIN = 2

# Acquisition and recommendation optimiser
DEFAULT_ACQ_BUDGET = 2000

# BO protocol
DEFAULT_ITERS = 80
DEFAULT_INIT = {'branin': 3, 'eggholder': 3, 'hartmann6': 9}
FALLBACK_INIT = 3
DEFAULT_NOISE_STD = 1e-3 ** 0.5
DEFAULT_ACQ = ('fitbo',)
DEFAULT_SEED = 0

# Repetitions
DESK_REPS = 20
FULL_REPS = 40
FULL_RUNTIME_REPS = 100

# Runtime sweep
RUNTIME_OBSERVATIONS = 10
RUNTIME_TEST_POINTS = 100
RUNTIME_ACQ = ('fitbo', 'fitbo_mm', 'ei', 'pi', 'ucb')
RUNTIME_M_LIST = (100, 300, 500, 700, 900)
RUNTIME_D_LIST = (2, 4, 6, 8, 10)
RUNTIME_FIXED_M = 400
RUNTIME_FIXED_D = 2

# Worker pool
DEFAULT_WORKERS = min(4, os.cpu_count() or 1)

# Exit code for aborted runs; click exits with 2 on usage errors
EXIT_FAILURE = 3
