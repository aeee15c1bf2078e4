# config.py

DEFAULT_SAMPLES = 2000  # PMP verification grid over [0, tf]
DEFAULT_SAMPLES_PER_SEGMENT = 200  # used by evolve
DEFAULT_TOL_PHI = 1e-6
DEFAULT_TOL_HC = 1e-6
DEFAULT_CELLS = 200  # used by grad-opt
DEFAULT_MAX_ITER = 1000
DEFAULT_MULTIBANG_N = 2
DEFAULT_ARC_SAMPLES = 361
OUTPUT_DIR = "output"
