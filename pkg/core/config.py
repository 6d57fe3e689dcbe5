import logging
import os
from dotenv import load_dotenv

load_dotenv()

class Settings:
    # --- Enumeration guards ---
    MAX_SUBSETS = int(os.getenv("BSA_MAX_SUBSETS", str(2 ** 20)))  # cap on 2^|E0| subset walks
    MAX_REWRITES = int(os.getenv("BSA_MAX_REWRITES", "1000000"))  # rewrite steps per nf call

    # --- Monoid word problem ---
    BFS_DEPTH = int(os.getenv("BSA_BFS_DEPTH", "12"))
    BFS_MAX_NODES = int(os.getenv("BSA_BFS_MAX_NODES", "200000"))  # per search side

    # --- CLI ---
    LOG_LEVEL = os.getenv("BSA_LOG_LEVEL", "WARNING").upper()
    FUZZY_CUTOFF = int(os.getenv("BSA_FUZZY_CUTOFF", "70"))  # rapidfuzz score for "did you mean"

# Instantiate settings object
settings = Settings()

# --- Guards (fail fast if misconfigured) ---
for _name in ("MAX_SUBSETS", "MAX_REWRITES", "BFS_DEPTH", "BFS_MAX_NODES"):
    if getattr(settings, _name) <= 0:
        raise RuntimeError(f"BSA_{_name} must be positive")
if not isinstance(logging.getLevelName(settings.LOG_LEVEL), int):
    raise RuntimeError(f"BSA_LOG_LEVEL '{settings.LOG_LEVEL}' is not a logging level")
if not 0 <= settings.FUZZY_CUTOFF <= 100:
    raise RuntimeError("BSA_FUZZY_CUTOFF must lie in 0..100")

# --- Other defaults ---
DEFAULT_MAX_LEN     = 4   # basis / analyze searches
DEFAULT_CONN_LEN    = 4   # connector search for quasi-cycles
DEFAULT_DIM_BOUND   = 3   # box for dimension-function samples
DEFAULT_ZD_MAX_LEN  = 4   # zero-divisor product search
GRAPH_SCHEMA_VERSION = 1
