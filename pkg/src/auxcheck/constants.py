"""
Exploration limits
"""
DEFAULT_STATE_CAP = 10_000_000
DEFAULT_WORKERS = 1
DEFAULT_CHUNK_SIZE = 500
MIN_CHUNK_SIZE = 64
# Frontiers smaller than this are expanded inline, without the thread pool
MIN_PARALLEL_FRONTIER = 256

# Largest |Pi|^|Dom| enumerated when checking prophecy conditions
PROPHECY_ENUMERATION_CAP = 1_000_000

# Sizes of the refinement checker's caches
MAPPED_STATE_CACHE_SIZE = 200_000
HIGH_SUCCESSOR_CACHE_SIZE = 50_000
VALUE_KEY_CACHE_SIZE = 1 << 16

"""
Environment variables (read after dotenv.load_dotenv())
"""
ENV_STATE_CAP = "AUXCHECK_STATE_CAP"
ENV_WORKERS = "AUXCHECK_WORKERS"

"""
Auxiliary variable names
"""
HISTORY_VAR = "h"
PROPHECY_VAR = "p"
STUTTER_VAR = "s"

# Single-prediction prophecies use a one-element domain
SINGLE_PREDICTION_KEY = "on"

# Stutter record fields
STUTTER_ID = "id"
STUTTER_CTXT = "ctxt"
STUTTER_VAL = "val"

INIT_ACTION = "Init"

# Depth at which the closure of object states under Apply is cut off
OBJ_VALUES_MAX_DEPTH = 64
