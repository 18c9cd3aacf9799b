import os
from dotenv import load_dotenv

# Load env vars
load_dotenv()

# --- Configuration Constants ---

# Logging
LOG_DIR = os.getenv("DICKE_RBM_LOG_DIR", "logs")
LOG_FILE = os.getenv("DICKE_RBM_LOG_FILE", "dicke_rbm.log")
LOG_LEVEL = os.getenv("DICKE_RBM_LOG_LEVEL", "INFO").upper()

# Artifacts
OUTPUT_DIR = os.getenv("DICKE_RBM_OUTPUT_DIR", "outputs")

# Capacity guards (2^N blowup)
ENUMERATION_GUARD = int(os.getenv("DICKE_RBM_ENUMERATION_GUARD", 24))
STATE_VECTOR_GUARD = int(os.getenv("DICKE_RBM_STATE_VECTOR_GUARD", 20))
KL_GUARD = int(os.getenv("DICKE_RBM_KL_GUARD", 20))

# Basis states per streamed enumeration chunk
ENUMERATION_CHUNK = int(os.getenv("DICKE_RBM_ENUMERATION_CHUNK", 1 << 16))

# Slow acceptance tests
RUN_SLOW_TESTS = os.getenv("DICKE_RBM_SLOW_TESTS", "").lower() in ("1", "true", "yes")

# --- Helper Functions ---

def get_max_workers() -> int:
    """
    Returns the worker cap for parallel sections.
    Defaults to the CPU count if DICKE_RBM_MAX_WORKERS is not set.
    """
    # Priority:
    # 1. DICKE_RBM_MAX_WORKERS
    # 2. os.cpu_count()
    # 3. 1
    value = os.getenv("DICKE_RBM_MAX_WORKERS")
    if value:
        return max(1, int(value))
    return os.cpu_count() or 1

def get_output_dir() -> str:
    """
    Returns the default directory for command artifacts.
    """
    return OUTPUT_DIR.rstrip("/") or "."
