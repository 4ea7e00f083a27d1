import os
import logging
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

# Load environment variables
load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name, str(default)).strip()
    # Remove inline comments if present
    if '#' in raw:
        raw = raw.split('#')[0].strip()
    try:
        return int(raw.replace('_', ''))
    except ValueError:
        logger.error(f"{name} must be an integer, got {raw!r}")
        raise ValueError(f"Invalid integer for {name}: {raw!r}")


# Exact evaluation
C_CAP = _int_env('QUADZETA_C_CAP', 10_000_000)
DEFAULT_METHOD = os.getenv('QUADZETA_METHOD', 'both').strip().lower()

# Numeric oracle
DEFAULT_TERMS = _int_env('QUADZETA_TERMS', 100_000)
DEFAULT_PREC_BITS = _int_env('QUADZETA_PREC_BITS', 128)
WORKERS = _int_env('QUADZETA_WORKERS', 1)
DECIMAL_DIGITS = _int_env('QUADZETA_DECIMAL_DIGITS', 30)

# k = 1 sits on the boundary of absolute convergence, so the oracle is only trusted loosely there
TOLERANCE_CONDITIONAL = 5e-2
TOLERANCE_ABSOLUTE = 1e-6

LOG_LEVEL = os.getenv('QUADZETA_LOG_LEVEL', 'INFO').strip().upper()

if DEFAULT_METHOD not in ('arakawa', 'lrr', 'both'):
    logger.warning(f"Unknown QUADZETA_METHOD: {DEFAULT_METHOD}. Defaulting to both.")
    DEFAULT_METHOD = 'both'
