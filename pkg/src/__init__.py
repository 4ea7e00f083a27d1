import logging

from . import config

# Set up logging; reports go to stdout, logs to stderr
logging.basicConfig(
    level=getattr(logging, config.LOG_LEVEL, logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
)
logger = logging.getLogger(__name__)


def run(argv=None) -> int:
    from .commands import main
    logger.debug("Starting quadzeta...")
    try:
        return main(argv)
    except Exception as e:
        logger.error(f"quadzeta failed: {e}", exc_info=True)
        return 1
