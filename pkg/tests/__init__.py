"""Unit test package for auxcheck."""
import logging
import os

from auxcheck.utils.logging_utils import LOG_FORMAT

log_dir = os.path.join(os.path.dirname(__file__), "..", "logs")
log_file = os.path.join(log_dir, "test_log.log")
os.makedirs(log_dir, exist_ok=True)

# exploration progress and verdicts of every test land in one file, rewritten per run
logging.basicConfig(filename=log_file, filemode="w", level=logging.INFO, format=LOG_FORMAT)

logger = logging.getLogger(__name__)
logger.info("Logging initialized. Test execution started.")
