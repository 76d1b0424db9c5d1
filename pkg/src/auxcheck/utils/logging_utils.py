import logging
import os

LOG_FORMAT = "%(asctime)s - %(name)s - %(threadName)s - %(levelname)s - %(message)s"


def setup_logging(log_file: str | os.PathLike[str] = "auxcheck.log", log_level: int = logging.INFO,
                  console: bool = True) -> None:
    """
    Send log records to ``log_file`` and, with ``console``, to stderr.
    Worker threads are named in each record.
    """
    handlers: list[logging.Handler] = [logging.FileHandler(log_file)]
    if console:
        handlers.append(logging.StreamHandler())
    logging.basicConfig(level=log_level, format=LOG_FORMAT, handlers=handlers)
