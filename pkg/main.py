import logging
from auxcheck.utils.logging_utils import setup_logging
from auxcheck.cli import app

setup_logging()
logging.getLogger(__name__).info("auxcheck package initialized.")

if __name__ == "__main__":
    app()
