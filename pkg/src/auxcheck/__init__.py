"""Top-level package for auxcheck."""
import logging

# Configuring package-wide logger
logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)

__author__ = """auxcheck maintainers"""
__version__ = '0.1.0'
