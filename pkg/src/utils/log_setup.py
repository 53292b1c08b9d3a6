"""
Logging configuration shared by the CLI and the experiment runner.
"""
import logging

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str = "INFO") -> None:
    """Install one stream handler on the package logger at the given level."""
    package_logger = logging.getLogger("src")
    package_logger.setLevel(level.upper())
    if not any(getattr(h, "_source_locator", False) for h in package_logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._source_locator = True
        package_logger.addHandler(handler)
