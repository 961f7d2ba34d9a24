import logging
from typing import Optional

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


def setup_logging(level: str = "INFO", log_file: Optional[str] = None) -> None:
    """Send log records to stderr and, optionally, to a file. Calling it again replaces the handlers."""
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_mimo_mcmc", False):
            root.removeHandler(handler)

    handlers = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file, mode="a"))
    formatter = logging.Formatter(LOG_FORMAT)
    for handler in handlers:
        handler.setFormatter(formatter)
        handler._mimo_mcmc = True
        root.addHandler(handler)
    root.setLevel(level.upper())
