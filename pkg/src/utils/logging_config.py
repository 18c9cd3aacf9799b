import os
import sys
import logging
from logging.handlers import RotatingFileHandler
from contextvars import ContextVar
from typing import Optional

from src.core.config import LOG_DIR, LOG_FILE, LOG_LEVEL

# ContextVars to store metadata for the current run
run_id_ctx: ContextVar[str] = ContextVar("run_id", default="SYSTEM")
command_ctx: ContextVar[str] = ContextVar("command", default="-")


class RunContextFilter(logging.Filter):
    """
    Injects the Run ID and command name into the log record from context variables.
    """
    def filter(self, record):
        record.run_id = run_id_ctx.get()
        record.command = command_ctx.get()
        return True


def setup_logging(log_dir: Optional[str] = None, log_file: Optional[str] = None, level: Optional[str] = None):
    """
    Configures the root logger with File and Console handlers.
    Strictly standardizes format and applies run-context filtering.
    """
    log_dir = log_dir or LOG_DIR
    log_file = log_file or LOG_FILE
    os.makedirs(log_dir, exist_ok=True)
    log_path = os.path.join(log_dir, log_file)

    # Standard Format: [Time] [Level] [Module] [Run: ID] [Cmd: name] - Message
    formatter = logging.Formatter(
        "[%(asctime)s] [%(levelname)s] [%(name)s] [Run: %(run_id)s] [Cmd: %(command)s] - %(message)s"
    )

    # Instantiate Filters
    run_filter = RunContextFilter()

    # 1. File Handler (Rotating)
    file_handler = RotatingFileHandler(
        log_path,
        maxBytes=10*1024*1024, # 10MB
        backupCount=5
    )
    file_handler.setFormatter(formatter)
    file_handler.addFilter(run_filter)

    # 2. Console Handler
    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setFormatter(formatter)
    console_handler.addFilter(run_filter)

    # Configure Root Logger
    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, (level or LOG_LEVEL).upper(), logging.INFO))

    # Remove handlers from earlier invocations to avoid duplicates
    for handler in list(root_logger.handlers):
        if any(isinstance(f, RunContextFilter) for f in handler.filters):
            root_logger.removeHandler(handler)
            handler.close()

    root_logger.addHandler(file_handler)
    root_logger.addHandler(console_handler)


def get_logger(name: str) -> logging.Logger:
    """
    Returns a module logger. Context filters live on the root handlers
    installed by setup_logging.
    """
    return logging.getLogger(name)
