import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar

from krsp_solver.config import settings

_solve_label: ContextVar[str] = ContextVar("krsp_solve_label", default="-")

LOG_FORMAT = "%(asctime)s %(levelname)s [%(solve)s] %(name)s: %(message)s"


class SolveContextFilter(logging.Filter):
    """Stamps every record with the label of the solve it belongs to.

    The label lives in a context variable so bench workers and tool calls
    running side by side keep their output apart.
    """

    def filter(self, record: logging.LogRecord) -> bool:
        if not hasattr(record, "solve"):
            record.solve = _solve_label.get()
        return True


@contextmanager
def solve_scope(label: str) -> Iterator[None]:
    """Tag log records emitted inside the block with ``label``."""
    token = _solve_label.set(label)
    try:
        yield
    finally:
        _solve_label.reset(token)


def current_solve_label() -> str:
    return _solve_label.get()


def setup_logging(level: str | None = None):
    """Configure logging to stderr with the solve-context filter."""
    root_logger = logging.getLogger()
    root_logger.setLevel((level or settings.log_level).upper())

    # If handlers already exist, just add the filter to them
    if root_logger.handlers:
        for handler in root_logger.handlers:
            if not any(isinstance(f, SolveContextFilter) for f in handler.filters):
                handler.addFilter(SolveContextFilter())
    else:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler.addFilter(SolveContextFilter())
        root_logger.addHandler(handler)
