import json
import logging
import sys
import time
from logging import LogRecord
from typing import TextIO

# Attributes every LogRecord carries; anything else arrived through ``extra=``.
_RECORD_ATTRS = frozenset(vars(logging.makeLogRecord({}))) | {"message", "asctime"}


class JsonFormatter(logging.Formatter):
    """Custom JSON formatter for log records.

    Fields passed through the 'extra' dictionary are copied onto the output, e.g.:

    >>> logger.info("built matrix", extra={"elapsed_ms": 12.5})
    """

    def format(self, record: LogRecord) -> str:
        base = {
            "ts": int(time.time()),
            "level": record.levelname,
            "logger": record.name,
            "msg": record.getMessage(),
        }

        if record.exc_info:
            base["exc_info"] = self.formatException(record.exc_info)
        for key, value in vars(record).items():
            if key not in _RECORD_ATTRS and value is not None:
                base[key] = value

        return json.dumps(base, ensure_ascii=False, default=str)


class RunIdFilter(logging.Filter):
    """Stamps the invocation's run id onto every record."""

    def __init__(self, run_id: str) -> None:
        """Remember the run id."""
        super().__init__()
        self.run_id = run_id

    def filter(self, record: LogRecord) -> bool:
        """Attach the run id and keep the record."""
        record.run_id = self.run_id
        return True


def setup_json_logging(
    level: int = logging.INFO,
    run_id: str | None = None,
    stream: TextIO | None = None,
) -> None:
    # stdout carries command output
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(JsonFormatter())
    if run_id is not None:
        handler.addFilter(RunIdFilter(run_id))
    root = logging.getLogger()
    root.setLevel(level)
    root.handlers[:] = [handler]
