import logging
import json
import time
import uuid
from datetime import datetime, timezone
from typing import Any, Dict, Optional
from contextvars import ContextVar
from functools import wraps

# Per-run data: run id, subcommand, and the stack of decorated calls
run_context: ContextVar[Dict[str, Any]] = ContextVar('run_context', default={})


class StructuredLogger:
    """JSON-lines logger; every record carries the current run's id and subcommand."""

    def __init__(self, name: str):
        self.logger = logging.getLogger(name)

    def _record(self, level: int, message: str, **fields) -> None:
        if not self.logger.isEnabledFor(level):
            return
        context = run_context.get()
        record = {
            'timestamp': datetime.now(timezone.utc).isoformat(),
            'level': logging.getLevelName(level),
            'logger': self.logger.name,
            'message': message,
            'run_id': context.get('run_id'),
            'subcommand': context.get('subcommand'),
        }
        record.update(fields)
        self.logger.log(level, json.dumps(record, default=str))

    def debug(self, message: str, **fields):
        self._record(logging.DEBUG, message, **fields)

    def info(self, message: str, **fields):
        self._record(logging.INFO, message, **fields)

    def warning(self, message: str, **fields):
        self._record(logging.WARNING, message, **fields)

    def error(self, message: str, error: Optional[Exception] = None, **fields):
        if error is not None:
            fields = {'error_type': type(error).__name__, 'error_message': str(error), **fields}
        self._record(logging.ERROR, message, **fields)


def with_logging(func):
    """
    Log start, completion and failure of `func` with its wall time.

    The outermost decorated call opens a run context, named after the
    `subcommand` of its first argument when that is a RunConfig; nested
    calls (scans, BFS) log inside the same run.
    """
    logger = StructuredLogger(func.__module__)

    @wraps(func)
    def wrapper(*args, **kwargs):
        outer = run_context.get()
        if outer:
            context = {**outer, 'depth': outer.get('depth', 0) + 1}
        else:
            config = kwargs.get('config') or (args[0] if args else None)
            context = {
                'run_id': uuid.uuid4().hex[:12],
                'subcommand': getattr(config, 'subcommand', None) or func.__name__,
                'depth': 0,
            }
        token = run_context.set(context)
        started = time.perf_counter()
        try:
            logger.debug("enter", function=func.__qualname__, depth=context['depth'])
            result = func(*args, **kwargs)
            logger.info("done", function=func.__qualname__,
                        elapsed_ms=round((time.perf_counter() - started) * 1000, 3))
            return result
        except Exception as e:
            logger.error("failed", error=e, function=func.__qualname__)
            raise
        finally:
            run_context.reset(token)

    return wrapper
