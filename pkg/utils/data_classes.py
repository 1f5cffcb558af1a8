from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from .config import FLOAT_TOLERANCE, MIN_TOLERANCE, WORKER_THREADS
from .error_handler import UsageError

BACKENDS = ("exact", "float")
OUTPUT_FORMATS = ("json", "csv", "table", "dot")


@dataclass(frozen=True)
class GridAxis:
    """One axis of a scan grid, written start:stop:count on the command line"""
    start: float
    stop: float
    count: int

    @classmethod
    def parse(cls, text: str) -> "GridAxis":
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(detail=f"grid axis '{text}' is not start:stop:count")
        try:
            axis = cls(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError:
            raise UsageError(detail=f"grid axis '{text}' is not start:stop:count") from None
        if axis.count < 1:
            raise UsageError(detail=f"grid axis '{text}' needs a positive count")
        return axis

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass
class RunConfig:
    """Context for one CLI invocation"""
    subcommand: str
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    depth: Optional[int] = None
    grid: Optional[List[GridAxis]] = None
    tolerance: float = FLOAT_TOLERANCE
    backend: str = "exact"
    threads: int = WORKER_THREADS
    output_format: str = "json"
    options: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise UsageError(detail=f"unknown backend '{self.backend}'")
        if self.output_format not in OUTPUT_FORMATS:
            raise UsageError(detail=f"unknown output format '{self.output_format}'")
        if not self.tolerance >= MIN_TOLERANCE:
            raise UsageError(detail=f"tolerance {self.tolerance} is below {MIN_TOLERANCE:.3e}")
        if self.threads < 1:
            raise UsageError(detail="--threads must be at least 1")
        if self.depth is not None and self.depth < 0:
            raise UsageError(detail="--depth must be non-negative")

    def option(self, name: str, default: Any = None) -> Any:
        return self.options.get(name, default)
