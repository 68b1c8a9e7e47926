import os
import sys
import time
from collections import defaultdict
from contextlib import contextmanager
from typing import Iterator

import numpy as np

# Global variables to toggle logging
LOG_ENABLED = True
LOG_TO_FILE = False
LOG_FILE_PATH = os.path.join(os.getcwd(), "ldp_extrema.log")


class Logger:
    """Collects wall-clock latencies per key, e.g. per Monte Carlo chunk."""

    def __init__(self) -> None:
        self._latency_dict = defaultdict(list)

    def log(self, latency: float, key: str) -> None:
        self._latency_dict[key].append(latency)

    @contextmanager
    def timed(self, key: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.log(time.perf_counter() - start, key)

    def _get_mean_latency(self, key: str) -> tuple[float, float]:
        latency_array = np.array(self._latency_dict[key])
        if latency_array.size == 0:
            return 0.0, 0.0
        return float(latency_array.mean()), float(latency_array.std())

    def get_results(self, key: str) -> dict[str, float]:
        mean_latency, std_latency = self._get_mean_latency(key)
        return {
            "count": len(self._latency_dict[key]),
            "mean_latency": mean_latency,
            "std_latency": std_latency,
            "total_latency": float(np.sum(self._latency_dict[key])),
        }


def enable_logging(enable=True):
    """Toggle logging on or off based on the given argument."""
    global LOG_ENABLED
    LOG_ENABLED = enable


def enable_logging_to_file(enable=True, path: str | None = None):
    """Toggle logging to file; the file is created on first enable."""
    global LOG_TO_FILE, LOG_FILE_PATH
    LOG_TO_FILE = enable
    if path is not None:
        LOG_FILE_PATH = path
    if enable and not os.path.exists(LOG_FILE_PATH):
        with open(LOG_FILE_PATH, "w"):
            pass


def log(*args, block=False, **kwargs):
    """Print the given message to stderr only if logging is enabled.

    Standard output is reserved for result tables.
    """
    if LOG_ENABLED:
        if block:
            print("=" * 80, file=sys.stderr)
        print(*args, **kwargs, file=sys.stderr)
        if block:
            print("=" * 80, file=sys.stderr)
    if LOG_TO_FILE:
        with open(LOG_FILE_PATH, "a") as f:
            if block:
                print("=" * 80, file=f)
            print(*args, **kwargs, file=f)
            if block:
                print("=" * 80, file=f)
