"""
Sweep scheduler: evaluates parameter points concurrently, returns them in order.
"""

import asyncio
import time
from typing import Any, Callable, List, Optional, Sequence

from .config import get_settings
from .errors import SweepPointError
from .logger import get_logger


class SweepScheduler:
    """Runs one callable per sweep value on worker threads with bounded concurrency."""

    def __init__(self, max_workers: Optional[int] = None):
        self.max_workers = max_workers or get_settings().max_workers
        self.logger = get_logger()

    async def _evaluate(self, semaphore: asyncio.Semaphore, value: float,
                        func: Callable[[float], Any]) -> Any:
        async with semaphore:
            return await asyncio.to_thread(func, value)

    async def run_async(self, values: Sequence[float], func: Callable[[float], Any]) -> List[Any]:
        """Evaluate func at every value; results follow the order of values."""
        self.logger.log_event("sweep_started", {"points": len(values), "max_workers": self.max_workers},
                              "scheduler")
        start = time.perf_counter()
        semaphore = asyncio.Semaphore(self.max_workers)
        results = await asyncio.gather(
            *(self._evaluate(semaphore, v, func) for v in values),
            return_exceptions=True,
        )

        for index, (value, result) in enumerate(zip(values, results)):
            if isinstance(result, BaseException):
                error = SweepPointError(index, float(value), result)
                self.logger.log_error(str(error), "scheduler", result)
                raise error from result

        self.logger.log_performance("sweep_seconds", time.perf_counter() - start, "scheduler")
        self.logger.log_event("sweep_finished", {"points": len(values)}, "scheduler")
        return list(results)

    def run(self, values: Sequence[float], func: Callable[[float], Any]) -> List[Any]:
        """Evaluate every value and return the results in input order."""
        return asyncio.run(self.run_async(values, func))
