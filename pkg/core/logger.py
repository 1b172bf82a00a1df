"""
Unified structured logging for the bosonic memory channel toolkit.
"""

import json
import logging
import threading
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

from .config import get_settings


class ChannelLogger:
    """JSON event logger shared by the orchestration layers."""

    def __init__(self, log_file: Optional[str] = None, console_level: Optional[str] = None):
        settings = get_settings()
        self.log_file = Path(log_file or settings.log_file)
        self.log_file.parent.mkdir(parents=True, exist_ok=True)

        # one stdlib logger per log file
        name = "MemChannel" if log_file is None else f"MemChannel.{self.log_file.stem}"
        self.logger = logging.getLogger(name)
        self.logger.setLevel(logging.INFO)
        self.logger.propagate = False
        if not self.logger.handlers:
            formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
            file_handler = logging.FileHandler(self.log_file)
            file_handler.setFormatter(formatter)
            # stderr keeps stdout free for tables
            console_handler = logging.StreamHandler()
            console_handler.setLevel((console_level or settings.log_level).upper())
            console_handler.setFormatter(formatter)
            self.logger.addHandler(file_handler)
            self.logger.addHandler(console_handler)

        self._lock = threading.Lock()

    def log_event(self, event_type: str, data: Dict[str, Any], component: str = "system",
                  level: int = logging.INFO) -> None:
        """Log an event with structured data."""
        event = {
            "timestamp": datetime.now().isoformat(),
            "event_type": event_type,
            "component": component,
            "data": data,
        }
        with self._lock:
            self.logger.log(level, json.dumps(event, default=str))

    def log_error(self, error: str, component: str = "system", exception: Optional[Exception] = None) -> None:
        """Log an error."""
        self.log_event("error", {
            "error": error,
            "exception": repr(exception) if exception else None,
        }, component, level=logging.ERROR)

    def log_performance(self, metric: str, value: float, component: str = "system") -> None:
        """Log performance metrics."""
        self.log_event("performance", {"metric": metric, "value": value}, component)

    def log_check(self, name: str, deviation: float, threshold: float, passed: bool,
                  component: str = "verification") -> None:
        """Log the outcome of a numerical check."""
        self.log_event("check", {
            "name": name,
            "deviation": deviation,
            "threshold": threshold,
            "passed": passed,
        }, component, level=logging.INFO if passed else logging.WARNING)


# Global logger instance - lazy initialization
_logger_instance = None


def get_logger() -> ChannelLogger:
    """Get the global logger instance."""
    global _logger_instance
    if _logger_instance is None:
        _logger_instance = ChannelLogger()
    return _logger_instance
