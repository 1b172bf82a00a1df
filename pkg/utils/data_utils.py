"""
Data utilities for squeezing-matrix files and result tables.
"""

import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

import pandas as pd

from core.errors import InputValidationError
from core.spectral import SqueezingMatrix, load_squeezing_matrix
from core.state import REPORT_COLUMNS

SIGNIFICANT_DIGITS = 12
FLOAT_FORMAT = f"%.{SIGNIFICANT_DIGITS}g"


def read_squeezing_file(path: str) -> SqueezingMatrix:
    """Load a whitespace-separated squeezing matrix from disk."""
    filepath = Path(path)
    if not filepath.exists():
        raise InputValidationError(f"Squeezing matrix file {path} not found")
    return load_squeezing_matrix(filepath.read_text())


def _round(value: Any) -> Any:
    if isinstance(value, float) and math.isfinite(value):
        return float(f"{value:.{SIGNIFICANT_DIGITS}g}")
    return value


class TableWriter:
    """Serializes report records as CSV or JSON lines in a fixed column order."""

    def __init__(self, fmt: str = "csv", columns: Optional[List[str]] = None):
        if fmt not in ("csv", "jsonl"):
            raise InputValidationError(f"Unknown table format {fmt!r}; expected csv or jsonl")
        self.fmt = fmt
        self.columns = columns or REPORT_COLUMNS

    def to_frame(self, records: List[Dict[str, Any]]) -> pd.DataFrame:
        return pd.DataFrame(records, columns=self.columns)

    def render(self, records: List[Dict[str, Any]]) -> str:
        """Records as CSV or JSON-lines text."""
        if self.fmt == "csv":
            return self.to_frame(records).to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        lines = [
            json.dumps({column: _round(record[column]) for column in self.columns})
            for record in records
        ]
        return "".join(line + "\n" for line in lines)

    def write(self, records: List[Dict[str, Any]], out: Optional[str] = None,
              stream: Optional[TextIO] = None) -> None:
        """Write to `out`, or to `stream` (stdout by default) when no path is given."""
        text = self.render(records)
        if out:
            path = Path(out)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
        else:
            (stream or sys.stdout).write(text)


def read_table(path: str) -> pd.DataFrame:
    """Load a table written by TableWriter."""
    if path.endswith(".jsonl"):
        return pd.read_json(path, lines=True)
    return pd.read_csv(path)
