"""Reading and validating the simulator's CSV interchange files.

The contract: an optional leading ``#`` comment line, a header row of
column names, then comma-separated floating-point rows.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


class CsvValidationError(ValueError):
    """A CSV file is missing, malformed, or lacks a required column."""


def read_table(path: str | Path) -> dict[str, np.ndarray]:
    """Load a simulator CSV into a column-name -> float-array mapping.

    Raises
    ------
    CsvValidationError
        If the file is absent, has no header, or contains non-numeric data.
    """
    path = Path(path)
    if not path.is_file():
        raise CsvValidationError(f"input CSV not found: {path}")
    with path.open() as handle:
        lines = [line for line in handle if line.strip() and not line.startswith("#")]
    if not lines:
        raise CsvValidationError(f"{path}: no header row")
    names = [name.strip() for name in lines[0].split(",")]
    if any(not name for name in names):
        raise CsvValidationError(f"{path}: empty column name in header")
    try:
        data = np.loadtxt(lines[1:], delimiter=",", ndmin=2)
    except ValueError as exc:
        raise CsvValidationError(f"{path}: non-numeric data ({exc})") from exc
    if data.size and data.shape[1] != len(names):
        raise CsvValidationError(
            f"{path}: {data.shape[1]} data columns for {len(names)} header names"
        )
    if data.size == 0:
        raise CsvValidationError(f"{path}: no data rows")
    return {name: data[:, i] for i, name in enumerate(names)}


def require_columns(
    table: dict[str, np.ndarray], needed: list[str], path: str | Path
) -> None:
    """Raise a CsvValidationError naming the first missing column."""
    for name in needed:
        if name not in table:
            raise CsvValidationError(f"{path}: missing required column '{name}'")


def columns_matching(table: dict[str, np.ndarray], prefix: str) -> list[str]:
    """Column names starting with a prefix, in file order."""
    return [name for name in table if name.startswith(prefix)]
