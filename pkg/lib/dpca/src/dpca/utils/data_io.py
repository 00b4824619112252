"""
Data I/O Utility Functions

Provides functions for reading and writing the file formats used by the
library: JSON documents, JSON Lines records and tabular outputs.
"""

from collections.abc import Iterable, Iterator
import json
from pathlib import Path
from typing import Any

import pandas as pd

from dpca.errors import CorpusFormatError


def save_json(
    data: dict[str, Any] | list[Any],
    filepath: str | Path,
    indent: int = 2,
    ensure_ascii: bool = False,
) -> Path:
    """
    Write model files and run manifests as indented JSON.

    Floats are written with Python's shortest round-trip repr, so reloading
    reproduces them exactly and equal inputs give byte-identical files.

    Raises:
        ValueError: data holds NaN or infinity
    """
    filepath = Path(filepath)

    with open(filepath, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=indent, ensure_ascii=ensure_ascii, allow_nan=False)
        f.write("\n")

    return filepath


def load_json(filepath: str | Path) -> dict[str, Any] | list[Any]:
    """
    Load data from a JSON file.

    Raises:
        FileNotFoundError: If file doesn't exist
        json.JSONDecodeError: If the content is not valid JSON
    """
    filepath = Path(filepath)

    if not filepath.exists():
        raise FileNotFoundError(f"File not found: {filepath}")

    with open(filepath, "r", encoding="utf-8") as f:
        return json.load(f)


def read_jsonl(filepath: str | Path) -> Iterator[tuple[int, dict[str, Any]]]:
    """
    Iterate over a JSON Lines file, yielding (1-based line number, object).

    Blank lines are skipped. Malformed lines raise CorpusFormatError naming
    the line number.
    """
    filepath = Path(filepath)

    if not filepath.exists():
        raise FileNotFoundError(f"File not found: {filepath}")

    with open(filepath, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as err:
                raise CorpusFormatError(f"Invalid JSON: {err.msg}", line_number) from err
            if not isinstance(record, dict):
                raise CorpusFormatError("Record must be a JSON object", line_number)
            yield line_number, record


def write_jsonl(records: Iterable[dict[str, Any]], filepath: str | Path) -> Path:
    """Write one compact JSON object per line."""
    filepath = Path(filepath)

    with open(filepath, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False, allow_nan=False))
            f.write("\n")

    return filepath


def save_dataframe(
    df: pd.DataFrame, filepath: str | Path, index: bool = False, **kwargs
) -> Path:
    """
    Save DataFrame to file based on extension.

    Args:
        df: pandas DataFrame to save
        filepath: Output path (.tsv, .csv, .xlsx, .xls or .json)
        index: Whether to include row index (default: False)
        **kwargs: Additional arguments passed to pandas save method

    Returns:
        Path to saved file
    """
    filepath = Path(filepath)
    suffix = filepath.suffix.lower()
    if suffix == ".tsv":
        df.to_csv(filepath, sep="\t", index=index, **kwargs)
    elif suffix in [".xlsx", ".xls"]:
        df.to_excel(filepath, index=index, **kwargs)
    elif suffix == ".csv":
        df.to_csv(filepath, index=index, **kwargs)
    elif suffix == ".json":
        df.to_json(filepath, orient="records", **kwargs)
    else:
        raise ValueError(
            f"Unsupported file format: {suffix}. Use .tsv, .csv, .xlsx, .xls, or .json"
        )
    return filepath
