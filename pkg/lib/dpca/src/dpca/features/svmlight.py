"""
SVMlight export.

Line format: `<label> <index>:<value> ...` with 1-based indices in ascending
order, values in shortest round-trip decimal and zero weights omitted.
String labels are mapped to 1..C in lexicographic order; the mapping goes to
a sidecar `<path>.labels.tsv`.
"""

from collections.abc import Iterable, Mapping
import math
from pathlib import Path
from typing import Optional

from dpca.errors import FeatureExportError
from dpca.features.construction import FeatureMatrix


def label_mapping(labels: Iterable[Optional[str]]) -> dict[str, int]:
    """Sorted distinct labels -> 1..C."""
    distinct = sorted({label for label in labels if label is not None})
    return {label: c for c, label in enumerate(distinct, 1)}


def format_row(label: int, row: Mapping[int, float]) -> str:
    parts = [str(label)]
    for j in sorted(row):
        value = float(row[j])
        if not math.isfinite(value):
            raise FeatureExportError(f"Feature {j} is not finite ({value})")
        if value != 0.0:
            parts.append(f"{j + 1}:{value!r}")
    return " ".join(parts)


def labels_path(filepath: str | Path) -> Path:
    filepath = Path(filepath)
    return filepath.with_name(filepath.name + ".labels.tsv")


def export_svmlight(
    matrix: FeatureMatrix,
    filepath: str | Path,
    label_map: Optional[Mapping[str, int]] = None,
) -> Path:
    """
    Write a feature matrix and its label sidecar.

    Raises:
        FeatureExportError: A row has no label (or one missing from
            label_map), or a value is not finite
    """
    if matrix.labels is None:
        raise FeatureExportError("SVMlight export needs a label for every row")
    label_map = dict(label_map) if label_map is not None else label_mapping(matrix.labels)

    lines = []
    for i, (label, row) in enumerate(zip(matrix.labels, matrix.rows)):
        if label is None or label not in label_map:
            raise FeatureExportError(f"Row {i} has no usable label ({label!r})")
        try:
            lines.append(format_row(label_map[label], row))
        except FeatureExportError as err:
            raise FeatureExportError(f"Row {i}: {err}") from err

    filepath = Path(filepath)
    filepath.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    labels_path(filepath).write_text(
        "".join(f"{label}\t{c}\n" for label, c in sorted(label_map.items(), key=lambda kv: kv[1])),
        encoding="utf-8",
    )
    return filepath


def read_svmlight(filepath: str | Path) -> tuple[list[int], list[dict[int, float]]]:
    """Parse an SVMlight file back into integer labels and 0-based sparse rows."""
    labels, rows = [], []
    for line_number, line in enumerate(Path(filepath).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        label, *pairs = line.split()
        row = {}
        try:
            labels.append(int(label))
            for pair in pairs:
                index, value = pair.split(":")
                row[int(index) - 1] = float(value)
        except ValueError as err:
            raise FeatureExportError(f"[Line {line_number}] Malformed SVMlight line") from err
        rows.append(row)
    return labels, rows
