"""
Model files: one self-describing JSON document.

    {
      "header": {"format": "dpca-model/1", "K": ..., "variant": ..., "bag_specs": {...},
                 "cycles_trained": ...},
      "alpha": [...],
      "omega_prior": {bag: [...]},
      "tree": null | {"nodes": [...]},
      "vocabularies": {bag: [...]},
      "mean_proportions": null | [...],
      "omega": {bag: [[...], ...]}
    }

Reals are written with shortest round-trip repr, so a reload is exact.
"""

import json
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from dpca.errors import ModelFormatError, ModelValidationError
from dpca.model.component_model import ComponentModel
from dpca.model.tree import TopicTree
from dpca.utils.data_io import save_json

MODEL_FORMAT = "dpca-model/1"
SECTIONS = ("header", "alpha", "omega_prior", "tree", "vocabularies", "mean_proportions", "omega")


def model_to_dict(model: ComponentModel) -> dict[str, Any]:
    return {
        "header": {
            "format": MODEL_FORMAT,
            "K": model.K,
            "variant": model.variant.value,
            "bag_specs": model.bag_specs,
            "cycles_trained": model.cycles_trained,
        },
        "alpha": model.alpha.tolist(),
        "omega_prior": {bag: prior.tolist() for bag, prior in model.omega_prior.items()},
        "tree": None if model.tree is None else model.tree.model_dump(),
        "vocabularies": model.vocabularies,
        "mean_proportions": (
            None if model.mean_proportions is None else model.mean_proportions.tolist()
        ),
        "omega": {bag: rows.tolist() for bag, rows in model.omega.items()},
    }


def save_model(model: ComponentModel, filepath: str | Path) -> Path:
    """Write a model file; returns its path."""
    return save_json(model_to_dict(model), filepath)


def _first_missing_section(text: str) -> str:
    for section in SECTIONS:
        if f'"{section}":' not in text:
            return section
    return SECTIONS[-1]


def model_from_dict(data: dict[str, Any]) -> ComponentModel:
    """
    Build a model from its file representation.

    Raises:
        ModelFormatError: Wrong format version or missing section
        ModelValidationError: Dimensions inconsistent or a row not stochastic
    """
    missing = [section for section in SECTIONS if section not in data]
    if missing:
        raise ModelFormatError(f"Model file is missing section '{missing[0]}'")

    header = data["header"]
    if header.get("format") != MODEL_FORMAT:
        raise ModelFormatError(
            f"Unsupported model format {header.get('format')!r}, expected '{MODEL_FORMAT}'"
        )

    bag_specs = header.get("bag_specs", {})
    for bag, tokens in data["vocabularies"].items():
        if bag_specs.get(bag) != len(tokens):
            raise ModelValidationError(
                f"Bag '{bag}': header declares J={bag_specs.get(bag)}, vocabulary has {len(tokens)}"
            )

    try:
        return ComponentModel(
            K=header["K"],
            variant=header["variant"],
            alpha=data["alpha"],
            omega=data["omega"],
            omega_prior=data["omega_prior"],
            vocabularies=data["vocabularies"],
            tree=None if data["tree"] is None else TopicTree.model_validate(data["tree"]),
            mean_proportions=data["mean_proportions"],
            cycles_trained=header.get("cycles_trained", 0),
        )
    except (ValidationError, KeyError, TypeError) as err:
        raise ModelValidationError(f"Invalid model: {err}") from err


def load_model(filepath: str | Path) -> ComponentModel:
    """
    Read a model file written by save_model.

    Raises:
        FileNotFoundError: File does not exist
        ModelFormatError: Unparseable or truncated file (names the first
            missing section), or wrong format version
        ModelValidationError: Parameters violate model invariants
    """
    filepath = Path(filepath)
    if not filepath.exists():
        raise FileNotFoundError(f"File not found: {filepath}")

    text = filepath.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ModelFormatError(
            f"Model file is truncated or malformed ({err.msg}); "
            f"missing section '{_first_missing_section(text)}'"
        ) from err
    if not isinstance(data, dict):
        raise ModelFormatError("Model file must contain a JSON object")
    return model_from_dict(data)
