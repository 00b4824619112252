"""
Run configuration: flags > YAML config file > defaults.

YAML keys are the flag names with dashes turned into underscores, e.g.

    seed: 7
    burn_in: 200
    k: [5, 10, 20]
    tree: "3,3"
"""

from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator
from ruamel.yaml import YAML

from dpca.errors import DpcaError
from dpca.evidence import EvidenceMethod
from dpca.features import ComponentWeighting, FeatureMode, ScoreKind
from dpca.model import Variant
from dpca.utils import save_json


class UsageError(DpcaError, ValueError):
    """A required flag is missing or flags contradict each other."""


class RunConfig(BaseModel):
    """Every option any subcommand reads, fully resolved."""

    model_config = ConfigDict(extra="forbid")

    command: str

    # Inputs and outputs
    corpus: Optional[Path] = None
    model: Optional[Path] = None
    queries: Optional[Path] = None
    out: Optional[Path] = None
    stopwords: Optional[Path] = None
    progress_log: Optional[Path] = None
    plot: Optional[Path] = None
    pairs: Optional[Path] = None

    # Reproducibility and execution
    seed: int = 0
    workers: int = Field(1, ge=1)

    # Corpus
    bags: Optional[list[str]] = None
    min_total: int = Field(1, ge=1)
    min_docs: int = Field(1, ge=1)

    # Model
    k: list[int] = Field(default_factory=lambda: [10])
    variant: Variant = Variant.DIRICHLET
    tree: Optional[str] = None
    alpha_total: float = Field(1.0, gt=0)
    prior_strength: float = Field(1.0, gt=0)

    # Gibbs schedules
    burn_in: int = Field(100, ge=1)
    recording: int = Field(50, ge=1)
    infer_burn_in: int = Field(10, ge=0)
    infer_cycles: int = Field(50, ge=2)
    max_precision: float = Field(1e6, gt=0)
    samples: int = Field(50, ge=1)

    # Per-command options
    top: int = Field(10, ge=1)
    candidates: int = Field(1000, ge=1)
    mode: FeatureMode = FeatureMode.WORDS_COMPONENTS
    component_weighting: ComponentWeighting = ComponentWeighting.TFIDF
    class_bag: str = "class"
    scores: ScoreKind = ScoreKind.PROPORTIONS
    evidence_method: EvidenceMethod = EvidenceMethod.DOCUMENT
    timings: bool = False
    show_progress: bool = False

    @field_validator("k", mode="before")
    @classmethod
    def _parse_k(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [int(part) for part in value.split(",") if part.strip()]
        if isinstance(value, int):
            return [value]
        return value

    @field_validator("bags", mode="before")
    @classmethod
    def _parse_bags(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [part.strip() for part in value.split(",") if part.strip()]
        return value

    @property
    def single_k(self) -> int:
        if len(self.k) != 1:
            raise UsageError(f"{self.command} takes one K, got {self.k}")
        return self.k[0]


def load_yaml_config(filepath: str | Path) -> dict[str, Any]:
    """Read a YAML run configuration; keys may use dashes or underscores."""
    filepath = Path(filepath)
    if not filepath.exists():
        raise FileNotFoundError(f"File not found: {filepath}")
    yaml = YAML(typ="safe")
    with open(filepath, "r", encoding="utf-8") as f:
        data = yaml.load(f) or {}
    if not isinstance(data, dict):
        raise ValueError(f"Config file {filepath} must contain a mapping")
    return {str(key).replace("-", "_"): value for key, value in data.items()}


def resolve_config(
    command: str, flags: dict[str, Any], config_path: Optional[str | Path] = None
) -> RunConfig:
    """Merge defaults, the YAML file (if any) and explicitly given flags."""
    merged: dict[str, Any] = {}
    if config_path is not None:
        merged.update(load_yaml_config(config_path))
    merged.update({key: value for key, value in flags.items() if value is not None})
    merged["command"] = command
    return RunConfig(**merged)


def manifest_path(out: Path) -> Path:
    return out.with_name(out.name + ".manifest.json")


def write_manifest(config: RunConfig, outputs: list[Path]) -> Optional[Path]:
    """Record the resolved configuration next to the primary output."""
    if config.out is None:
        return None
    manifest = {
        "command": config.command,
        "configuration": config.model_dump(mode="json"),
        "outputs": [str(path) for path in outputs],
    }
    return save_json(manifest, manifest_path(config.out))
