"""Command-line workflows for the dpca library."""

from .cli import build_parser, cli_dispatch, main
from .run_config import RunConfig, UsageError, resolve_config

__all__ = [
    "RunConfig",
    "UsageError",
    "resolve_config",
    "build_parser",
    "cli_dispatch",
    "main",
]
