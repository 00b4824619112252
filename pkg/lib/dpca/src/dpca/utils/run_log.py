"""
Run log: collects warnings and errors raised while a workflow runs.
"""

from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass, field
import sys
from typing import TextIO
import warnings

from dpca.errors import DpcaWarning


@dataclass
class RunLog:
    """Container for warnings and errors during a run."""

    warnings: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    def warn(self, message: str, context: str | None = None):
        prefix = f"[{context}] " if context else ""
        self.warnings.append(f"{prefix}{message}")

    def error(self, message: str, context: str | None = None):
        prefix = f"[{context}] " if context else ""
        self.errors.append(f"{prefix}{message}")

    def has_issues(self) -> bool:
        return bool(self.warnings or self.errors)

    @contextmanager
    def capture(self, context: str | None = None) -> Iterator[None]:
        """Record every DpcaWarning raised inside the block instead of printing it."""
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", DpcaWarning)
                yield
        finally:
            # outside the recording context
            for item in caught:
                if issubclass(item.category, DpcaWarning):
                    self.warn(str(item.message), context)
                else:
                    warnings.warn_explicit(
                        item.message, item.category, item.filename, item.lineno
                    )

    def summary(self) -> str:
        lines = []
        if self.errors:
            lines.append(f"ERRORS ({len(self.errors)}):")
            for err in self.errors:
                lines.append(f"  ✗ {err}")
        if self.warnings:
            lines.append(f"WARNINGS ({len(self.warnings)}):")
            for warn in self.warnings:
                lines.append(f"  ⚠ {warn}")
        if not lines:
            lines.append("No issues found.")
        return "\n".join(lines)

    def print_log(self, stream: TextIO | None = None):
        """Print the log summary."""
        print(self.summary(), file=stream or sys.stderr)
