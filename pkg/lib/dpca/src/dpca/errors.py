"""
Exceptions and warnings raised by the dpca library.

Contract violations derive from ValueError as well as DpcaError, so callers
that only know about ValueError keep working.
"""


class DpcaError(Exception):
    """Base class for every dpca failure."""


class DpcaWarning(UserWarning):
    """Recoverable condition: the operation continued with a documented fallback."""


# ============================================================
# Corpus
# ============================================================


class CorpusFormatError(DpcaError, ValueError):
    """A corpus line is not a well-formed JSON document record."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        prefix = f"[Line {line_number}] " if line_number is not None else ""
        super().__init__(f"{prefix}{message}")


class CorpusSchemaError(DpcaError, ValueError):
    """A document uses a bag name that was not declared."""


class CountValidationError(DpcaError, ValueError):
    """A token count is not a strictly positive integer."""


class EmptyVocabularyError(DpcaError, ValueError):
    """Every token of a bag was pruned."""

    def __init__(self, bag_name: str):
        self.bag_name = bag_name
        super().__init__(f"All tokens pruned in bag '{bag_name}'")


class EmptyCorpusError(DpcaError, ValueError):
    """An operation that needs documents received none."""


class IncompatibleCorpusError(DpcaError, ValueError):
    """Corpus bags or vocabulary sizes do not match the model."""


# ============================================================
# Model
# ============================================================


class TreeSpecError(DpcaError, ValueError):
    """A tree specification is malformed or inconsistent with K."""


class TreeParameterError(DpcaError, ValueError):
    """Tree stop/branch probabilities violate their constraints."""


class ModelFormatError(DpcaError, ValueError):
    """A model file is unreadable, truncated, or of the wrong version."""


class ModelValidationError(DpcaError, ValueError):
    """Model parameters violate their invariants."""


# ============================================================
# Sampling and inference
# ============================================================


class ImpossibleTokenError(DpcaError, ValueError):
    """An observed token has zero probability under every component."""


class NonFiniteLikelihoodError(DpcaError, ArithmeticError):
    """A log likelihood evaluated to a non-finite value."""

    def __init__(self, message: str, cycle: int | None = None):
        self.cycle = cycle
        prefix = f"[Cycle {cycle}] " if cycle is not None else ""
        super().__init__(f"{prefix}{message}")


class EmptySampleError(DpcaError, ValueError):
    """An estimator received no samples."""


class EmptyQueryError(DpcaError, ValueError):
    """A query has no in-vocabulary tokens."""


class MissingClassBagError(DpcaError, ValueError):
    """Classification was requested on a model without the class bag."""


# ============================================================
# Features
# ============================================================


class FeatureExportError(DpcaError, ValueError):
    """A feature matrix cannot be written in SVMlight format."""
