"""Exception types shared across the package.

``DataError`` subclasses signal problems with input files or query values;
the CLI maps them to exit code 2. Plain ``ValueError`` is reserved for
programming/contract mistakes (empty batch, k=0, ...).
"""


class DataError(Exception):
    """Input data is inconsistent with what an operation requires."""


class UnknownToken(DataError):
    """A token was not found in the vocabulary it must resolve against."""


class MalformedInput(DataError):
    """A file violates its documented format (bad header, column count, duplicate rows)."""


class DimensionMismatch(DataError):
    """Declared dimensions disagree with the actual data."""


class IncompleteBundle(DataError):
    """A model directory is missing one of its required files."""


class NoKnownAttributes(DataError):
    """A cold-start query carries no attribute value known to the model."""


class TrainingDiverged(Exception):
    """The training objective became non-finite."""
