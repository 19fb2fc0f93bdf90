"""Exception hierarchy shared across the toolkit.

Exit-code mapping used by the CLI: usage errors -> 1, DataError -> 2,
NumericError -> 3.
"""


class DfsuiteError(Exception):
    """Base class for all toolkit errors."""


class DataError(DfsuiteError):
    """Malformed or inconsistent input data (bad file, schema violation)."""


class NumericError(DfsuiteError):
    """Numerical failure: degenerate geometry, divergence, non-convergence."""


class DegenerateInputError(NumericError):
    """Input is valid but numerically degenerate (e.g. constant image block)."""
