"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ParameterError -> 2, InputError -> 3,
NumericalError -> 4.
"""


class GraphonLabError(Exception):
    pass


class ParameterError(GraphonLabError, ValueError):
    """Invalid argument values (bad n, out-of-domain coordinates, ...)."""


class InputError(GraphonLabError, ValueError):
    """Malformed or degenerate input data (edge lists, adjacency matrices)."""


class NumericalError(GraphonLabError, ArithmeticError):
    """An eigensolver or other numerical routine failed."""
