"""Exception hierarchy.

Input problems (bad matrices, unparsable files) derive from ``InputError``;
failures while clustering derive from ``SolverError``. The CLI maps the two
families to distinct exit codes.
"""


class RelKMeansError(Exception):
    """Base class for all errors raised by this package."""


class InputError(RelKMeansError, ValueError):
    pass


class NonSquareError(InputError):
    pass


class AsymmetryError(InputError):
    def __init__(self, i, j, gap, tolerance):
        self.i, self.j, self.gap = i, j, gap
        super().__init__(
            f"matrix asymmetric at ({i},{j}): |A_ij - A_ji| = {gap:g} > tolerance {tolerance:g}"
        )


class NonzeroDiagonalError(InputError):
    def __init__(self, i, value, tolerance):
        self.i, self.value = i, value
        super().__init__(f"diagonal entry {i} is {value:g}, exceeds tolerance {tolerance:g}")


class NonFiniteError(InputError):
    def __init__(self, i, j):
        self.i, self.j = i, j
        super().__init__(f"non-finite entry at ({i},{j})")


class DimensionMismatchError(InputError):
    pass


class EmptyInputError(InputError):
    pass


class ParseError(InputError):
    """A file could not be parsed. ``line`` and ``column`` are 1-based."""

    def __init__(self, path, line, column, message):
        self.path, self.line, self.column = str(path), line, column
        loc = f"{self.path}:{line}" if column is None else f"{self.path}:{line}:{column}"
        super().__init__(f"{loc}: {message}")


class CoefficientError(RelKMeansError, ValueError):
    """Malformed coefficient vector for a quadratic-form distance."""


class LengthMismatchError(CoefficientError):
    pass


class NonZeroSumError(CoefficientError):
    pass


class NegativeBetaError(RelKMeansError, ValueError):
    pass


class NonNegativeInputError(RelKMeansError, ValueError):
    pass


class ZeroNormError(RelKMeansError, ValueError):
    pass


class SolverError(RelKMeansError):
    pass


class EmptyClusterError(SolverError):
    pass


class TooManyClustersError(SolverError, ValueError):
    pass


class ConvergenceFailure(SolverError):
    pass
