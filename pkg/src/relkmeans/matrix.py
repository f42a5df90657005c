"""Squared dissimilarity matrices: validation and construction from points."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AsymmetryError,
    DimensionMismatchError,
    EmptyInputError,
    NonFiniteError,
    NonSquareError,
    NonzeroDiagonalError,
)

DEFAULT_RELATIVE_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class SquaredDissimilarityMatrix:
    """A validated symmetric matrix of squared dissimilarities with zero diagonal.

    ``entries`` is a read-only float64 array. ``scale`` is the largest absolute
    entry and is the unit all relative tolerances in the package refer to.
    Negative off-diagonal entries are allowed and reported through
    ``has_negative_entries``.
    """

    entries: np.ndarray
    scale: float = field(init=False)
    has_negative_entries: bool = field(init=False)

    def __post_init__(self):
        self.entries.setflags(write=False)
        scale = float(np.max(np.abs(self.entries))) if self.entries.size else 0.0
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "has_negative_entries", bool(np.any(self.entries < 0)))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __len__(self):
        return self.n

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)

    def __repr__(self):
        return f"SquaredDissimilarityMatrix(n={self.n}, scale={self.scale:g})"


def validate_matrix(raw, tolerance: float | None = None) -> SquaredDissimilarityMatrix:
    """Check ``raw`` and return it as a :class:`SquaredDissimilarityMatrix`.

    Asymmetry up to ``tolerance`` is removed by averaging with the transpose and
    small diagonal entries are zeroed; anything larger raises. The default
    tolerance is ``1e-9`` times the largest absolute entry.
    """
    if isinstance(raw, SquaredDissimilarityMatrix):
        return raw
    a = np.array(raw, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquareError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise EmptyInputError("matrix has no rows")

    bad = np.argwhere(~np.isfinite(a))
    if len(bad):
        raise NonFiniteError(int(bad[0][0]), int(bad[0][1]))

    if tolerance is None:
        tolerance = DEFAULT_RELATIVE_TOLERANCE * float(np.max(np.abs(a)))
    if tolerance < 0:
        raise ValueError("tolerance must be nonnegative")

    gap = np.abs(a - a.T)
    worst = np.unravel_index(np.argmax(gap), gap.shape)
    if gap[worst] > tolerance:
        i, j = sorted(int(k) for k in worst)
        raise AsymmetryError(i, j, float(gap[worst]), tolerance)

    diag = np.abs(np.diag(a))
    k = int(np.argmax(diag))
    if diag[k] > tolerance:
        raise NonzeroDiagonalError(k, float(a[k, k]), tolerance)

    a = 0.5 * (a + a.T)
    np.fill_diagonal(a, 0.0)
    return SquaredDissimilarityMatrix(a)


def from_points(points) -> SquaredDissimilarityMatrix:
    """Squared Euclidean distance matrix of a point set (one point per row)."""
    try:
        p = np.array(points, dtype=float)
    except ValueError as exc:
        raise DimensionMismatchError("points do not all have the same dimension") from exc
    if p.size == 0 or p.shape[0] == 0:
        raise EmptyInputError("no points given")
    if p.ndim == 1:
        p = p[:, None]
    if p.ndim != 2:
        raise DimensionMismatchError("points do not all have the same dimension")
    if not np.all(np.isfinite(p)):
        i, j = np.argwhere(~np.isfinite(p))[0]
        raise NonFiniteError(int(i), int(j))

    diff = p[:, None, :] - p[None, :, :]
    a = np.einsum("ijk,ijk->ij", diff, diff)
    # exact symmetry: (x-y)^2 == (y-x)^2 in floating point, diagonal is 0 already
    return SquaredDissimilarityMatrix(a)
