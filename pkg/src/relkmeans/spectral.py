"""Detecting and repairing non-Euclidean dissimilarity matrices.

A squared dissimilarity matrix produces nonnegative centroid distances for
every zero-sum coefficient vector exactly when its double-centered form
``B = -0.5 J A J`` is positive semidefinite on the hyperplane orthogonal to
the all-ones vector. Adding ``beta`` to every off-diagonal entry raises each
eigenvalue on that hyperplane by ``beta / 2``, so the smallest sufficient
spread is ``-2 * lambda_min``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConvergenceFailure, NegativeBetaError, NonNegativeInputError, ZeroNormError
from .matrix import SquaredDissimilarityMatrix, validate_matrix

EIGEN_TOLERANCE = 1e-9


class BetaMode(str, Enum):
    OFF = "off"
    EAGER = "eager"
    LAZY = "lazy"


@dataclass
class BetaState:
    """Spread applied during one solver run. ``beta`` only ever grows."""

    mode: BetaMode = BetaMode.EAGER
    beta: float = 0.0
    increments: list[tuple[int, float]] = field(default_factory=list)

    def bump(self, iteration: int, delta: float):
        if self.mode is BetaMode.OFF:
            raise RuntimeError("beta is frozen at 0 when correction is off")
        if delta < 0:
            raise NegativeBetaError("beta cannot decrease")
        self.beta += delta
        self.increments.append((iteration, delta))


def gower_center(A) -> np.ndarray:
    """Double-centered matrix ``-0.5 * J A J`` with ``J = I - 11^T/n``."""
    a = np.asarray(A, dtype=float)
    n = a.shape[0]
    r = a.sum(axis=1)
    s = r.sum()
    b = -0.5 * (a - r[:, None] / n - r[None, :] / n + s / (n * n))
    return 0.5 * (b + b.T)


def min_restricted_eigenvalue(B) -> float:
    """Smallest eigenvalue of ``B`` on the subspace orthogonal to the ones vector.

    The ones direction is deflated by adding a multiple of ``11^T/n`` large
    enough to push its structural zero eigenvalue above the rest of the
    spectrum. Returns 0.0 for ``n == 1`` where the subspace is trivial.
    """
    b = np.asarray(B, dtype=float)
    n = b.shape[0]
    if n <= 1:
        return 0.0
    lift = 2.0 * float(np.max(np.sum(np.abs(b), axis=1))) + 1.0
    try:
        w = np.linalg.eigvalsh(b + lift / n)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"symmetric eigensolver failed: {exc}") from exc
    return float(w[0])


def beta_star(A, tol: float = EIGEN_TOLERANCE) -> float:
    """Smallest uniform spread that makes every centroid distance nonnegative.

    A minimum eigenvalue within ``tol * scale`` of zero counts as zero, so
    Euclidean inputs get exactly 0 rather than roundoff.
    """
    m = validate_matrix(A)
    lam = min_restricted_eigenvalue(gower_center(m.entries))
    if lam >= -tol * m.scale:
        return 0.0
    return -2.0 * lam


def is_euclidean(A, tol: float = EIGEN_TOLERANCE) -> bool:
    m = validate_matrix(A)
    return min_restricted_eigenvalue(gower_center(m.entries)) >= -tol * m.scale


def apply_beta_spread(A, beta: float) -> SquaredDissimilarityMatrix:
    """Add ``beta`` to every off-diagonal entry."""
    if beta < 0:
        raise NegativeBetaError(f"beta must be nonnegative, got {beta:g}")
    m = validate_matrix(A)
    if beta == 0:
        return m
    a = m.entries + beta
    np.fill_diagonal(a, 0.0)
    return SquaredDissimilarityMatrix(a)


def shifted_distance(d_raw: float, beta: float, norm_sq: float) -> float:
    """Centroid distance after a spread of ``beta``; ``norm_sq`` is ``||lam||^2``."""
    return d_raw + 0.5 * beta * norm_sq


def lazy_beta_increment(d_neg: float, norm_sq: float, epsilon: float = 0.0) -> float:
    """Spread increase that lifts the negative distance ``d_neg`` to ``epsilon*norm_sq/2``."""
    if d_neg >= 0:
        raise NonNegativeInputError(f"distance {d_neg:g} is not negative")
    if norm_sq <= 0:
        raise ZeroNormError("coefficient vector has zero norm")
    return -2.0 * d_neg / norm_sq + epsilon
