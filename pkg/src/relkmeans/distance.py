"""Centroid distances computed from the squared dissimilarity matrix alone.

For a zero-sum coefficient vector ``lam`` the squared length of
``sum_j lam_j p_j`` is ``-0.5 * lam @ A @ lam``, which needs nothing but ``A``.
The distance from point ``i`` to the centroid of a set ``S`` uses
``lam = chi(S)/|S| - e_i``. Expanding that quadratic form with ``A_ii = 0``
gives::

    d2(i, S) = sum_{j in S} A_ij / |S|  -  W_S / (2 |S|^2)
    W_S      = sum_{j, k in S} A_jk

so keeping the per-cluster row sums and ``W`` up to date makes every distance
O(1) and every point move O(n).
"""

from __future__ import annotations

import numpy as np

from .errors import (
    EmptyClusterError,
    LengthMismatchError,
    NonZeroSumError,
)
from .matrix import SquaredDissimilarityMatrix

ZERO_SUM_RTOL = 1e-12


def quadratic_form_distance(A, lam) -> float:
    """Return ``-0.5 * lam^T A lam`` for a zero-sum ``lam``.

    The result can be negative when ``A`` is not a Euclidean squared distance
    matrix.
    """
    a = np.asarray(A, dtype=float)
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (a.shape[0],):
        raise LengthMismatchError(f"coefficient vector has length {lam.size}, matrix has n={a.shape[0]}")
    total = float(np.sum(lam))
    if abs(total) > ZERO_SUM_RTOL * float(np.sum(np.abs(lam))):
        raise NonZeroSumError(f"coefficients sum to {total:g}, expected 0")
    return -0.5 * float(lam @ a @ lam)


def centroid_coefficients(i: int, S, n: int) -> np.ndarray:
    """Coefficients expressing ``centroid(S) - p_i`` as a combination of the points."""
    members = np.unique(np.asarray(list(S), dtype=int))
    if members.size == 0:
        raise EmptyClusterError("centroid of an empty set is undefined")
    if not 0 <= i < n or members[0] < 0 or members[-1] >= n:
        raise IndexError(f"point index out of range for n={n}")
    lam = np.zeros(n)
    lam[members] = 1.0 / members.size
    lam[i] -= 1.0
    return lam


def coefficient_norm_sq(in_cluster: bool, size: int) -> float:
    """Squared norm of ``centroid_coefficients(i, S)`` given membership of i and |S|."""
    return 1.0 - 1.0 / size if in_cluster else 1.0 + 1.0 / size


class ClusterStats:
    """Per-cluster sufficient statistics for relational k-means.

    Attributes
    ----------
    labels : (n,) int array
    sizes : (N,) int array
    point_cluster_sums : (n, N) array, ``[i, c] = sum_{j in c} A_ij``
    within_sums : (N,) array, ``W_c = sum_{j,k in c} A_jk``
    beta : float
        Uniform spread already folded into the sums (see :meth:`add_beta`).
        ``A`` itself is never modified.
    """

    def __init__(self, A, labels, num_clusters: int, beta: float = 0.0):
        self.A = A if isinstance(A, SquaredDissimilarityMatrix) else SquaredDissimilarityMatrix(np.asarray(A, float))
        self.labels = np.array(labels, dtype=np.intp)
        self.num_clusters = int(num_clusters)
        if self.labels.shape != (self.A.n,):
            raise LengthMismatchError("one label per point required")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.num_clusters):
            raise IndexError("label out of range")
        self.beta = float(beta)
        self.rebuild()

    @property
    def n(self) -> int:
        return self.A.n

    def _column(self, i):
        col = self.A.entries[:, i] + self.beta
        col[i] = 0.0
        return col

    def rebuild(self):
        """Recompute every statistic from scratch in O(n^2 N)."""
        n, N = self.n, self.num_clusters
        onehot = np.zeros((n, N))
        onehot[np.arange(n), self.labels] = 1.0
        self.sizes = np.bincount(self.labels, minlength=N).astype(np.intp)
        sums = self.A.entries @ onehot
        if self.beta:
            sums += self.beta * (self.sizes[None, :] - onehot)
        self.point_cluster_sums = sums
        self.within_sums = np.array(
            [np.sum(sums[self.labels == c, c]) for c in range(N)], dtype=float
        )

    def copy(self) -> ClusterStats:
        new = object.__new__(ClusterStats)
        new.A, new.num_clusters, new.beta = self.A, self.num_clusters, self.beta
        new.labels = self.labels.copy()
        new.sizes = self.sizes.copy()
        new.point_cluster_sums = self.point_cluster_sums.copy()
        new.within_sums = self.within_sums.copy()
        return new

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.labels == c)

    def centroid_distance(self, i: int, c: int) -> float:
        """Squared distance from point ``i`` to the centroid of cluster ``c``."""
        size = self.sizes[c]
        if size == 0:
            raise EmptyClusterError(f"cluster {c} is empty")
        return float(self.point_cluster_sums[i, c] / size - self.within_sums[c] / (2.0 * size * size))

    def distances(self) -> np.ndarray:
        """(n, N) matrix of all point-to-centroid distances; empty clusters give +inf."""
        sizes = self.sizes.astype(float)
        out = np.full((self.n, self.num_clusters), np.inf)
        live = sizes > 0
        s = sizes[live]
        out[:, live] = self.point_cluster_sums[:, live] / s - self.within_sums[live] / (2.0 * s * s)
        return out

    def own_distances(self) -> np.ndarray:
        """Distance of every point to the centroid of its own cluster."""
        idx = np.arange(self.n)
        s = self.sizes[self.labels].astype(float)
        return self.point_cluster_sums[idx, self.labels] / s - self.within_sums[self.labels] / (2.0 * s * s)

    def norm_sq(self, i: int, c: int) -> float:
        return coefficient_norm_sq(self.labels[i] == c, int(self.sizes[c]))

    def move_point(self, i: int, to: int):
        """Relabel point ``i`` to cluster ``to`` in O(n)."""
        if not 0 <= i < self.n or not 0 <= to < self.num_clusters:
            raise IndexError(f"move ({i} -> {to}) out of range")
        src = int(self.labels[i])
        if src == to:
            return self
        col = self._column(i)
        # W_S changes by twice the sum of A_ij over the other members
        self.within_sums[src] -= 2.0 * self.point_cluster_sums[i, src]
        self.within_sums[to] += 2.0 * self.point_cluster_sums[i, to]
        self.point_cluster_sums[:, src] -= col
        self.point_cluster_sums[:, to] += col
        self.sizes[src] -= 1
        self.sizes[to] += 1
        self.labels[i] = to
        if self.sizes[src] == 0:
            # exact zeros; avoids carrying roundoff into a later refill
            self.within_sums[src] = 0.0
            self.point_cluster_sums[:, src] = 0.0
        return self

    def add_beta(self, delta: float):
        """Fold an extra uniform spread ``delta`` into the statistics in O(nN)."""
        if delta == 0:
            return self
        sizes = self.sizes.astype(float)
        self.within_sums += delta * sizes * (sizes - 1.0)
        self.point_cluster_sums += delta * sizes[None, :]
        self.point_cluster_sums[np.arange(self.n), self.labels] -= delta
        self.beta += delta
        return self

    def total_objective(self) -> float:
        """Sum over points of the distance to their own centroid."""
        live = self.sizes > 0
        return float(np.sum(self.within_sums[live] / (2.0 * self.sizes[live])))
