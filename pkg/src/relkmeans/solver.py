"""Batch Lloyd iteration on a squared dissimilarity matrix.

Also contains :func:`vector_kmeans_reference`, the textbook coordinate-space
k-means. It shares the random streams, tie-breaking and stopping rules with
:func:`solve` so that on Euclidean input the two can be compared step by step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .distance import ClusterStats
from .errors import EmptyClusterError, TooManyClustersError
from .matrix import SquaredDissimilarityMatrix, validate_matrix
from .spectral import BetaMode, BetaState, apply_beta_spread, beta_star, lazy_beta_increment

log = logging.getLogger(__name__)

# Lazy mode ignores negative distances this small relative to the matrix scale.
LAZY_NEGATIVE_RTOL = 1e-12
RESTART_TIE_RTOL = 1e-10
# Values this close (relative to the largest finite magnitude compared) are
# ties, resolved toward the lowest index. Keeps the relational and coordinate
# routes in lockstep where only roundoff separates candidates.
TIE_RTOL = 1e-10


def _magnitude(values, axis=None):
    finite = np.where(np.isfinite(values), np.abs(values), 0.0)
    return np.max(finite, axis=axis)


def first_argmin(rows: np.ndarray) -> np.ndarray:
    """Row-wise argmin where near-ties go to the lowest column."""
    slack = TIE_RTOL * _magnitude(rows, axis=1)
    best = rows.min(axis=1)
    return np.argmax(rows <= (best + slack)[:, None], axis=1)


def first_argmax(values: np.ndarray) -> int:
    """Argmax of a vector where near-ties go to the lowest index."""
    top = values.max()
    return int(np.argmax(values >= top - TIE_RTOL * _magnitude(values)))


class InitMethod(str, Enum):
    RANDOM_PARTITION = "random_partition"
    PLUSPLUS = "plusplus"


class EmptyClusterPolicy(str, Enum):
    REPAIR_FARTHEST = "repair_farthest"
    ERROR = "error"


@dataclass
class SolverConfig:
    num_clusters: int
    max_iterations: int = 300
    objective_tolerance: float = 1e-8
    seed: int = 0
    init_method: InitMethod = InitMethod.PLUSPLUS
    beta_mode: BetaMode = BetaMode.EAGER
    restarts: int = 1
    empty_cluster_policy: EmptyClusterPolicy = EmptyClusterPolicy.REPAIR_FARTHEST
    lazy_epsilon: float = 0.0

    def __post_init__(self):
        self.init_method = InitMethod(self.init_method)
        self.beta_mode = BetaMode(self.beta_mode)
        self.empty_cluster_policy = EmptyClusterPolicy(self.empty_cluster_policy)
        if self.num_clusters < 1:
            raise ValueError("num_clusters must be at least 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.lazy_epsilon < 0:
            raise ValueError("lazy_epsilon must be nonnegative")

    def as_dict(self) -> dict:
        return {
            "num_clusters": self.num_clusters,
            "max_iterations": self.max_iterations,
            "objective_tolerance": self.objective_tolerance,
            "seed": self.seed,
            "init_method": self.init_method.value,
            "beta_mode": self.beta_mode.value,
            "restarts": self.restarts,
            "empty_cluster_policy": self.empty_cluster_policy.value,
            "lazy_epsilon": self.lazy_epsilon,
        }


@dataclass
class RunReport:
    labels: np.ndarray
    final_objective: float
    objective_trajectory: list[float]
    iterations: int
    converged: bool
    beta_final: float = 0.0
    beta_increments: list[tuple[int, float]] = field(default_factory=list)
    restart_index_of_best: int = 0
    # labels after initialization, then after every iteration
    label_history: list[np.ndarray] = field(default_factory=list, repr=False)


def restart_rng(seed: int, restart: int) -> np.random.Generator:
    """Independent, reproducible stream for one restart."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(restart,)))


def _check_counts(n: int, num_clusters: int):
    if num_clusters > n:
        raise TooManyClustersError(f"cannot form {num_clusters} clusters from {n} points")


def init_random_partition(n: int, num_clusters: int, rng: np.random.Generator) -> np.ndarray:
    """Points ``0..N-1`` open one cluster each; the rest are labelled uniformly."""
    _check_counts(n, num_clusters)
    labels = np.empty(n, dtype=np.intp)
    labels[:num_clusters] = np.arange(num_clusters)
    labels[num_clusters:] = rng.integers(0, num_clusters, size=n - num_clusters)
    return labels


def _plusplus(n: int, num_clusters: int, rng: np.random.Generator,
              dist_to: Callable[[int], np.ndarray]) -> np.ndarray:
    """D^2 seeding given a function returning squared distances to one point."""
    _check_counts(n, num_clusters)
    seeds = [int(rng.integers(n))]
    columns = [dist_to(seeds[0])]
    nearest = columns[0].copy()
    for _ in range(1, num_clusters):
        w = np.maximum(nearest, 0.0)
        w[seeds] = 0.0
        total = w.sum()
        if total > 0 and np.isfinite(total):
            nxt = int(rng.choice(n, p=w / total))
        else:
            nxt = int(rng.choice(np.setdiff1d(np.arange(n), seeds)))
        seeds.append(nxt)
        columns.append(dist_to(nxt))
        nearest = np.minimum(nearest, columns[-1])
    labels = first_argmin(np.column_stack(columns)).astype(np.intp)
    # seeds keep their own cluster even with duplicate points or negative entries
    labels[seeds] = np.arange(num_clusters)
    return labels


def init_plusplus(A, num_clusters: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ style seeding using singleton centroids, i.e. raw matrix entries.

    Sampling weights are clamped at zero so matrices with negative entries
    are accepted.
    """
    a = np.asarray(A, dtype=float)
    return _plusplus(a.shape[0], num_clusters, rng, lambda s: a[:, s])


def _negative_fix(cache: ClusterStats, dist: np.ndarray, state: BetaState,
                  iteration: int, epsilon: float) -> np.ndarray:
    """Raise beta so no distance in this sweep is negative; returns fresh distances."""
    neg = dist < -LAZY_NEGATIVE_RTOL * cache.A.scale
    if not neg.any():
        return dist
    own = cache.labels[:, None] == np.arange(cache.num_clusters)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / cache.sizes.astype(float)
        norms = np.where(own, 1.0 - inv, 1.0 + inv)
        need = np.where(neg, -2.0 * dist / norms, -np.inf)
    # the offender needing the largest spread; bumping for it clears all others
    i, c = np.unravel_index(np.argmax(need), need.shape)
    delta = lazy_beta_increment(float(dist[i, c]), float(norms[i, c]), epsilon)
    cache.add_beta(delta)
    state.bump(iteration, delta)
    log.debug("iteration %d: beta += %g (now %g)", iteration, delta, state.beta)
    return cache.distances()


def _repair_empty(cache: ClusterStats, policy: EmptyClusterPolicy) -> int:
    repaired = 0
    for c in np.flatnonzero(cache.sizes == 0):
        if policy is EmptyClusterPolicy.ERROR:
            raise EmptyClusterError(f"cluster {c} became empty")
        own = cache.own_distances()
        own[cache.sizes[cache.labels] <= 1] = -np.inf
        cache.move_point(first_argmax(own), int(c))
        repaired += 1
    return repaired


def lloyd_iterate(cache: ClusterStats, beta_state: BetaState, config: SolverConfig,
                  iteration: int = 0) -> tuple[int, float]:
    """One batch assignment step. Returns ``(moved_count, objective)``.

    Every point is compared against the centroids as they stood at the start of
    the sweep; ties go to the lowest cluster index. In lazy mode a negative
    distance raises beta before any move is made.
    """
    dist = cache.distances()
    if beta_state.mode is BetaMode.LAZY:
        dist = _negative_fix(cache, dist, beta_state, iteration, config.lazy_epsilon)
    target = first_argmin(dist)
    movers = np.flatnonzero(target != cache.labels)
    for i in movers:
        cache.move_point(int(i), int(target[i]))
    moved = len(movers) + _repair_empty(cache, config.empty_cluster_policy)
    return moved, cache.total_objective()


def _stalled(prev: float, obj: float, tol: float) -> bool:
    return prev - obj <= tol * abs(prev)


def _run_once(A: SquaredDissimilarityMatrix, labels: np.ndarray, state: BetaState,
              config: SolverConfig) -> RunReport:
    cache = ClusterStats(A, labels, config.num_clusters)
    _repair_empty(cache, config.empty_cluster_policy)
    trajectory = [cache.total_objective()]
    history = [cache.labels.copy()]
    converged = False
    iteration = 0
    while iteration < config.max_iterations:
        iteration += 1
        bumps = len(state.increments)
        moved, obj = lloyd_iterate(cache, state, config, iteration)
        prev = trajectory[-1]
        trajectory.append(obj)
        history.append(cache.labels.copy())
        if moved == 0:
            converged = True
            break
        if len(state.increments) == bumps and _stalled(prev, obj, config.objective_tolerance):
            converged = True
            break
    return RunReport(
        labels=cache.labels.copy(),
        final_objective=trajectory[-1],
        objective_trajectory=trajectory,
        iterations=iteration,
        converged=converged,
        beta_final=state.beta,
        beta_increments=list(state.increments),
        label_history=history,
    )


def _pick_best(reports: list[RunReport]) -> RunReport:
    # objectives equal up to roundoff count as tied; the earliest restart wins
    low = min(r.final_objective for r in reports)
    slack = RESTART_TIE_RTOL * abs(low)
    best = next(k for k, r in enumerate(reports) if r.final_objective <= low + slack)
    report = reports[best]
    report.restart_index_of_best = best
    return report


def solve(A, config: SolverConfig) -> RunReport:
    """Cluster the points behind squared dissimilarity matrix ``A``.

    In eager mode the minimal beta-spread is applied once up front; in lazy
    mode each restart starts from beta = 0 and raises it on demand. The restart
    with the lowest final objective wins, ties going to the earliest.
    """
    m = validate_matrix(A)
    _check_counts(m.n, config.num_clusters)
    work, beta0, events = m, 0.0, []
    if config.beta_mode is BetaMode.EAGER:
        beta0 = beta_star(m)
        work = apply_beta_spread(m, beta0)
        if beta0 > 0:
            events = [(0, beta0)]
            log.info("eager beta-spread %g", beta0)

    reports = []
    for r in range(config.restarts):
        rng = restart_rng(config.seed, r)
        if config.init_method is InitMethod.PLUSPLUS:
            labels = init_plusplus(work, config.num_clusters, rng)
        else:
            labels = init_random_partition(m.n, config.num_clusters, rng)
        state = BetaState(config.beta_mode, beta0, list(events))
        reports.append(_run_once(work, labels, state, config))
    return _pick_best(reports)


def vector_kmeans_reference(points, config: SolverConfig) -> RunReport:
    """Classic k-means on explicit coordinates, averaging centroids directly.

    Beta settings are ignored: coordinates are always Euclidean.
    """
    p = np.asarray(points, dtype=float)
    if p.ndim == 1:
        p = p[:, None]
    n, N = p.shape[0], config.num_clusters
    _check_counts(n, N)

    def sqdist(x, z):
        return np.sum((x - z) ** 2, axis=-1)

    def centroids(labels):
        z = np.full((N, p.shape[1]), np.nan)
        for c in range(N):
            if np.any(labels == c):
                z[c] = p[labels == c].mean(axis=0)
        return z

    def repair(labels):
        for c in range(N):
            if np.any(labels == c):
                continue
            if config.empty_cluster_policy is EmptyClusterPolicy.ERROR:
                raise EmptyClusterError(f"cluster {c} became empty")
            z = centroids(labels)
            own = sqdist(p, z[labels])
            counts = np.bincount(labels, minlength=N)
            own[counts[labels] <= 1] = -np.inf
            labels[first_argmax(own)] = c
        return labels

    def objective(labels):
        return float(np.sum(sqdist(p, centroids(labels)[labels])))

    reports = []
    for r in range(config.restarts):
        rng = restart_rng(config.seed, r)
        if config.init_method is InitMethod.PLUSPLUS:
            labels = _plusplus(n, N, rng, lambda s: sqdist(p, p[s]))
        else:
            labels = init_random_partition(n, N, rng)
        labels = repair(labels)
        trajectory, history = [objective(labels)], [labels.copy()]
        converged, iteration = False, 0
        while iteration < config.max_iterations:
            iteration += 1
            z = centroids(labels)
            d = sqdist(p[:, None, :], z[None, :, :])
            new = first_argmin(d)
            moved = int(np.sum(new != labels))
            labels = new
            before = labels.copy()
            labels = repair(labels)
            moved += int(np.sum(before != labels))
            prev, obj = trajectory[-1], objective(labels)
            trajectory.append(obj)
            history.append(labels.copy())
            if moved == 0 or _stalled(prev, obj, config.objective_tolerance):
                converged = True
                break
        reports.append(RunReport(labels.copy(), trajectory[-1], trajectory, iteration,
                                 converged, label_history=history))
    return _pick_best(reports)
