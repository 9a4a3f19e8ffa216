"""Balanced k-means: k-means++/Lloyd seeding followed by capacity-constrained refinement.

The constrained step is an exact transportation problem. Each cluster is
expanded into ``capacity`` slots, the first ``min_size`` of which must be
filled; padding rows stand in for unused optional slots so the problem is a
square linear assignment with no big-M penalty.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ConfigError, InfeasibleError

EXACT = "exact"
GREEDY = "greedy"


@dataclass(frozen=True)
class ClusterConfig:
    k: int
    capacity: Optional[int] = None  # None: ceil(n / k)
    max_iters: int = 100
    tol: float = 1e-6
    seed: int = 0
    restarts: int = 10
    assignment: str = EXACT
    enforce_lower_bound: bool = True  # min size floor(n / k)

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.capacity is not None and self.capacity < 1:
            raise ConfigError("capacity must be >= 1")
        if self.max_iters < 1:
            raise ConfigError("max_iters must be >= 1")
        if self.restarts < 1:
            raise ConfigError("restarts must be >= 1")
        if self.tol < 0:
            raise ConfigError("tol must be >= 0")
        if self.assignment not in (EXACT, GREEDY):
            raise ConfigError(f"assignment must be {EXACT!r} or {GREEDY!r}")

    def size_bounds(self, n: int) -> tuple[int, int]:
        """(min_size, capacity) for n points; raises if the capacities cannot hold n."""
        capacity = math.ceil(n / self.k) if self.capacity is None else self.capacity
        if capacity * self.k < n:
            raise InfeasibleError(f"capacity {capacity} x k {self.k} cannot hold {n} nodes")
        lower = n // self.k if self.enforce_lower_bound else 0
        return min(lower, capacity), capacity


@dataclass
class ClusterAssignment:
    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    n_iter: int = 0
    # Objective after every assignment and every centroid update, in order.
    history: list[float] = field(default_factory=list)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=len(self.centroids))


def squared_distances(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    diff = X[:, None, :] - C[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def assignment_cost(X: np.ndarray, C: np.ndarray, labels: np.ndarray) -> float:
    diff = X - C[labels]
    return float(np.sum(diff * diff))


def _as_points(coords) -> np.ndarray:
    X = np.asarray(getattr(coords, "coords", coords), dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    return X


# -- unconstrained k-means ---------------------------------------------------

def _kmeans_pp(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(X)
    centers = [X[rng.integers(n)]]
    closest = np.sum((X - centers[0]) ** 2, axis=1)
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            idx = rng.choice(n, p=closest / total)
        else:
            idx = rng.integers(n)
        centers.append(X[idx])
        closest = np.minimum(closest, np.sum((X - X[idx]) ** 2, axis=1))
    return np.array(centers)


def _lloyd(X: np.ndarray, C: np.ndarray, max_iters: int, tol: float) -> tuple[np.ndarray, np.ndarray, float]:
    C = C.copy()
    k = len(C)
    for _ in range(max_iters):
        dist = squared_distances(X, C)
        labels = np.argmin(dist, axis=1)  # first (lowest) cluster id on ties
        new = np.empty_like(C)
        counts = np.bincount(labels, minlength=k)
        taken = set()
        for j in range(k):
            if counts[j]:
                new[j] = X[labels == j].mean(axis=0)
                continue
            # Empty cluster: reseed at the point farthest from its own centroid.
            own = dist[np.arange(len(X)), labels].copy()
            if taken:
                own[list(taken)] = -1.0
            far = int(np.argmax(own))
            taken.add(far)
            new[j] = X[far]
        shift = float(np.max(np.sqrt(np.sum((new - C) ** 2, axis=1))))
        C = new
        if shift <= tol:
            break
    labels = np.argmin(squared_distances(X, C), axis=1)
    return C, labels, assignment_cost(X, C, labels)


def kmeans_init(coords, cfg: ClusterConfig) -> np.ndarray:
    """Best-of-restarts k-means centroids (k x d), deterministic in ``cfg.seed``."""
    X = _as_points(coords)
    if len(X) < cfg.k:
        raise InfeasibleError(f"cannot form {cfg.k} clusters from {len(X)} points")
    best, best_inertia = None, math.inf
    for seq in np.random.SeedSequence(cfg.seed).spawn(cfg.restarts):
        rng = np.random.default_rng(seq)
        C, _, inertia = _lloyd(X, _kmeans_pp(X, cfg.k, rng), cfg.max_iters, cfg.tol)
        if inertia < best_inertia:  # strict: earliest restart wins ties
            best, best_inertia = C, inertia
    return best


# -- constrained assignment --------------------------------------------------

def exact_assign(dist: np.ndarray, min_size: int, capacity: int) -> np.ndarray:
    """Minimum-cost labels with min_size <= |cluster| <= capacity."""
    n, k = dist.shape
    if not (k * min_size <= n <= k * capacity):
        raise InfeasibleError(f"no assignment of {n} points with sizes in [{min_size}, {capacity}] x {k}")
    slot_cluster = np.concatenate([np.repeat(np.arange(k), min_size),
                                   np.repeat(np.arange(k), capacity - min_size)])
    mandatory = np.arange(len(slot_cluster)) < k * min_size
    n_pad = len(slot_cluster) - n
    cost = np.empty((n + n_pad, len(slot_cluster)))
    cost[:n] = dist[:, slot_cluster]
    cost[n:] = 0.0
    cost[n:, mandatory] = np.inf  # padding may only occupy optional slots
    rows, cols = linear_sum_assignment(cost)
    labels = np.empty(n, dtype=int)
    real = rows < n
    labels[rows[real]] = slot_cluster[cols[real]]
    return labels


def greedy_assign(dist: np.ndarray, min_size: int, capacity: int) -> np.ndarray:
    """First-fit over point-centroid pairs sorted by (distance, cluster id, node index).

    A first sweep only fills clusters up to ``min_size``; a second sweep fills to capacity.
    """
    n, k = dist.shape
    if not (k * min_size <= n <= k * capacity):
        raise InfeasibleError(f"no assignment of {n} points with sizes in [{min_size}, {capacity}] x {k}")
    node, clus = np.meshgrid(np.arange(n), np.arange(k), indexing="ij")
    node, clus, d = node.ravel(), clus.ravel(), dist.ravel()
    order = np.lexsort((node, clus, d))
    labels = np.full(n, -1)
    sizes = np.zeros(k, dtype=int)
    for limit in (min_size, capacity):
        for idx in order:
            i, j = node[idx], clus[idx]
            if labels[i] < 0 and sizes[j] < limit:
                labels[i] = j
                sizes[j] += 1
    return labels


def balanced_assign(coords, centroids, cfg: ClusterConfig) -> ClusterAssignment:
    """Alternate constrained assignment and centroid update until labels stop changing."""
    X = _as_points(coords)
    C = np.array(centroids, dtype=float).reshape(cfg.k, -1)
    min_size, capacity = cfg.size_bounds(len(X))
    solve = exact_assign if cfg.assignment == EXACT else greedy_assign

    labels = None
    history = []
    n_iter = 0
    for n_iter in range(1, cfg.max_iters + 1):
        new_labels = solve(squared_distances(X, C), min_size, capacity)
        sizes = np.bincount(new_labels, minlength=cfg.k)
        if sizes.max() > capacity or sizes.min() < min_size:
            raise InfeasibleError(f"assignment violated size bounds: {sizes.tolist()}")
        history.append(assignment_cost(X, C, new_labels))
        for j in range(cfg.k):
            if sizes[j]:
                C[j] = X[new_labels == j].mean(axis=0)
        history.append(assignment_cost(X, C, new_labels))
        stable = labels is not None and np.array_equal(new_labels, labels)
        labels = new_labels
        if stable:
            break
    return ClusterAssignment(labels=labels, centroids=C, inertia=assignment_cost(X, C, labels),
                             n_iter=n_iter, history=history)


def cluster(embedding, cfg: ClusterConfig) -> ClusterAssignment:
    X = _as_points(embedding)
    return balanced_assign(X, kmeans_init(X, cfg), cfg)
