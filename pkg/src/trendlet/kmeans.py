"""Lloyd's k-means with k-means++ seeding, built for reproducibility.

Randomness comes from numpy's PCG64 generator.  A fit with ``n_restarts``
restarts derives the generator for restart r from
``SeedSequence(entropy=seed, spawn_key=(r,))``, so results are identical
across platforms and independent of the order restarts are evaluated in;
the best restart is the one with the lowest inertia, ties broken by the
lowest restart index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Degenerate, InvalidInput

__all__ = ["ClusterModel", "kmeanspp_seed", "lloyd", "kmeans_fit", "adjusted_rand_index"]


@dataclass(frozen=True, eq=False)
class ClusterModel:
    """Result of one k-means fit: centroids, labels and the winning inertia."""

    k: int
    centroids: np.ndarray  # (k, p)
    labels: np.ndarray  # (n,), values in [0, k)
    inertia: float
    seed: int
    n_iter: int
    n_restarts: int


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
        raise InvalidInput(f"points must be a non-empty 2-D matrix, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise InvalidInput("points contain non-finite values")
    return pts


def _rng_for_restart(seed: int, restart: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(restart,)))
    )


def kmeanspp_seed(points, k: int, rng_state) -> np.ndarray:
    """Pick k distinct data points as initial centroids (k-means++).

    The first centroid is uniform over the points; each further one is
    sampled with probability proportional to the squared distance to its
    nearest already-chosen centroid, which gives zero mass to duplicates.
    ``rng_state`` is a numpy Generator or an integer seed.  Returned rows
    are in selection order.
    """
    pts = _as_points(points)
    n = pts.shape[0]
    k = int(k)
    if not 1 <= k <= n:
        raise InvalidInput(f"k={k} outside 1..{n}")
    rng = rng_state if isinstance(rng_state, np.random.Generator) else np.random.default_rng(rng_state)
    chosen = np.empty(k, dtype=np.intp)
    chosen[0] = rng.integers(n)
    dist_sq = ((pts - pts[chosen[0]]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = dist_sq.sum()
        if total <= 0.0:
            raise Degenerate(f"fewer than {k} distinct points")
        # inverse-CDF draw over the D^2 weights
        cumulative = np.cumsum(dist_sq)
        idx = int(np.searchsorted(cumulative, rng.random() * total, side="right"))
        idx = min(idx, n - 1)
        chosen[j] = idx
        dist_sq = np.minimum(dist_sq, ((pts - pts[idx]) ** 2).sum(axis=1))
    return pts[chosen].copy()


def _assign(pts: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # squared distances; argmin takes the lowest centroid index on ties
    d = ((pts[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    return d.argmin(axis=1)


def _inertia(pts: np.ndarray, centroids: np.ndarray, labels: np.ndarray) -> float:
    return float(((pts - centroids[labels]) ** 2).sum())


def _update(pts: np.ndarray, labels: np.ndarray, centroids: np.ndarray, k: int) -> np.ndarray:
    new = np.empty_like(centroids)
    empty = []
    for c in range(k):
        member = labels == c
        if member.any():
            new[c] = pts[member].mean(axis=0)
        else:
            empty.append(c)
    if empty:
        # deterministic relocation: each empty cluster takes the point
        # currently farthest from its own centroid; points whose cluster
        # would be emptied by the move are not eligible (when an empty
        # cluster exists, some cluster must hold at least two points)
        labels = labels.copy()
        dist = ((pts - centroids[labels]) ** 2).sum(axis=1)
        counts = np.bincount(labels, minlength=k)
        for c in empty:
            eligible = np.where(counts[labels] > 1, dist, -1.0)
            far = int(eligible.argmax())
            counts[labels[far]] -= 1
            labels[far] = c
            counts[c] += 1
            new[c] = pts[far]
        for c in range(k):
            new[c] = pts[labels == c].mean(axis=0)
    return new


def lloyd(points, init_centroids, max_iter: int = 300, tol: float = 1e-4):
    """Lloyd iterations from explicit initial centroids.

    Runs until the assignment is a fixed point (which also means every
    centroid equals the mean of its members) or until the centroid
    displacement drops to ``tol`` with an unchanged assignment, capped at
    ``max_iter``.  Returns (centroids, labels, inertia, n_iter, history)
    where history holds the inertia after every iteration.
    """
    pts = _as_points(points)
    centroids = np.array(init_centroids, dtype=np.float64, copy=True)
    k = centroids.shape[0]
    labels = _assign(pts, centroids)
    history: list[float] = []
    n_iter = 0
    for _ in range(int(max_iter)):
        n_iter += 1
        new_centroids = _update(pts, labels, centroids, k)
        new_labels = _assign(pts, new_centroids)
        displacement = float(np.sqrt(((new_centroids - centroids) ** 2).sum(axis=1)).max())
        centroids = new_centroids
        history.append(_inertia(pts, centroids, new_labels))
        if np.array_equal(new_labels, labels) and displacement <= tol:
            labels = new_labels
            break
        labels = new_labels
    inertia = _inertia(pts, centroids, labels)
    return centroids, labels, inertia, n_iter, history


def kmeans_fit(
    points,
    k: int,
    seed: int = 0,
    n_restarts: int = 10,
    max_iter: int = 300,
    tol: float = 1e-4,
) -> ClusterModel:
    """Best of ``n_restarts`` k-means++-seeded Lloyd runs."""
    pts = _as_points(points)
    n = pts.shape[0]
    k = int(k)
    if not 2 <= k <= n:
        raise InvalidInput(f"k={k} outside 2..{n}")
    if int(n_restarts) < 1:
        raise InvalidInput(f"n_restarts must be >= 1, got {n_restarts}")
    seed = int(seed)
    if seed < 0:
        raise InvalidInput(f"seed must be non-negative, got {seed}")
    if np.unique(pts, axis=0).shape[0] < k:
        raise Degenerate(f"fewer than k={k} distinct points")
    best = None
    for restart in range(int(n_restarts)):
        rng = _rng_for_restart(seed, restart)
        init = kmeanspp_seed(pts, k, rng)
        centroids, labels, inertia, n_iter, _ = lloyd(pts, init, max_iter=max_iter, tol=tol)
        if best is None or inertia < best[0]:
            best = (inertia, restart, centroids, labels, n_iter)
    inertia, _, centroids, labels, n_iter = best
    return ClusterModel(
        k=k,
        centroids=centroids,
        labels=labels,
        inertia=inertia,
        seed=seed,
        n_iter=n_iter,
        n_restarts=int(n_restarts),
    )


def adjusted_rand_index(labels_a, labels_b) -> float:
    """Chance-corrected pair-counting agreement between two labelings."""
    a = np.asarray(labels_a).ravel()
    b = np.asarray(labels_b).ravel()
    if a.shape != b.shape:
        raise InvalidInput(f"label lengths differ: {a.shape} vs {b.shape}")
    n = a.size
    if n == 0:
        raise InvalidInput("empty labelings")
    _, a_idx = np.unique(a, return_inverse=True)
    _, b_idx = np.unique(b, return_inverse=True)
    table = np.zeros((a_idx.max() + 1, b_idx.max() + 1), dtype=np.int64)
    np.add.at(table, (a_idx, b_idx), 1)

    def pairs(x):
        return (x * (x - 1) // 2).sum()

    sum_cells = pairs(table)
    sum_rows = pairs(table.sum(axis=1))
    sum_cols = pairs(table.sum(axis=0))
    total = n * (n - 1) // 2
    expected = sum_rows * sum_cols / total if total else 0.0
    max_index = (sum_rows + sum_cols) / 2.0
    if max_index == expected:
        return 1.0  # both labelings trivial (all singletons or one block)
    return float((sum_cells - expected) / (max_index - expected))
