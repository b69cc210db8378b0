"""Local Outlier Factor (Breunig et al., 2000) with exact k-distance ties.

The k-neighbourhood of a point is every other point whose distance does not
exceed its k-distance, so it can hold more than k members when distances tie.
Coincident points are handled literally: when every neighbour of a point sits
at reachability distance 0 its local reachability density is capped at
``LRD_CAP`` instead of being infinite. A set of identical points therefore
scores 1 everywhere.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

logger = logging.getLogger(__name__)

LRD_CAP = 1e10
_BLOCK = 512


@dataclass(frozen=True)
class LofParams:
    k: int = 20
    score_threshold: float = 1.5

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("LOF k must be >= 1")
        if not self.score_threshold > 0:
            raise ValueError("LOF score_threshold must be > 0")


def _neighbourhoods(points: np.ndarray, k: int):
    n = len(points)
    kdist = np.empty(n)
    neighbours: list[np.ndarray] = []
    distances: list[np.ndarray] = []
    for start in range(0, n, _BLOCK):
        block = cdist(points[start:start + _BLOCK], points)
        for row, dist in enumerate(block):
            i = start + row
            dist[i] = np.inf
            kd = np.partition(dist, k - 1)[k - 1]
            idx = np.flatnonzero(dist <= kd)
            kdist[i] = kd
            neighbours.append(idx)
            distances.append(dist[idx])
    return kdist, neighbours, distances


def lof_scores(points, k: int) -> np.ndarray:
    """LOF score of every row of `points` under Euclidean distance.

    `k` is clamped to ``len(points) - 1``. Scores near 1 mean the point is as
    dense as its neighbours; scores well above 1 flag outliers.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise ValueError("points must be a 2-D array")
    n = len(points)
    if n < 2:
        raise ValueError("LOF needs at least 2 points")
    if k < 1:
        raise ValueError("k must be >= 1")
    k = min(k, n - 1)
    kdist, neighbours, distances = _neighbourhoods(points, k)

    lrd = np.empty(n)
    for i in range(n):
        mean_reach = np.maximum(kdist[neighbours[i]], distances[i]).mean()
        lrd[i] = 1.0 / mean_reach if mean_reach > 0 else LRD_CAP
    lrd = np.minimum(lrd, LRD_CAP)
    return np.array([(lrd[nb] / lrd[i]).mean() for i, nb in enumerate(neighbours)])


def filter_outliers(points, params: LofParams = LofParams()) -> list[int]:
    """Indices of points whose LOF is at most ``params.score_threshold``, in input order.

    If every point exceeds the threshold, only the lowest-scoring point is kept.
    """
    scores = lof_scores(points, params.k)
    kept = np.flatnonzero(scores <= params.score_threshold)
    if len(kept) == 0:
        best = int(np.argmin(scores))
        logger.warning("all %d points exceed LOF threshold %.3g; keeping index %d only",
                       len(scores), params.score_threshold, best)
        return [best]
    return kept.tolist()
