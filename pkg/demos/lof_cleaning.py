"""
Cleaning candidate sets with the local outlier factor
=====================================================

LOF compares the density around a point with the density around its
neighbours. Points in a sparse pocket next to a dense cluster score well above
1 and are removed before a label vector is averaged.
"""

import numpy as np

from labelvec.lof import LofParams, filter_outliers, lof_scores

rng = np.random.default_rng(3)
cluster = rng.uniform(-1, 1, size=(60, 2))
stragglers = np.array([[4.0, 4.0], [-5.0, 3.5], [0.0, -6.0]])
points = np.vstack([cluster, stragglers])

scores = lof_scores(points, k=10)
print("cluster scores: min %.2f max %.2f" % (scores[:60].min(), scores[:60].max()))
print("straggler scores:", np.round(scores[60:], 2))

kept = filter_outliers(points, LofParams(k=10, score_threshold=1.5))
print(f"kept {len(kept)} of {len(points)}; removed {sorted(set(range(len(points))) - set(kept))}")

###############################################################################
# Scores are ratios of densities, so rescaling the space changes nothing.
print(np.allclose(lof_scores(points * 1000, k=10), scores))

###############################################################################
# Distance ties widen the neighbourhood: on a square every corner has two
# nearest neighbours at distance 1, and all four score exactly 1.
square = np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)
print(lof_scores(square, k=1))
