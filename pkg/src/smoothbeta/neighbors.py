"""Fixed-radius neighbor queries on [0,1]^d under the l-infinity norm.

Experience sharing counts every experiment within an axis-aligned box of
half-width delta around the query point (closed ball: distance exactly delta
is included). Queries are exact; a k-d tree only accelerates them, so results
must equal a brute-force scan set-for-set.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree


def delta_schedule(t: int, dim: int, lipschitz: float = 1.0, shrink: float = 1.0) -> float:
    """Kernel half-width for t samples in dimension dim.

    Returns ``min(1, lipschitz**(-2/(dim+2)) * (shrink * t)**(-1/(dim+2)))``.
    ``shrink`` discounts the effective sample count when observations carry a
    constant contextual lift B (shrink = 1 - B); leave it at 1 otherwise.
    """
    if t < 1:
        raise ValueError(f"sample count must be >= 1, got {t}")
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    if not (np.isfinite(lipschitz) and lipschitz > 0.0):
        raise ValueError(f"Lipschitz constant must be positive, got {lipschitz}")
    if not (0.0 < shrink <= 1.0):
        raise ValueError(f"shrink factor must be in (0, 1], got {shrink}")
    e = 1.0 / (dim + 2)
    return min(1.0, lipschitz ** (-2.0 * e) * (shrink * t) ** (-e))


def as_points(x, dim: int | None = None) -> np.ndarray:
    """Coerce to a (n, d) float array; 1-d input is read as n points in 1D."""
    pts = np.asarray(x, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1) if dim in (None, 1) else pts.reshape(1, -1)
    if pts.ndim != 2:
        raise ValueError(f"expected a (n, d) point array, got shape {pts.shape}")
    if dim is not None and pts.shape[1] != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {pts.shape[1]}")
    return pts


class NeighborIndex:
    """Immutable index over points in [0,1]^d answering closed-ball l-inf queries."""

    def __init__(self, points, dim: int | None = None):
        pts = as_points(points, dim)
        if pts.size and (not np.all(np.isfinite(pts)) or pts.min() < 0.0 or pts.max() > 1.0):
            raise ValueError("point out of domain")
        self._points = pts
        self._points.setflags(write=False)
        self._tree = cKDTree(pts) if len(pts) else None

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def dim(self) -> int:
        return self._points.shape[1]

    def __len__(self) -> int:
        return self._points.shape[0]

    def _check_query(self, x) -> np.ndarray:
        q = np.asarray(x, dtype=np.float64).reshape(-1)
        if q.size != self.dim:
            raise ValueError(f"dimension mismatch: query has {q.size} coordinates, index has {self.dim}")
        return q

    def query(self, x, delta: float) -> np.ndarray:
        """Ids i with ``max_k |x_k - p_ik| <= delta``, sorted ascending."""
        q = self._check_query(x)
        if self._tree is None:
            return np.empty(0, dtype=np.int64)
        ids = self._tree.query_ball_point(q, delta, p=np.inf)
        return np.sort(np.asarray(ids, dtype=np.int64))

    def query_many(self, xs, delta: float) -> list[np.ndarray]:
        """Batched :meth:`query`; one entry per row of ``xs``."""
        qs = as_points(xs, self.dim)
        if self._tree is None:
            return [np.empty(0, dtype=np.int64) for _ in range(len(qs))]
        hits = self._tree.query_ball_point(qs, delta, p=np.inf)
        return [np.sort(np.asarray(ids, dtype=np.int64)) for ids in hits]
