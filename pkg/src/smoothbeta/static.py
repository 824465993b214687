"""Posterior for plain Bernoulli tests with neighborhood experience sharing.

The belief at a query point x is Beta(alpha + S_x, beta + n_x - S_x), where
n_x counts experiments within l-inf distance delta of x and S_x the successes
among them. With no neighbors the prior is returned unchanged (the update
with empty sums). delta either comes from the shrinking schedule or is fixed
by the caller (the fixed mode exists for kernel-width ablations).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .betamix import UNIFORM, BetaParams
from .neighbors import NeighborIndex, as_points, delta_schedule


@dataclass(frozen=True, eq=False)
class StaticDataset:
    """Bernoulli experiments: locations ``x`` (t, d) in [0,1]^d, outcomes ``s`` in {0,1}."""

    x: np.ndarray
    s: np.ndarray
    index: NeighborIndex

    @classmethod
    def build(cls, x, s) -> "StaticDataset":
        pts = as_points(x)
        out = np.asarray(s, dtype=np.int64).reshape(-1)
        if out.size != len(pts):
            raise ValueError(f"{len(pts)} locations but {out.size} outcomes")
        if out.size and not np.all((out == 0) | (out == 1)):
            raise ValueError("outcomes must be 0 or 1")
        out.setflags(write=False)
        return cls(pts, out, NeighborIndex(pts))

    def __len__(self) -> int:
        return len(self.s)

    @property
    def dim(self) -> int:
        return self.x.shape[1]


def posterior_static(data: StaticDataset, x, delta: float, prior: BetaParams = UNIFORM) -> BetaParams:
    """Beta posterior at x from the experiments within distance delta."""
    ids = data.index.query(x, delta)
    n = ids.size
    if n == 0:
        return prior
    successes = int(data.s[ids].sum())
    return BetaParams(prior.alpha + successes, prior.beta + n - successes)


def posterior_static_scheduled(
    data: StaticDataset, x, lipschitz: float = 1.0, prior: BetaParams = UNIFORM
) -> BetaParams:
    """:func:`posterior_static` with delta from the t-dependent schedule."""
    if len(data) == 0:
        return prior
    delta = delta_schedule(len(data), data.dim, lipschitz)
    return posterior_static(data, x, delta, prior)


def count_neighbors(data: StaticDataset, xs, delta: float) -> tuple[np.ndarray, np.ndarray]:
    """Per query row: neighbor count and success count. Batched fast path."""
    hits = data.index.query_many(xs, delta)
    n = np.fromiter((ids.size for ids in hits), dtype=np.int64, count=len(hits))
    succ = np.fromiter(
        (int(data.s[ids].sum()) if ids.size else 0 for ids in hits), dtype=np.int64, count=len(hits)
    )
    return n, succ
