"""Nearest-neighbor search and local data matrices.

Two schemes are supported: the open epsilon-radius ball (membership is the
strict inequality ||x_j - x_k|| < eps) and K nearest neighbors with ties
broken toward the smaller index. The epsilon scheme is accelerated by a
uniform grid over cells of side eps; results are exactly those of the brute
force scan because candidates are always checked against the true distance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Union

import numpy as np

from .samplers import PointCloud

__all__ = [
    "EpsilonBall",
    "Knn",
    "NeighborGraph",
    "build_graph",
    "brute_force_neighbors",
    "local_data_matrix",
]


@dataclass(frozen=True)
class EpsilonBall:
    eps: float

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")


@dataclass(frozen=True)
class Knn:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")


Scheme = Union[EpsilonBall, Knn]


@dataclass(frozen=True)
class NeighborGraph:
    scheme: Scheme
    neighbors: List[np.ndarray]
    distances: List[np.ndarray]

    @property
    def n(self) -> int:
        return len(self.neighbors)

    @property
    def counts(self) -> np.ndarray:
        return np.array([len(ix) for ix in self.neighbors], dtype=int)


def _sq_dists(points: np.ndarray, cand: np.ndarray, k: int) -> np.ndarray:
    diff = points[cand] - points[k]
    return np.einsum("ij,ij->i", diff, diff)


def _grid_eps_lists(points: np.ndarray, eps: float):
    n, p = points.shape
    cells = np.floor(points / eps).astype(np.int64)
    buckets: dict = {}
    for i in range(n):
        buckets.setdefault(tuple(cells[i]), []).append(i)
    offsets = np.array(np.meshgrid(*([[-1, 0, 1]] * p), indexing="ij")).reshape(p, -1).T
    e2 = eps * eps
    nbrs, dists = [], []
    for k in range(n):
        base = cells[k]
        cand: list = []
        for off in offsets:
            cand.extend(buckets.get(tuple(base + off), ()))
        cand = np.asarray(cand, dtype=int)
        d2 = _sq_dists(points, cand, k)
        sel = (d2 < e2) & (cand != k)
        order = np.argsort(cand[sel], kind="stable")
        nbrs.append(cand[sel][order])
        dists.append(np.sqrt(d2[sel][order]))
    return nbrs, dists


def _brute_eps_lists(points: np.ndarray, eps: float):
    n = points.shape[0]
    e2 = eps * eps
    all_idx = np.arange(n)
    nbrs, dists = [], []
    for k in range(n):
        d2 = _sq_dists(points, all_idx, k)
        sel = (d2 < e2) & (all_idx != k)
        nbrs.append(all_idx[sel])
        dists.append(np.sqrt(d2[sel]))
    return nbrs, dists


def _knn_lists(points: np.ndarray, k: int, block: int = 512):
    n = points.shape[0]
    if k >= n:
        raise ValueError(f"knn requires k < n (got k={k}, n={n})")
    sq = (points ** 2).sum(axis=1)
    nbrs, dists = [], []
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        d2 = sq[lo:hi, None] - 2.0 * points[lo:hi] @ points.T + sq[None, :]
        np.maximum(d2, 0.0, out=d2)
        for r in range(hi - lo):
            row = d2[r].copy()
            row[lo + r] = np.inf
            # ascending distance, ties to the smaller index
            order = np.lexsort((np.arange(n), row))[:k]
            nbrs.append(order)
            dists.append(np.sqrt(row[order]))
    return nbrs, dists


def build_graph(cloud: PointCloud, scheme: Scheme) -> NeighborGraph:
    """Exact neighbor lists of every point under the given scheme.

    Points with no neighbor under the epsilon scheme get an empty list;
    downstream constructions decide how to treat them.
    """
    points = cloud.points
    if isinstance(scheme, EpsilonBall):
        # the grid enumerates 3^p cells per query; fall back for high p
        if points.shape[1] <= 6 and points.shape[0] > 64:
            nbrs, dists = _grid_eps_lists(points, scheme.eps)
        else:
            nbrs, dists = _brute_eps_lists(points, scheme.eps)
    elif isinstance(scheme, Knn):
        nbrs, dists = _knn_lists(points, scheme.k)
    else:
        raise TypeError(f"unknown scheme {scheme!r}")
    return NeighborGraph(scheme, [np.asarray(ix, dtype=int) for ix in nbrs], dists)


def brute_force_neighbors(cloud: PointCloud, scheme: Scheme) -> NeighborGraph:
    """Reference implementation used as the oracle for build_graph."""
    points = cloud.points
    if isinstance(scheme, EpsilonBall):
        nbrs, dists = _brute_eps_lists(points, scheme.eps)
    else:
        nbrs, dists = _knn_lists(points, scheme.k, block=points.shape[0])
    return NeighborGraph(scheme, [np.asarray(ix, dtype=int) for ix in nbrs], dists)


def local_data_matrix(cloud: PointCloud, graph: NeighborGraph, k: int) -> np.ndarray:
    """p x N_k matrix whose columns are the centered neighbors x_{k,j} - x_k."""
    idx = graph.neighbors[k]
    if len(idx) == 0:
        raise ValueError(f"point {k} has no neighbors (empty neighborhood)")
    return (cloud.points[idx] - cloud.points[k]).T
