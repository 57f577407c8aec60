"""Boundary detection from barycentric solves, and matrix clipping.

The indicator of point k is B_k = (N_k - c y_k^T 1) / N_k, computed from the
same regularized solves that build the LLE matrix. Near the boundary it
concentrates on a dimension-dependent constant (b_function of the analytic
module); in the interior it is O(eps). Thresholding B_k labels boundary
points; the wave strip (within depth t* of the boundary) can then be clipped
out of the matrix, which empirically restores Dirichlet-like eigenvectors.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np
import scipy.sparse as sp

from .analytic import AnalyticCoeffs
from .lle import LleMatrix, build_lle_matrix, resolve_c, solve_barycentric
from .neighbors import EpsilonBall, NeighborGraph
from .samplers import PointCloud

__all__ = [
    "BoundaryReport",
    "indicator",
    "default_threshold",
    "classify",
    "partition_regions",
    "clip",
    "REGIONS",
]

REGIONS = ("wave", "near_boundary", "transition", "interior")


@dataclass(frozen=True)
class BoundaryReport:
    b_values: np.ndarray
    d: int
    eps: float
    c: float
    missing: np.ndarray
    threshold: Optional[float] = None
    labels: Optional[np.ndarray] = None
    regions: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return len(self.b_values)


def indicator(cloud: PointCloud, graph: NeighborGraph,
              c_rule: Union[float, str] = "auto",
              lle: Optional[LleMatrix] = None) -> BoundaryReport:
    """Barycentric boundary indicator B_k for every point.

    When an already-built LleMatrix is passed, its cached solves are reused
    (the indicator needs only N_k and y_k^T 1). Points without neighbors are
    marked missing and excluded from classification.
    """
    if not isinstance(graph.scheme, EpsilonBall):
        raise ValueError("the indicator is defined for the epsilon-ball scheme")
    eps = graph.scheme.eps
    counts = graph.counts
    if lle is None and not np.any(counts == 0):
        lle = build_lle_matrix(cloud, graph, c_rule)
    if lle is not None:
        c = lle.c
        n_k = lle.n_k.astype(float)
        y_sum = lle.y_sum
        missing = n_k == 0
    else:
        c = resolve_c(cloud, graph, c_rule)
        n = cloud.n
        y_sum = np.zeros(n)
        missing = counts == 0
        for k in range(n):
            idx = graph.neighbors[k]
            if len(idx) == 0:
                continue
            G = (cloud.points[idx] - cloud.points[k]).T
            y_sum[k] = solve_barycentric(G, c).y_sum
        n_k = counts.astype(float)
    b = np.full(len(n_k), np.nan)
    ok = ~missing
    b[ok] = (n_k[ok] - c * y_sum[ok]) / n_k[ok]
    return BoundaryReport(b_values=b, d=cloud.intrinsic_dim, eps=eps, c=c, missing=missing)


def default_threshold(d: int, eps: float) -> float:
    """Half the indicator limit at depth eps/2: b(0) * (3/4)^(d+1) / 2."""
    cf = AnalyticCoeffs(d, eps)
    return cf.b_at_boundary() * 0.75 ** (d + 1) / 2.0


def classify(report: BoundaryReport, tau: Optional[float] = None) -> BoundaryReport:
    """Label points boundary/interior by thresholding B_k (boundary iff B_k > tau)."""
    if tau is None:
        tau = default_threshold(report.d, report.eps)
    if tau <= 0:
        import warnings
        warnings.warn("nonpositive threshold labels every point as boundary")
    labels = np.where(report.b_values > tau, "boundary", "interior").astype("U8")
    labels[report.missing] = "missing"
    return replace(report, threshold=float(tau), labels=labels)


def _invert_b_profile(cf: AnalyticCoeffs, b: float) -> float:
    """Depth estimate from an indicator value: the t in [0, eps] with b_function(t) = b.

    b_function is strictly decreasing from b(0) to 0 on [0, eps]; values at or
    above b(0) clamp to 0, values at or below 0 clamp to eps.
    """
    b0 = cf.b_function(0.0)
    if b >= b0:
        return 0.0
    if b <= 0.0:
        return cf.eps
    lo, hi = 0.0, cf.eps
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if cf.b_function(mid) > b:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def partition_regions(cloud: PointCloud, eps: float, tstar_val: float,
                      report: Optional[BoundaryReport] = None) -> np.ndarray:
    """Per-point region labels: wave / near_boundary / transition / interior.

    Cut points: wave for dist < t*, near_boundary for t* <= dist < eps,
    transition for eps <= dist <= 2 eps, interior beyond. Uses ground-truth
    boundary distance when the cloud has one; otherwise falls back to the
    indicator-derived depth proxy (a documented heuristic that cannot see
    past depth eps, so the transition band collapses into interior).
    """
    gt = cloud.ground_truth
    if gt is not None and gt.boundary_dist is not None:
        dist = gt.boundary_dist
    elif report is not None:
        cf = AnalyticCoeffs(cloud.intrinsic_dim, eps)
        dist = np.array([_invert_b_profile(cf, b) if np.isfinite(b) else np.inf
                         for b in report.b_values])
        dist = np.where(dist >= cf.eps, 2.0 * eps + eps, dist)
    else:
        raise ValueError("no ground-truth boundary distance and no indicator report")
    out = np.empty(cloud.n, dtype="U13")
    out[dist < tstar_val] = "wave"
    out[(dist >= tstar_val) & (dist < eps)] = "near_boundary"
    out[(dist >= eps) & (dist <= 2.0 * eps)] = "transition"
    out[dist > 2.0 * eps] = "interior"
    return out


def clip(W: Union[LleMatrix, sp.spmatrix, np.ndarray], regions: np.ndarray):
    """Remove wave-region rows/columns: the principal submatrix on the rest.

    Returns (W_r, kept) where kept maps new indices to old ones. Rows of W_r
    touching removed columns no longer sum to 1.
    """
    A = W.weights if isinstance(W, LleMatrix) else W
    regions = np.asarray(regions)
    if regions.shape[0] != A.shape[0]:
        raise ValueError("region labels must match the matrix size")
    kept = np.nonzero(regions != "wave")[0]
    if len(kept) == 0:
        raise ValueError("clipping removed every point")
    if sp.issparse(A):
        Wr = A.tocsr()[kept][:, kept]
    else:
        Wr = np.asarray(A)[np.ix_(kept, kept)]
    return Wr, kept
