"""Barycentric solves and LLE matrix assembly.

Per point, the regularized normal equations (G^T G + c I) y = 1 are solved
either directly (N x N) or through the eigendecomposition of the small p x p
Gram matrix G G^T; the two routes agree to rounding and the cheaper one is
picked by default. Row-normalizing y gives the barycentric weights, hence the
row-stochastic LLE matrix W. The module also builds the comparison kernels:
the alpha-family interpolating between the 0-1 kernel and the signed LLE
kernel, and the Gaussian diffusion-map matrix.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np
import scipy.sparse as sp

from .neighbors import EpsilonBall, NeighborGraph, Scheme, build_graph
from .samplers import PointCloud

__all__ = [
    "BarycentricSolution",
    "LleMatrix",
    "solve_barycentric",
    "augmented_vector_discrete",
    "default_regularizer",
    "build_lle_matrix",
    "apply_shifted",
    "build_alpha_kernel_matrix",
    "build_dm_matrix",
]


@dataclass(frozen=True)
class BarycentricSolution:
    """Unnormalized kernel vector y, weights w = y / sum(y), and the sum."""

    y: np.ndarray
    w: np.ndarray
    y_sum: float
    c: float


def _validate(G: np.ndarray, c: float) -> np.ndarray:
    G = np.atleast_2d(np.asarray(G, dtype=float))
    if not c > 0:
        raise ValueError("regularizer c must be positive")
    if G.shape[1] == 0:
        raise ValueError("empty neighborhood: local data matrix has no columns")
    return G


def _solve_direct(G: np.ndarray, c: float) -> np.ndarray:
    N = G.shape[1]
    A = G.T @ G + c * np.eye(N)
    return np.linalg.solve(A, np.ones(N))


def _gram_eig(G: np.ndarray, c: float):
    """Eigen data of G G^T: (U, lam descending, regularized inverse spectrum).

    The numerical rank r counts eigenvalues above max(p, N) * eps_mach * lam_max;
    directions beyond r are annihilated rather than regularized.
    """
    p, N = G.shape
    lam, U = np.linalg.eigh(G @ G.T)
    lam = lam[::-1]
    U = U[:, ::-1]
    lam_max = max(float(lam[0]), 0.0)
    thr = max(p, N) * np.finfo(float).eps * lam_max
    r = int(np.sum(lam > thr))
    inv = np.zeros(p)
    if r > 0:
        inv[:r] = 1.0 / (lam[:r] + c)
    return U, lam, inv, r


def augmented_vector_discrete(G: np.ndarray, c: float) -> np.ndarray:
    """Discrete augmented vector T_n = U I_r (Lambda + cI)^(-1) U^T G 1."""
    G = _validate(G, c)
    U, _, inv, _ = _gram_eig(G, c)
    return U @ (inv * (U.T @ G.sum(axis=1)))


def _solve_gram(G: np.ndarray, c: float) -> np.ndarray:
    Tn = augmented_vector_discrete(G, c)
    return (1.0 - G.T @ Tn) / c


def solve_barycentric(G: np.ndarray, c: float, path: str = "auto") -> BarycentricSolution:
    """Solve (G^T G + c I) y = 1 and normalize.

    path: "auto" uses the p x p gram route when N > p, the direct N x N solve
    otherwise; "direct" and "gram" force a route (used to cross-check them).
    """
    G = _validate(G, c)
    p, N = G.shape
    if path == "auto":
        path = "gram" if N > p else "direct"
    if path == "direct":
        y = _solve_direct(G, c)
    elif path == "gram":
        y = _solve_gram(G, c)
    else:
        raise ValueError(f"unknown path {path!r}")
    y_sum = float(y.sum())
    return BarycentricSolution(y=y, w=y / y_sum, y_sum=y_sum, c=c)


def default_regularizer(n: int, eps: float, d: int) -> float:
    """The operative regularizer c = n * eps^(d+3)."""
    return float(n) * float(eps) ** (d + 3)


def _scheme_meta(scheme: Scheme) -> dict:
    if isinstance(scheme, EpsilonBall):
        return {"scheme": "epsilon_ball", "epsilon": scheme.eps, "K": None}
    return {"scheme": "knn", "epsilon": None, "K": scheme.k}


@dataclass(frozen=True)
class LleMatrix:
    """Row-form LLE matrix with the per-row solve byproducts.

    weights holds the row-stochastic W; kernel holds the unnormalized y values
    on the same sparsity pattern (row k equals y_k). meta records n, scheme,
    epsilon, K, c, d and seed for persistence sidecars.
    """

    weights: sp.csr_matrix
    kernel: sp.csr_matrix = field(repr=False)
    y_sum: np.ndarray
    n_k: np.ndarray
    c: float
    meta: dict

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def row_kernel(self, k: int) -> np.ndarray:
        """Unnormalized kernel vector y_k (in neighbor-index order)."""
        return self.kernel.data[self.kernel.indptr[k]:self.kernel.indptr[k + 1]]


def resolve_c(cloud: PointCloud, graph: NeighborGraph,
              c_rule: Union[float, str], eps: Optional[float] = None) -> float:
    """Resolve the regularizer: an explicit float or the "auto" rule."""
    if isinstance(c_rule, str):
        if c_rule != "auto":
            raise ValueError(f"unknown c_rule {c_rule!r}")
        if eps is None:
            if isinstance(graph.scheme, EpsilonBall):
                eps = graph.scheme.eps
            else:
                raise ValueError(
                    "c_rule='auto' needs a bandwidth: the graph is KNN, so pass eps explicitly")
        return default_regularizer(cloud.n, eps, cloud.intrinsic_dim)
    c = float(c_rule)
    if not c > 0:
        raise ValueError("regularizer c must be positive")
    return c


def build_lle_matrix(cloud: PointCloud, graph: NeighborGraph,
                     c_rule: Union[float, str] = "auto",
                     eps: Optional[float] = None,
                     workers: int = 0) -> LleMatrix:
    """Assemble the n x n LLE matrix from per-point barycentric solves.

    The rows are independent functions of the immutable (cloud, graph) pair
    and write to disjoint slices, so with workers > 0 they are solved by a
    thread pool; the assembled matrix is identical regardless of schedule.
    """
    n = cloud.n
    counts = graph.counts
    if np.any(counts == 0):
        isolated = np.nonzero(counts == 0)[0]
        raise ValueError(f"isolated points (no neighbors): {isolated.tolist()}")
    c = resolve_c(cloud, graph, c_rule, eps)
    points = cloud.points
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    indices = np.concatenate(graph.neighbors)
    wdata = np.empty(indptr[-1])
    ydata = np.empty(indptr[-1])
    y_sum = np.empty(n)

    def solve_row(k: int) -> None:
        idx = graph.neighbors[k]
        G = (points[idx] - points[k]).T
        sol = solve_barycentric(G, c)
        lo, hi = indptr[k], indptr[k + 1]
        wdata[lo:hi] = sol.w
        ydata[lo:hi] = sol.y
        y_sum[k] = sol.y_sum

    if workers > 0:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(solve_row, range(n), chunksize=256))
    else:
        for k in range(n):
            solve_row(k)
    if np.any(y_sum <= 0):
        bad = np.nonzero(y_sum <= 0)[0]
        warnings.warn(f"rows with nonpositive kernel sum (weights flip sign): {bad.tolist()}")
    W = sp.csr_matrix((wdata, indices, indptr), shape=(n, n))
    Y = sp.csr_matrix((ydata, indices.copy(), indptr.copy()), shape=(n, n))
    meta = {"n": n, "c": c, "d": cloud.intrinsic_dim, "seed": cloud.seed}
    meta.update(_scheme_meta(graph.scheme))
    if eps is not None:
        meta["epsilon"] = eps
    return LleMatrix(weights=W, kernel=Y, y_sum=y_sum, n_k=counts, c=c, meta=meta)


def apply_shifted(lle: Union[LleMatrix, sp.spmatrix, np.ndarray], f: np.ndarray) -> np.ndarray:
    """(W - I) f."""
    W = lle.weights if isinstance(lle, LleMatrix) else lle
    f = np.asarray(f, dtype=float)
    if W.shape[1] != f.shape[0]:
        raise ValueError(f"dimension mismatch: W is {W.shape}, f has length {f.shape[0]}")
    return W @ f - f


def build_alpha_kernel_matrix(cloud: PointCloud, graph: NeighborGraph,
                              c: float, alpha: float) -> LleMatrix:
    """Row-normalized alpha-kernel matrix.

    Row k entries are alpha * 1 + (1 - alpha) * K2 with
    K2(x_k, x_j) = -(x_j - x_k)^T T_n(x_k), using the discrete augmented
    vector. alpha=1 gives uniform rows; alpha=1/2 reproduces the LLE weights.
    Rows whose entry sum is <= 0 are reported and left unnormalized.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    n = cloud.n
    counts = graph.counts
    if np.any(counts == 0):
        raise ValueError(f"isolated points: {np.nonzero(counts == 0)[0].tolist()}")
    points = cloud.points
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    indices = np.concatenate(graph.neighbors)
    kdata = np.empty(indptr[-1])
    wdata = np.empty(indptr[-1])
    row_sum = np.empty(n)
    degenerate: List[int] = []
    for k in range(n):
        idx = graph.neighbors[k]
        G = (points[idx] - points[k]).T
        Tn = augmented_vector_discrete(G, c)
        vals = alpha - (1.0 - alpha) * (G.T @ Tn)
        s = float(vals.sum())
        lo, hi = indptr[k], indptr[k + 1]
        kdata[lo:hi] = vals
        row_sum[k] = s
        if s <= 0:
            degenerate.append(k)
            wdata[lo:hi] = vals
        else:
            wdata[lo:hi] = vals / s
    if degenerate:
        warnings.warn(f"alpha-kernel rows with nonpositive sum left unnormalized: {degenerate}")
    W = sp.csr_matrix((wdata, indices, indptr), shape=(n, n))
    K = sp.csr_matrix((kdata, indices.copy(), indptr.copy()), shape=(n, n))
    meta = {"n": n, "c": c, "d": cloud.intrinsic_dim, "seed": cloud.seed,
            "alpha": alpha, "degenerate_rows": degenerate}
    meta.update(_scheme_meta(graph.scheme))
    return LleMatrix(weights=W, kernel=K, y_sum=row_sum, n_k=counts, c=c, meta=meta)


def build_dm_matrix(cloud: PointCloud, eps: float, alpha: float) -> sp.csr_matrix:
    """Row-stochastic diffusion-map matrix with Gaussian kernel exp(-(r/eps)^2).

    The affinity is alpha-normalized by the empirical kernel density
    p_i = sum_j H_ij (self term included) before row normalization. Support is
    truncated at radius 4*eps, where the Gaussian tail is below 1.2e-7.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    n = cloud.n
    graph = build_graph(cloud, EpsilonBall(4.0 * eps))
    rows, cols, vals = [], [], []
    for k in range(n):
        idx = graph.neighbors[k]
        h = np.exp(-(graph.distances[k] / eps) ** 2)
        rows.append(np.full(len(idx) + 1, k))
        cols.append(np.concatenate([idx, [k]]))
        vals.append(np.concatenate([h, [1.0]]))  # self affinity H(0) = 1
    H = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(n, n))
    p_eps = np.asarray(H.sum(axis=1)).ravel()
    if alpha > 0:
        scale = p_eps ** (-alpha)
        H = sp.diags(scale) @ H @ sp.diags(scale)
    row = np.asarray(H.sum(axis=1)).ravel()
    return (sp.diags(1.0 / row) @ H).tocsr()
