import time

import numpy as np
import pytest

from lleboundary import EpsilonBall, build_graph, build_lle_matrix
from lleboundary.samplers import PointCloud, sample_disk, sample_interval

DISK_SEEDS = (1, 2, 3)


def s1_grid_cloud(m: int) -> PointCloud:
    """Uniform 2m-point grid on the unit circle (closed manifold fixture)."""
    n = 2 * m
    ang = 2.0 * np.pi * np.arange(n) / n
    pts = np.column_stack([np.cos(ang), np.sin(ang)])
    return PointCloud(pts, intrinsic_dim=1, seed=0, manifold_tag="s1_grid")


def s1_grid_eps(m: int) -> float:
    """Radius capturing exactly the two adjacent grid points."""
    n = 2 * m
    return 0.5 * (2.0 * np.sin(np.pi / n) + 2.0 * np.sin(2.0 * np.pi / n))


# ten-point cloud whose 5-NN LLE matrix at c = 1e-3 has an eigenvalue -2.4233
TEN_POINTS = np.array([
    (-0.56, -0.34, 1.03),
    (-0.51, 0.32, -0.02),
    (-0.53, -1.47, -0.57),
    (1.34, 0.47, -0.15),
    (1.01, -1.56, 1.22),
    (-0.55, -1.00, -0.07),
    (0.09, -1.04, -0.20),
    (-1.27, 2.07, -0.90),
    (1.26, -0.71, -1.20),
    (1.46, 0.00, 0.61),
])


def ten_point_cloud() -> PointCloud:
    return PointCloud(TEN_POINTS.copy(), intrinsic_dim=3, seed=0, manifold_tag="fixture10")


@pytest.fixture(scope="session")
def disk_runs():
    """Full-scale disk builds (n_raw=20000, eps=0.1, automatic regularizer), three seeds.

    Returns a list of dicts with the cloud, graph, lle and the wall time spent.
    """
    runs = []
    for seed in DISK_SEEDS:
        t0 = time.perf_counter()
        cloud = sample_disk(20000, seed=seed)
        graph = build_graph(cloud, EpsilonBall(0.1))
        lle = build_lle_matrix(cloud, graph, "auto")
        runs.append({"seed": seed, "cloud": cloud, "graph": graph, "lle": lle,
                     "build_seconds": time.perf_counter() - t0})
    return runs


@pytest.fixture(scope="session")
def interval_runs():
    """Full-scale interval builds (n=8000, eps=0.01, automatic regularizer), three seeds."""
    runs = []
    for seed in DISK_SEEDS:
        t0 = time.perf_counter()
        cloud = sample_interval(8000, seed=seed)
        graph = build_graph(cloud, EpsilonBall(0.01))
        lle = build_lle_matrix(cloud, graph, "auto")
        runs.append({"seed": seed, "cloud": cloud, "graph": graph, "lle": lle,
                     "build_seconds": time.perf_counter() - t0})
    return runs
