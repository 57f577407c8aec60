"""Bit-stable text persistence for clouds, sparse matrices, spectra, reports.

Everything is decimal CSV with 17 significant digits (enough to round-trip a
double exactly), UTF-8, LF line endings. Sparse matrices are stored as
lexicographically sorted triplets next to a JSON sidecar carrying the build
metadata, so a load can validate what it reads.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp

from .boundary import BoundaryReport
from .lle import LleMatrix
from .samplers import PointCloud
from .spectral import Spectrum

__all__ = [
    "save_matrix",
    "load_matrix",
    "save_cloud",
    "save_spectrum",
    "save_eigenvectors",
    "save_report",
]

SIDECAR_KEYS = ("n", "scheme", "epsilon", "K", "c", "d", "seed")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_lines(path: Path, lines) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")


def save_matrix(W: Union[LleMatrix, sp.spmatrix, np.ndarray], path,
                meta: Optional[dict] = None) -> Path:
    """Write triplets `row,col,value` (sorted by row, then col) plus a JSON sidecar."""
    path = Path(path)
    if isinstance(W, LleMatrix):
        meta = dict(W.meta) if meta is None else meta
        A = W.weights
    else:
        A = W
    if meta is None:
        meta = {}
    A = sp.coo_matrix(A)
    order = np.lexsort((A.col, A.row))
    lines = ["row,col,value"]
    lines += [f"{A.row[i]},{A.col[i]},{_fmt(A.data[i])}" for i in order]
    _write_lines(path, lines)
    sidecar = {key: meta.get(key) for key in SIDECAR_KEYS}
    sidecar["n"] = int(A.shape[0])
    extra = {k: v for k, v in meta.items() if k not in SIDECAR_KEYS}
    sidecar.update(extra)
    with open(path.with_suffix(path.suffix + ".json"), "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return path


def load_matrix(path) -> Tuple[sp.csr_matrix, dict]:
    """Load a triplet file and its sidecar; validates both."""
    path = Path(path)
    sidecar_path = path.with_suffix(path.suffix + ".json")
    if not sidecar_path.exists():
        raise ValueError(f"missing sidecar {sidecar_path}")
    with open(sidecar_path, encoding="utf-8") as fh:
        meta = json.load(fh)
    missing = [k for k in SIDECAR_KEYS if k not in meta]
    if missing:
        raise ValueError(f"sidecar {sidecar_path} lacks required keys: {missing}")
    rows, cols, vals = [], [], []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != "row,col,value":
            raise ValueError(f"{path}: line 1: expected header 'row,col,value', got {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ValueError(f"{path}: line {lineno}: expected 3 fields, got {len(parts)}")
            try:
                rows.append(int(parts[0]))
                cols.append(int(parts[1]))
                vals.append(float(parts[2]))
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
    n = int(meta["n"])
    if rows and (max(rows) >= n or max(cols) >= n):
        raise ValueError(f"{path}: triplet index exceeds n={n} from the sidecar")
    M = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    return M, meta


def save_cloud(cloud: PointCloud, path) -> Path:
    """Cloud CSV with header x1,...,xp and a trailing bdist column when known."""
    path = Path(path)
    p = cloud.ambient_dim
    gt = cloud.ground_truth
    bdist = None if gt is None else gt.boundary_dist
    header = ",".join(f"x{i + 1}" for i in range(p)) + ("" if bdist is None else ",bdist")
    lines = [header]
    for i in range(cloud.n):
        cells = [_fmt(v) for v in cloud.points[i]]
        if bdist is not None:
            cells.append(_fmt(bdist[i]))
        lines.append(",".join(cells))
    _write_lines(path, lines)
    return path


def save_spectrum(spec: Spectrum, path) -> Path:
    """Spectrum CSV `re,im[,residual]`."""
    path = Path(path)
    with_res = spec.residuals is not None
    lines = ["re,im,residual" if with_res else "re,im"]
    for i, lam in enumerate(spec.eigenvalues):
        cells = [_fmt(lam.real), _fmt(lam.imag)]
        if with_res:
            cells.append(_fmt(spec.residuals[i]))
        lines.append(",".join(cells))
    _write_lines(path, lines)
    return path


def save_eigenvectors(spec: Spectrum, path, meta: Optional[dict] = None) -> Path:
    """Eigenvector matrix CSV, one column per line (column-major), plus sidecar."""
    path = Path(path)
    if spec.eigenvectors is None:
        raise ValueError("spectrum carries no eigenvectors")
    vecs = spec.eigenvectors
    lines = []
    for j in range(vecs.shape[1]):
        for i in range(vecs.shape[0]):
            lines.append(f"{_fmt(vecs[i, j].real)},{_fmt(vecs[i, j].imag)}")
    _write_lines(path, lines)
    sidecar = {"n": int(vecs.shape[0]), "k": int(vecs.shape[1]),
               "ordering": spec.ordering, "method": spec.method,
               "layout": "column-major"}
    if meta:
        sidecar.update(meta)
    with open(path.with_suffix(path.suffix + ".json"), "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return path


def save_report(report: BoundaryReport, path,
                bdist: Optional[np.ndarray] = None) -> Path:
    """Indicator report CSV `idx,B,label,region[,bdist]`."""
    path = Path(path)
    labels = report.labels
    regions = report.regions
    header = "idx,B,label,region" + ("" if bdist is None else ",bdist")
    lines = [header]
    for i in range(report.n):
        cells = [str(i), _fmt(report.b_values[i]) if np.isfinite(report.b_values[i]) else "nan",
                 "" if labels is None else str(labels[i]),
                 "" if regions is None else str(regions[i])]
        if bdist is not None:
            cells.append(_fmt(bdist[i]))
        lines.append(",".join(cells))
    _write_lines(path, lines)
    return path
