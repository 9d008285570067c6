"""Exact Euclidean distance and k-th nearest-neighbor radius kernels.

All distance work is tiled over blocks of rows so peak memory beyond the
output stays bounded by the block size, and all arithmetic runs in double
precision. Comparisons happen in squared-distance space internally; square
roots are taken only at public boundaries (monotone, so order statistics
and strict comparisons are unaffected).
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import DataError, ParameterError

logger = logging.getLogger(__name__)

DEFAULT_BLOCK = 1024


def as_embedding_array(x, name: str = "embeddings") -> np.ndarray:
    """Validate and coerce input to a C-contiguous float64 N x D matrix.

    Already-conforming arrays pass through without a copy. Positions in
    error messages are 1-based.
    """
    arr = np.asarray(x)
    if arr.ndim != 2:
        raise DataError(f"{name} must be a 2-D array of shape (n_samples, dim), "
                        f"got {arr.ndim}-D")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DataError(f"{name} must have at least one row and one column, "
                        f"got shape {arr.shape}")
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    if not np.isfinite(arr).all():
        i, j = np.argwhere(~np.isfinite(arr))[0]
        raise DataError(f"{name}: non-finite value at row {i + 1}, column {j + 1}")
    return arr


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[1] != b.shape[1]:
        raise DataError(f"dimension mismatch: one set has dim {a.shape[1]}, "
                        f"the other has dim {b.shape[1]}")


def _check_k(k, n: int, *, name: str = "k") -> int:
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise ParameterError(f"{name} must be an integer, got {k!r}")
    k = int(k)
    if k < 1:
        raise ParameterError(f"{name} must be at least 1, got {k}")
    if k > n - 1:
        raise ParameterError(f"{name}={k} needs a set of at least {k + 1} samples "
                             f"(k-th neighbor excludes self), got {n}")
    return k


def _sq_norms(x: np.ndarray) -> np.ndarray:
    return np.einsum("ij,ij->i", x, x)


def _tile_sq(a, b, na, nb, i0, i1, same):
    """Squared distances between rows i0:i1 of a and all rows of b.

    Gram-trick expansion; negatives from cancellation are clamped to 0.
    When a and b are the same set the diagonal is forced to exactly 0 so
    self-distances never depend on rounding.
    """
    d2 = a[i0:i1] @ b.T
    d2 *= -2.0
    d2 += na[i0:i1, None]
    d2 += nb[None, :]
    np.maximum(d2, 0.0, out=d2)
    if same:
        d2[np.arange(i1 - i0), np.arange(i0, i1)] = 0.0
    return d2


def _tile_ranges(n: int, block: int):
    block = max(1, int(block))
    return [(i0, min(i0 + block, n)) for i0 in range(0, n, block)]


def _run_tiles(jobs, threads: int):
    threads = max(1, int(threads))
    if threads == 1 or len(jobs) <= 1:
        for job in jobs:
            yield job()
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(job) for job in jobs]
            for fut in futures:
                yield fut.result()


def pairwise_distances(a, b, *, block: int = DEFAULT_BLOCK, threads: int = 1) -> np.ndarray:
    """Full matrix of Euclidean distances between rows of a and rows of b."""
    a = as_embedding_array(a, "a")
    same = b is a
    b = a if same else as_embedding_array(b, "b")
    _check_same_dim(a, b)
    na = _sq_norms(a)
    nb = na if same else _sq_norms(b)
    out = np.empty((a.shape[0], b.shape[0]))

    def make_job(i0, i1):
        def job():
            np.sqrt(_tile_sq(a, b, na, nb, i0, i1, same), out=out[i0:i1])
        return job

    jobs = [make_job(i0, i1) for i0, i1 in _tile_ranges(a.shape[0], block)]
    for _ in _run_tiles(jobs, threads):
        pass
    return out


def _kth_radii_sq(x, na, ks, block, threads):
    """Squared k-th NN radii (self excluded) for each k in ks, shape (len(ks), n).

    The self-distance is included as an exact 0 in every row, so index k of
    the partially sorted row is the k-th neighbor excluding self; this stays
    exact under duplicate points (the extra zeros shift ranks uniformly).
    """
    n = x.shape[0]
    ks = sorted(set(int(k) for k in ks))
    out = np.empty((len(ks), n))

    def make_job(i0, i1):
        def job():
            d2 = _tile_sq(x, x, na, na, i0, i1, True)
            part = np.partition(d2, ks, axis=1)
            for row, k in enumerate(ks):
                out[row, i0:i1] = part[:, k]
        return job

    jobs = [make_job(i0, i1) for i0, i1 in _tile_ranges(n, block)]
    for _ in _run_tiles(jobs, threads):
        pass
    return ks, out


def kth_nn_radii(a, k: int, *, block: int = DEFAULT_BLOCK, threads: int = 1) -> np.ndarray:
    """Distance from each row of a to its k-th nearest neighbor, self excluded.

    Uses introselect partitioning per tile (no full sort) but matches the
    full-sort oracle exactly. Zero radii (duplicate rows) are permitted and
    counted in a warning.
    """
    a = as_embedding_array(a, "a")
    k = _check_k(k, a.shape[0])
    _, radii_sq = _kth_radii_sq(a, _sq_norms(a), [k], block, threads)
    radii = np.sqrt(radii_sq[0])
    zero = int(np.count_nonzero(radii == 0.0))
    if zero:
        logger.warning("%d of %d k-NN radii are zero (duplicate points); "
                       "their balls are empty under strict membership",
                       zero, a.shape[0])
    return radii


def scan_balls(centers, points, radii_sq, *, same: bool = False,
               block: int = DEFAULT_BLOCK, threads: int = 1):
    """Stream strict ball-membership tests of points against center balls.

    radii_sq is a list of per-center squared-radius vectors. For each one,
    returns (point_hit, point_count, center_hit):

      point_hit[j]   - point j lies strictly inside at least one ball
      point_count[j] - number of balls strictly containing point j (int64)
      center_hit[i]  - ball i strictly contains at least one point

    Accumulation uses only exact operations (bool OR, integer sums), so the
    result is independent of tile scheduling and thread count.
    """
    n, m = centers.shape[0], points.shape[0]
    nc = _sq_norms(centers)
    npts = nc if same else _sq_norms(points)
    point_hit = [np.zeros(m, dtype=bool) for _ in radii_sq]
    point_count = [np.zeros(m, dtype=np.int64) for _ in radii_sq]
    center_hit = [np.zeros(n, dtype=bool) for _ in radii_sq]

    def make_job(i0, i1):
        def job():
            d2 = _tile_sq(centers, points, nc, npts, i0, i1, same)
            parts = []
            for r in radii_sq:
                in_ball = d2 < r[i0:i1, None]
                parts.append((in_ball.any(axis=0),
                              in_ball.sum(axis=0, dtype=np.int64),
                              in_ball.any(axis=1)))
            return i0, i1, parts
        return job

    jobs = [make_job(i0, i1) for i0, i1 in _tile_ranges(n, block)]
    for i0, i1, parts in _run_tiles(jobs, threads):
        for idx, (p_hit, p_cnt, c_hit) in enumerate(parts):
            point_hit[idx] |= p_hit
            point_count[idx] += p_cnt
            center_hit[idx][i0:i1] = c_hit
    return list(zip(point_hit, point_count, center_hit))
