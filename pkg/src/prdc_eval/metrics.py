"""The four sample-set metrics: precision, recall, density, coverage.

Conventions shared by every operation:

- Balls sit on k-th nearest-neighbor radii (self excluded) of one set.
- Membership is STRICT (distance < radius). On two copies of the same
  generic-position set this makes all four metrics exactly 1.0, and it
  leaves zero-radius balls (duplicate points) empty rather than
  self-containing.
- precision: fraction of fake samples inside the union of real balls.
- recall: fraction of real samples inside the union of fake balls.
- density: mean over fake samples of (number of real balls containing the
  sample) / k. Can exceed 1.
- coverage: fraction of real balls containing at least one fake sample.

recall(real, fake, k) and precision(fake, real, k) execute identical
floating-point work, so their equality is exact, not approximate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .knn import (DEFAULT_BLOCK, _check_k, _check_same_dim, _kth_radii_sq,
                  _sq_norms, as_embedding_array, scan_balls)

DEFAULT_K_PR = 3
DEFAULT_K_DC = 5


@dataclass
class PrdcScores:
    """The four metric values for one (real, fake) pair."""

    precision: float
    recall: float
    density: float
    coverage: float
    k_pr: int
    k_dc: int
    n_real: int
    n_fake: int
    metadata: dict = field(default_factory=dict)

    def as_record(self) -> dict:
        """The fixed 8-field serialization record, in schema order."""
        return {
            "precision": self.precision,
            "recall": self.recall,
            "density": self.density,
            "coverage": self.coverage,
            "k_pr": self.k_pr,
            "k_dc": self.k_dc,
            "n_real": self.n_real,
            "n_fake": self.n_fake,
        }


def _prepare(real, fake):
    r = as_embedding_array(real, "real")
    if fake is real:
        return r, r, True
    f = as_embedding_array(fake, "fake")
    _check_same_dim(r, f)
    # equal-content inputs collapse to one buffer: the self-set and cross-set
    # matmuls can otherwise take different BLAS paths whose last-bit rounding
    # breaks the exact tie between a ball's radius and its k-th neighbor
    if f.shape == r.shape and np.array_equal(f, r):
        return r, r, True
    return r, f, False


def _radii_sq(arr, ks, block, threads):
    ks_sorted, out = _kth_radii_sq(arr, _sq_norms(arr), ks, block, threads)
    return {k: out[i] for i, k in enumerate(ks_sorted)}


def _ball_fraction(centers, points, same, k, block, threads):
    # fraction of points strictly inside the union of center balls
    rsq = _radii_sq(centers, [k], block, threads)[k]
    (hit, _, _), = scan_balls(centers, points, [rsq], same=same,
                              block=block, threads=threads)
    return float(hit.mean())


def compute_precision(real, fake, k: int = DEFAULT_K_PR, *,
                      block: int = DEFAULT_BLOCK, threads: int = 1) -> float:
    r, f, same = _prepare(real, fake)
    k = _check_k(k, r.shape[0])
    return _ball_fraction(r, f, same, k, block, threads)


def compute_recall(real, fake, k: int = DEFAULT_K_PR, *,
                   block: int = DEFAULT_BLOCK, threads: int = 1) -> float:
    r, f, same = _prepare(real, fake)
    k = _check_k(k, f.shape[0])
    return _ball_fraction(f, r, same, k, block, threads)


def compute_density(real, fake, k: int = DEFAULT_K_DC, *,
                    block: int = DEFAULT_BLOCK, threads: int = 1) -> float:
    r, f, same = _prepare(real, fake)
    k = _check_k(k, r.shape[0])
    rsq = _radii_sq(r, [k], block, threads)[k]
    (_, counts, _), = scan_balls(r, f, [rsq], same=same,
                                 block=block, threads=threads)
    return float(counts.sum() / (k * f.shape[0]))


def compute_coverage(real, fake, k: int = DEFAULT_K_DC, *,
                     block: int = DEFAULT_BLOCK, threads: int = 1) -> float:
    r, f, same = _prepare(real, fake)
    k = _check_k(k, r.shape[0])
    rsq = _radii_sq(r, [k], block, threads)[k]
    (_, _, covered), = scan_balls(r, f, [rsq], same=same,
                                  block=block, threads=threads)
    return float(covered.mean())


def compute_prdc(real, fake, k_pr: int | None = None, k_dc: int | None = None,
                 *, k: int | None = None, block: int = DEFAULT_BLOCK,
                 threads: int = 1) -> PrdcScores:
    """All four metrics in one call.

    k is shorthand for k_pr = k_dc = k. Without it, k_pr defaults to 3 and
    k_dc to 5. The real-set radii and the real-vs-fake membership pass are
    shared by precision, density, and coverage; recall runs its own pass
    with the roles flipped so it is bit-identical to compute_recall.
    """
    if k is not None:
        if k_pr is not None or k_dc is not None:
            raise ParameterError("pass either k or (k_pr, k_dc), not both")
        k_pr = k_dc = k
    if k_pr is None:
        k_pr = DEFAULT_K_PR
    if k_dc is None:
        k_dc = DEFAULT_K_DC

    r, f, same = _prepare(real, fake)
    n, m = r.shape[0], f.shape[0]
    k_pr = _check_k(k_pr, min(n, m), name="k_pr")
    k_dc = _check_k(k_dc, n, name="k_dc")

    real_rsq = _radii_sq(r, [k_pr, k_dc], block, threads)
    fake_rsq = _radii_sq(f, [k_pr], block, threads)

    # pass 1: real balls vs fake points (precision, density, coverage)
    (prec_hit, _, _), (_, dens_counts, covered) = scan_balls(
        r, f, [real_rsq[k_pr], real_rsq[k_dc]], same=same,
        block=block, threads=threads)
    # pass 2: fake balls vs real points (recall)
    (rec_hit, _, _), = scan_balls(f, r, [fake_rsq[k_pr]], same=same,
                                  block=block, threads=threads)

    meta = {
        "zero_radius_real_pr": int(np.count_nonzero(real_rsq[k_pr] == 0.0)),
        "zero_radius_real_dc": int(np.count_nonzero(real_rsq[k_dc] == 0.0)),
        "zero_radius_fake_pr": int(np.count_nonzero(fake_rsq[k_pr] == 0.0)),
    }
    return PrdcScores(
        precision=float(prec_hit.mean()),
        recall=float(rec_hit.mean()),
        density=float(dens_counts.sum() / (k_dc * m)),
        coverage=float(covered.mean()),
        k_pr=k_pr, k_dc=k_dc, n_real=n, n_fake=m, metadata=meta,
    )
