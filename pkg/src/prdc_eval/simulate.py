"""Seeded toy-data generators and sweep experiment runners.

Every experiment is a pure function of its arguments including the seed:
re-runs are bit-identical. Child random streams are derived from
(master seed, structural indices), so results do not depend on loop or
scheduling order. The real dataset of a sweep is drawn once per trial and
reused at every grid point, the way a fixed reference set is reused across
model variants in practice; only the fake draws vary along the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .analytic import _check_int, expected_coverage
from .errors import ParameterError
from .knn import DEFAULT_BLOCK, _check_k, as_embedding_array, kth_nn_radii
from .metrics import DEFAULT_K_DC, DEFAULT_K_PR, PrdcScores, compute_prdc

N_MODES = 10


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed)
    return np.random.default_rng(_check_int(seed, "seed", 0))


def _seed_seq(master: int, *indices: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([master, *indices])


def _row_seed_id(master: int, *indices: int) -> int:
    # stable per-row identifier of the derived child stream
    return int(_seed_seq(master, *indices).generate_state(1)[0])


@dataclass(frozen=True)
class MixtureSpec:
    """Isotropic Gaussian mixture: one mean per component, shared scale."""

    means: np.ndarray
    component_scale: float = 1.0
    weights: np.ndarray | None = None

    def __post_init__(self):
        means = np.asarray(self.means, dtype=np.float64)
        if means.ndim != 2 or means.shape[0] < 1:
            raise ParameterError("means must be a 2-D array with one row per component")
        if not np.isfinite(means).all():
            raise ParameterError("means must be finite")
        scale = float(self.component_scale)
        if not math.isfinite(scale) or scale < 0:
            raise ParameterError(f"component_scale must be >= 0, got {self.component_scale}")
        if self.weights is None:
            weights = np.full(means.shape[0], 1.0 / means.shape[0])
        else:
            weights = np.asarray(self.weights, dtype=np.float64)
        if weights.shape != (means.shape[0],):
            raise ParameterError(f"need one weight per component: "
                                 f"{weights.shape} vs {means.shape[0]} components")
        if (weights < 0).any() or abs(float(weights.sum()) - 1.0) > 1e-12:
            raise ParameterError("weights must be non-negative and sum to 1 within 1e-12")
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "component_scale", scale)
        object.__setattr__(self, "weights", weights)

    @property
    def dim(self) -> int:
        return self.means.shape[1]


def ten_mode_spec(dim: int = 64, separation: float = 10.0, scale: float = 1.0,
                  weights=None) -> MixtureSpec:
    """Ten well-separated modes at separation * e_m (canonical directions).

    The default separation keeps inter-mode distance (separation * sqrt(2))
    at ten component standard deviations or more, so diversity collapse in
    the drop experiments is unambiguous.
    """
    dim = _check_int(dim, "dim", N_MODES)
    means = np.zeros((N_MODES, dim))
    for m in range(N_MODES):
        means[m, m] = separation
    return MixtureSpec(means=means, component_scale=scale, weights=weights)


def sample_gaussian(n: int, dim: int, mean=0.0, scale: float = 1.0, seed=0) -> np.ndarray:
    """n i.i.d. draws from an isotropic normal. scale=0 degenerates to the mean."""
    n = _check_int(n, "n", 1)
    dim = _check_int(dim, "dim", 1)
    scale = float(scale)
    if not math.isfinite(scale) or scale < 0:
        raise ParameterError(f"scale must be a finite value >= 0, got {scale}")
    mean = np.asarray(mean, dtype=np.float64)
    if mean.ndim not in (0, 1) or (mean.ndim == 1 and mean.shape != (dim,)):
        raise ParameterError(f"mean must be a scalar or a length-{dim} vector")
    if not np.isfinite(mean).all():
        raise ParameterError("mean must be finite")
    x = _rng(seed).standard_normal((n, dim))
    x *= scale
    x += mean
    return x


def sample_mixture(spec: MixtureSpec, n: int, seed=0) -> np.ndarray:
    """Component index per draw from the weights, then a normal around its mean."""
    n = _check_int(n, "n", 1)
    rng = _rng(seed)
    comps = rng.choice(spec.means.shape[0], size=n, p=spec.weights)
    x = rng.standard_normal((n, spec.dim))
    x *= spec.component_scale
    x += spec.means[comps]
    return x


def drop_schedule(kind: str) -> list[np.ndarray]:
    """Fake-side weight vectors, one per step t = 0..9.

    sequential: step t keeps the first 10 - t modes at equal weight.
    simultaneous: mode 1 takes weight (t + 1) / 10, the rest share evenly.
    Both start at the equal-weight mixture and end with all mass on mode 1.
    """
    steps = []
    if kind == "sequential":
        for t in range(N_MODES):
            w = np.zeros(N_MODES)
            w[:N_MODES - t] = 1.0 / (N_MODES - t)
            steps.append(w)
    elif kind == "simultaneous":
        for t in range(N_MODES):
            w1 = (t + 1) / N_MODES
            w = np.full(N_MODES, (1.0 - w1) / (N_MODES - 1))
            w[0] = w1
            steps.append(w)
    else:
        raise ParameterError(f"kind must be 'sequential' or 'simultaneous', got {kind!r}")
    return steps


@dataclass(frozen=True)
class ScoreRow:
    params: tuple
    scores: PrdcScores
    seed: int
    expected_coverage: float | None = None


@dataclass
class ScoreTable:
    param_names: tuple[str, ...]
    rows: list[ScoreRow]
    metadata: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        has_expected = any(r.expected_coverage is not None for r in self.rows)
        header = [*self.param_names, "precision", "recall", "density", "coverage"]
        if has_expected:
            header.append("expected_coverage")
        header.append("seed")
        lines = [",".join(header)]
        for row in self.rows:
            cells = [_fmt_param(p) for p in row.params]
            s = row.scores
            cells += ["%.6f" % s.precision, "%.6f" % s.recall,
                      "%.6f" % s.density, "%.6f" % s.coverage]
            if has_expected:
                cells.append("" if row.expected_coverage is None
                             else "%.6f" % row.expected_coverage)
            cells.append(str(row.seed))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        rows = []
        for row in self.rows:
            rec = dict(zip(self.param_names, (_json_param(p) for p in row.params)))
            s = row.scores
            rec.update(precision=_round6(s.precision), recall=_round6(s.recall),
                       density=_round6(s.density), coverage=_round6(s.coverage))
            if row.expected_coverage is not None:
                rec["expected_coverage"] = _round6(row.expected_coverage)
            rec["seed"] = row.seed
            rows.append(rec)
        return {"param_names": list(self.param_names),
                "metadata": self.metadata, "rows": rows}


def _fmt_param(p) -> str:
    if isinstance(p, (int, np.integer)):
        return str(int(p))
    return repr(float(p))


def _json_param(p):
    return int(p) if isinstance(p, (int, np.integer)) else float(p)


def _round6(v: float) -> float:
    return float("%.6f" % v)


def _mean_scores(per_trial: list[PrdcScores], trials: int) -> PrdcScores:
    first = per_trial[0]
    return PrdcScores(
        precision=float(np.mean([s.precision for s in per_trial])),
        recall=float(np.mean([s.recall for s in per_trial])),
        density=float(np.mean([s.density for s in per_trial])),
        coverage=float(np.mean([s.coverage for s in per_trial])),
        k_pr=first.k_pr, k_dc=first.k_dc,
        n_real=first.n_real, n_fake=first.n_fake,
        metadata={"trials": trials},
    )


def run_identical_experiment(n_grid: Sequence[int], k_grid: Sequence[int],
                             dim: int = 64, trials: int = 1, seed: int = 0, *,
                             block: int = DEFAULT_BLOCK, threads: int = 1) -> ScoreTable:
    """Two independent same-distribution sets per cell, all metrics at each k.

    Rows carry the closed-form expected coverage for the cell next to the
    measured value. The same sample pair is reused for every k at a given
    (n, trial), so per-k columns differ only in the neighbor count.
    """
    n_grid = sorted(set(_check_int(n, "n", 2) for n in n_grid))
    k_grid = sorted(set(_check_int(k, "k", 1) for k in k_grid))
    if not n_grid or not k_grid:
        raise ParameterError("n_grid and k_grid must be non-empty")
    for n in n_grid:
        for k in k_grid:
            if k > n - 1:
                raise ParameterError(f"grid cell (n={n}, k={k}) is invalid: k must be < n")
    dim = _check_int(dim, "dim", 1)
    trials = _check_int(trials, "trials", 1)
    seed = _check_int(seed, "seed", 0)

    rows = []
    for n_idx, n in enumerate(n_grid):
        cell_scores: dict[int, list[PrdcScores]] = {k: [] for k in k_grid}
        for trial in range(trials):
            s_real, s_fake = _seed_seq(seed, n_idx, trial).spawn(2)
            x = sample_gaussian(n, dim, seed=s_real)
            y = sample_gaussian(n, dim, seed=s_fake)
            for k in k_grid:
                cell_scores[k].append(compute_prdc(x, y, k_pr=k, k_dc=k,
                                                   block=block, threads=threads))
        for k in k_grid:
            rows.append(ScoreRow(params=(n, k),
                                 scores=_mean_scores(cell_scores[k], trials),
                                 seed=_row_seed_id(seed, n_idx),
                                 expected_coverage=expected_coverage(n, n, k)))
    meta = {"experiment": "identical", "n_grid": list(n_grid), "k_grid": list(k_grid),
            "dim": dim, "trials": trials, "seed": seed}
    return ScoreTable(param_names=("n", "k"), rows=rows, metadata=meta)


OUTLIER_MODES = ("none", "real_outlier", "fake_outlier")


@dataclass(frozen=True)
class TranslationExperimentSpec:
    """Fake mean slides along mu * ones(dim) while the real mean stays at 0."""

    mu_grid: tuple[float, ...]
    n_real: int
    n_fake: int
    dim: int = 64
    outlier_mode: str = "none"
    outlier_point: np.ndarray | float | None = None
    k_pr: int = DEFAULT_K_PR
    k_dc: int = DEFAULT_K_DC
    seed: int = 0
    trials: int = 1

    def __post_init__(self):
        mu_grid = tuple(sorted(set(float(m) for m in self.mu_grid)))
        if not mu_grid:
            raise ParameterError("mu_grid must be non-empty")
        for mu in mu_grid:
            if not math.isfinite(mu) or not -1.0 <= mu <= 1.0:
                raise ParameterError(f"mu values must lie in [-1, 1], got {mu}")
        _check_int(self.n_real, "n_real", 2)
        _check_int(self.n_fake, "n_fake", 2)
        dim = _check_int(self.dim, "dim", 1)
        _check_int(self.seed, "seed", 0)
        _check_int(self.trials, "trials", 1)
        if self.outlier_mode not in OUTLIER_MODES:
            raise ParameterError(f"outlier_mode must be one of {OUTLIER_MODES}, "
                                 f"got {self.outlier_mode!r}")
        point = self.outlier_point
        if point is None:
            point = np.full(dim, 3.0)
        else:
            point = np.asarray(point, dtype=np.float64)
            if point.ndim == 0:
                point = np.full(dim, float(point))
            if point.shape != (dim,):
                raise ParameterError(f"outlier_point must be a scalar or a "
                                     f"length-{dim} vector")
            if not np.isfinite(point).all():
                raise ParameterError("outlier_point must be finite")
        object.__setattr__(self, "mu_grid", mu_grid)
        object.__setattr__(self, "outlier_point", point)


def run_translation_experiment(spec: TranslationExperimentSpec, *,
                               block: int = DEFAULT_BLOCK, threads: int = 1) -> ScoreTable:
    """One row per mu. Base draws depend only on (seed, trial), so arms that
    differ only in outlier_mode (or in mu) share their random numbers and
    can be compared point by point."""
    rows = []
    for mu_idx, mu in enumerate(spec.mu_grid):
        per_trial = []
        for trial in range(spec.trials):
            real = sample_gaussian(spec.n_real, spec.dim,
                                   seed=_seed_seq(spec.seed, trial, 0))
            fake = sample_gaussian(spec.n_fake, spec.dim, mean=mu,
                                   seed=_seed_seq(spec.seed, trial, 1))
            if spec.outlier_mode == "real_outlier":
                real[-1] = spec.outlier_point
            elif spec.outlier_mode == "fake_outlier":
                fake[-1] = spec.outlier_point
            per_trial.append(compute_prdc(real, fake, k_pr=spec.k_pr, k_dc=spec.k_dc,
                                          block=block, threads=threads))
        rows.append(ScoreRow(params=(mu,),
                             scores=_mean_scores(per_trial, spec.trials),
                             seed=_row_seed_id(spec.seed, mu_idx)))
    meta = {"experiment": "translate", "mu_grid": list(spec.mu_grid),
            "n_real": spec.n_real, "n_fake": spec.n_fake, "dim": spec.dim,
            "outlier_mode": spec.outlier_mode,
            "outlier_point": [float(v) for v in np.asarray(spec.outlier_point)],
            "k_pr": spec.k_pr, "k_dc": spec.k_dc,
            "seed": spec.seed, "trials": spec.trials}
    return ScoreTable(param_names=("mu",), rows=rows, metadata=meta)


def run_mode_drop_experiment(kind: str, dim: int = 64, n: int = 5000,
                             k_pr: int = DEFAULT_K_PR, k_dc: int = DEFAULT_K_DC,
                             trials: int = 1, seed: int = 0, *,
                             separation: float = 10.0, component_scale: float = 1.0,
                             block: int = DEFAULT_BLOCK, threads: int = 1) -> ScoreTable:
    """Real side stays the equal-weight ten-mode mixture; the fake side
    follows the drop schedule of the given kind, one row per step."""
    n = _check_int(n, "n", 2)
    trials = _check_int(trials, "trials", 1)
    seed = _check_int(seed, "seed", 0)
    schedule = drop_schedule(kind)
    base = ten_mode_spec(dim=dim, separation=separation, scale=component_scale)

    rows = []
    for step, weights in enumerate(schedule):
        step_spec = MixtureSpec(means=base.means, component_scale=base.component_scale,
                                weights=weights)
        per_trial = []
        for trial in range(trials):
            real = sample_mixture(base, n, seed=_seed_seq(seed, trial, 0))
            fake = sample_mixture(step_spec, n, seed=_seed_seq(seed, trial, step + 1))
            per_trial.append(compute_prdc(real, fake, k_pr=k_pr, k_dc=k_dc,
                                          block=block, threads=threads))
        rows.append(ScoreRow(params=(step, float(weights[0])),
                             scores=_mean_scores(per_trial, trials),
                             seed=_row_seed_id(seed, step)))
    meta = {"experiment": "mode-drop", "kind": kind, "dim": dim, "n": n,
            "k_pr": k_pr, "k_dc": k_dc, "trials": trials, "seed": seed,
            "separation": separation, "component_scale": component_scale}
    return ScoreTable(param_names=("step", "mode_1_weight"), rows=rows, metadata=meta)


def split_outliers(samples, k: int, inlier_to_outlier_ratio: float = 10, *,
                   block: int = DEFAULT_BLOCK, threads: int = 1):
    """Partition a set by k-th NN distance within the set, descending.

    The top ceil(n / (ratio + 1)) samples are outliers; ties are broken by
    original index (stable sort), and each part keeps original row order.
    Returns (inliers, outliers).
    """
    arr = as_embedding_array(samples, "samples")
    k = _check_k(k, arr.shape[0])
    ratio = float(inlier_to_outlier_ratio)
    if not math.isfinite(ratio) or ratio < 1:
        raise ParameterError(f"inlier_to_outlier_ratio must be >= 1, got "
                             f"{inlier_to_outlier_ratio}")
    radii = kth_nn_radii(arr, k, block=block, threads=threads)
    order = np.argsort(-radii, kind="stable")
    n_out = math.ceil(arr.shape[0] / (ratio + 1.0))
    out_idx = np.sort(order[:n_out])
    in_idx = np.sort(order[n_out:])
    return arr[in_idx], arr[out_idx]
