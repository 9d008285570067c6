"""Fidelity and diversity metrics for generative models.

Computes improved precision and recall plus density and coverage over
embedded sample sets, provides the closed-form expectations of density
and coverage under identical distributions together with a coverage-driven
choice of k, and ships seeded simulation sweeps for sanity checks.
"""

from .analytic import (HyperparameterChoice, expected_coverage,
                       expected_coverage_limit, expected_density, select_k)
from .errors import DataError, ParameterError, PrdcError
from .io import detect_format, load_embeddings, save_embeddings
from .knn import DEFAULT_BLOCK, kth_nn_radii, pairwise_distances
from .metrics import (DEFAULT_K_DC, DEFAULT_K_PR, PrdcScores, compute_coverage,
                      compute_density, compute_prdc, compute_precision,
                      compute_recall)
from .simulate import (MixtureSpec, ScoreRow, ScoreTable,
                       TranslationExperimentSpec, drop_schedule,
                       run_identical_experiment, run_mode_drop_experiment,
                       run_translation_experiment, sample_gaussian,
                       sample_mixture, split_outliers, ten_mode_spec)

__version__ = "1.0.0"

__all__ = [
    "DEFAULT_BLOCK", "DEFAULT_K_DC", "DEFAULT_K_PR",
    "DataError", "HyperparameterChoice", "MixtureSpec", "ParameterError",
    "PrdcError", "PrdcScores", "ScoreRow", "ScoreTable",
    "TranslationExperimentSpec", "compute_coverage", "compute_density",
    "compute_prdc", "compute_precision", "compute_recall", "detect_format",
    "drop_schedule", "expected_coverage", "expected_coverage_limit",
    "expected_density", "kth_nn_radii", "load_embeddings",
    "pairwise_distances", "run_identical_experiment",
    "run_mode_drop_experiment", "run_translation_experiment",
    "sample_gaussian", "sample_mixture", "save_embeddings", "select_k",
    "split_outliers", "ten_mode_spec",
]
