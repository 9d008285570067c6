"""In-process access to the sample-set metrics for array-holding pipelines.

Exactly three entry points: prdc scores a (real, fake) pair of in-memory
2-D float arrays, expected_coverage_py evaluates the closed-form coverage
expectation, and select_k_py picks the smallest adequate neighbor count.
Scores match the prdc-eval CLI digit for digit on the same data.

C-contiguous float64 inputs are handed to the kernels zero-copy; float32
(or any other layout) is converted once, with all accumulation in double
precision either way. Validation failures raise the library's ValueError
subclasses with the same messages the CLI reports. No global state is held,
so the callables are safe to share across threads.
"""

from prdc_eval import __version__ as __version__
from prdc_eval import compute_prdc, expected_coverage, select_k

__all__ = ["prdc", "expected_coverage_py", "select_k_py"]


def prdc(real, fake, k_pr: int = 3, k_dc: int = 5) -> dict:
    """The four metric values for one (real, fake) pair, as a plain dict."""
    scores = compute_prdc(real, fake, k_pr=k_pr, k_dc=k_dc)
    return {
        "precision": scores.precision,
        "recall": scores.recall,
        "density": scores.density,
        "coverage": scores.coverage,
    }


def expected_coverage_py(n_real: int, n_fake: int, k: int) -> float:
    """Expected coverage for identical real/fake distributions."""
    return expected_coverage(n_real, n_fake, k)


def select_k_py(n_real: int, n_fake: int, epsilon: float) -> int:
    """Smallest k whose expected coverage exceeds 1 - epsilon."""
    return select_k(n_real, n_fake, epsilon).k
