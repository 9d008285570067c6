"""Closed-form expectations under identical real/fake distributions,
and the coverage-driven choice of k.

For N real and M fake samples drawn i.i.d. from the same continuous
distribution, the expected coverage at neighbor count k is

    1 - prod_{t=1..k} (N - t) / (M + N - t)

independent of the distribution and of the dimension, and the expected
density is exactly 1. The product is evaluated as a running product of
ratios, each in (0, 1), never as a quotient of factorially large terms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError


def _check_int(value, name: str, minimum: int) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise ParameterError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ParameterError(f"{name} must be at least {minimum}, got {value}")
    return value


@dataclass(frozen=True)
class HyperparameterChoice:
    """Smallest k whose expected coverage clears 1 - epsilon."""

    k: int
    n_real: int
    n_fake: int
    epsilon: float
    achieved_expected_coverage: float


def expected_coverage(n_real: int, n_fake: int, k: int) -> float:
    """Expected coverage for identical distributions, any N, M, k < N."""
    n = _check_int(n_real, "n_real", 2)
    m = _check_int(n_fake, "n_fake", 1)
    k = _check_int(k, "k", 1)
    if k > n - 1:
        raise ParameterError(f"k={k} must be smaller than n_real={n}")
    miss = 1.0
    for t in range(1, k + 1):
        miss *= (n - t) / (m + n - t)
    return 1.0 - miss


def expected_coverage_limit(k: int) -> float:
    """Limit of expected_coverage(N, N, k) as N grows: 1 - 2**-k."""
    k = _check_int(k, "k", 1)
    return 1.0 - 2.0 ** (-k)


def expected_density() -> float:
    """Expected density under identical distributions: exactly 1.

    Exposed as an operation so Monte Carlo harnesses compare against a
    named oracle instead of a literal.
    """
    return 1.0


def select_k(n_real: int, n_fake: int, epsilon: float) -> HyperparameterChoice:
    """Smallest k with expected_coverage(N, M, k) > 1 - epsilon.

    Expected coverage is strictly increasing in k, so the linear scan from
    k=1 stops at the minimal value. The running miss-probability product is
    carried across iterations, keeping the whole scan O(k).
    """
    n = _check_int(n_real, "n_real", 2)
    m = _check_int(n_fake, "n_fake", 1)
    try:
        epsilon = float(epsilon)
    except (TypeError, ValueError):
        raise ParameterError(f"epsilon must be a real number, got {epsilon!r}") from None
    if not 0.0 < epsilon < 1.0:
        raise ParameterError(f"epsilon must lie strictly between 0 and 1, got {epsilon}")

    target = 1.0 - epsilon
    miss = 1.0
    best = 0.0
    for k in range(1, n):
        miss *= (n - k) / (m + n - k)
        best = 1.0 - miss
        if best > target:
            return HyperparameterChoice(k=k, n_real=n, n_fake=m, epsilon=epsilon,
                                        achieved_expected_coverage=best)
    raise ParameterError(
        f"no k < n_real={n} reaches expected coverage > {target}; "
        f"best achievable is {best} at k={n - 1}")
