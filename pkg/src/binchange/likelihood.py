"""Bernoulli log-likelihood kernels and split scores.

All logarithms are natural, so scores are in nats. Counts are plain Python
ints; a zero count times ``log(0)`` is taken to be zero.
"""

from __future__ import annotations

import math
from typing import NamedTuple

NEG_INF = -math.inf


class CountPair(NamedTuple):
    """Number of ones and zeros in a segment."""

    ones: int
    zeros: int

    def total(self) -> int:
        return self.ones + self.zeros

    def __add__(self, other: "CountPair") -> "CountPair":  # type: ignore[override]
        return CountPair(self.ones + other.ones, self.zeros + other.zeros)

    def flipped(self) -> "CountPair":
        return CountPair(self.zeros, self.ones)


def _check_prob(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p!r}")


def _xlogy(x: int, y: float) -> float:
    # x * log(y) with 0 * log(0) = 0
    if x == 0:
        return 0.0
    if y <= 0.0:
        return NEG_INF
    return x * math.log(y)


def log_likelihood(counts: CountPair, p: float) -> float:
    """``ones * ln(p) + zeros * ln(1 - p)``; ``-inf`` if ``p`` excludes the data."""
    _check_prob(p)
    return _xlogy(counts[0], p) + _xlogy(counts[1], 1.0 - p)


def ml_loglik(a: int, b: int) -> float:
    """Maximum log-likelihood of ``a`` ones and ``b`` zeros."""
    if a == 0 or b == 0:
        return 0.0
    t = a + b
    return a * math.log(a / t) + b * math.log(b / t)


def ml_log_likelihood(counts: CountPair) -> float:
    return ml_loglik(counts[0], counts[1])


def split_gain(a1: int, b1: int, a: int, b: int) -> float:
    """Log-likelihood ratio of splitting ``(a, b)`` into ``(a1, b1)`` and the rest.

    Written as a sum of per-segment divergences from the pooled rate rather
    than as a difference of maximum likelihoods, which keeps the rounding
    error proportional to the score instead of to the segment length.
    """
    a2 = a - a1
    b2 = b - b1
    n1 = a1 + b1
    n2 = a2 + b2
    if n1 == 0 or n2 == 0:
        return 0.0
    n = n1 + n2
    s = 0.0
    if a1:
        s += a1 * math.log(a1 * n / (n1 * a))
    if b1:
        s += b1 * math.log(b1 * n / (n1 * b))
    if a2:
        s += a2 * math.log(a2 * n / (n2 * a))
    if b2:
        s += b2 * math.log(b2 * n / (n2 * b))
    return s if s > 0.0 else 0.0


def split_score(left: CountPair, right: CountPair) -> float:
    """Two-segment versus one-segment log-likelihood ratio (always >= 0)."""
    if left.total() + right.total() == 0:
        raise ValueError("split_score needs at least one observation")
    return split_gain(left[0], left[1], left[0] + right[0], left[1] + right[1])


def split_score_fixed(left: CountPair, right: CountPair, p1: float, p2: float) -> float:
    """Split score with the segment rates pinned to ``p1`` and ``p2``."""
    return (
        log_likelihood(left, p1)
        + log_likelihood(right, p2)
        - ml_loglik(left[0] + right[0], left[1] + right[1])
    )
