"""Change-point search over a block sequence.

``exact_change_block`` scans every border; ``find_change`` returns a split
whose score is within a factor ``1 - eps`` of the optimum while testing only
``O(log(n) / eps)`` candidates. ``naive_change_raw`` works on the raw bit
stream and exists as a test oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from binchange.blockseq import BlockSequence
from binchange.likelihood import NEG_INF, split_gain


@dataclass(frozen=True)
class ChangeResult:
    """Best split found by a solver.

    ``block_index`` is the first block of the second segment and
    ``raw_index`` the window position of its first entry; both are ``None``
    when no split exists (fewer than two blocks). ``tested`` counts score
    evaluations.
    """

    block_index: int | None
    raw_index: int | None
    score: float
    tested: int = 0

    @property
    def found(self) -> bool:
        return self.raw_index is not None


NO_CHANGE = ChangeResult(None, None, 0.0, 0)


def _check_eps(eps: float) -> None:
    if not 0.0 <= eps < 1.0:
        raise ValueError(f"eps must lie in [0, 1), got {eps!r}")


def _log_or_neginf(x: float) -> float:
    return math.log(x) if x > 0.0 else NEG_INF


def _ll(u: int, v: int, lp: float, lq: float) -> float:
    # u*log(p) + v*log(1-p) given the two logs, with 0*(-inf) = 0
    s = 0.0
    if u:
        s += u * lp
    if v:
        s += v * lq
    return s


def block_gains(seq: BlockSequence) -> list[float]:
    """Split score for every ``i`` in ``2..k`` (element ``i - 2``)."""
    p1, p0 = seq._p1, seq._p0
    a, b = p1[-1], p0[-1]
    return [split_gain(p1[i - 1], p0[i - 1], a, b) for i in range(2, len(p1))]


def exact_change_block(seq: BlockSequence) -> ChangeResult:
    """Optimal split over all borders, smallest index on ties."""
    p1, p0 = seq._p1, seq._p0
    k = len(p1) - 1
    if k < 2:
        return NO_CHANGE
    a, b = p1[k], p0[k]
    n = a + b
    log = math.log
    best_i = 0
    best = -1.0
    # split_gain inlined; this loop is the detector's hot path
    for i in range(2, k + 1):
        a1 = p1[i - 1]
        b1 = p0[i - 1]
        n1 = a1 + b1
        n2 = n - n1
        a2 = a - a1
        b2 = b - b1
        s = 0.0
        if a1:
            s += a1 * log(a1 * n / (n1 * a))
        if b1:
            s += b1 * log(b1 * n / (n1 * b))
        if a2:
            s += a2 * log(a2 * n / (n2 * a))
        if b2:
            s += b2 * log(b2 * n / (n2 * b))
        if s > best:
            best = s
            best_i = i
    if best < 0.0:
        best = 0.0
    return ChangeResult(best_i, seq._start[best_i - 1], best, k - 1)


def find_segment(seq: BlockSequence, p1: float, p2: float) -> int:
    """Optimal split for fixed segment rates ``p1 < p2``, by binary search.

    Returns the first block ``j`` whose per-block likelihood difference
    ``ll(block j; p1) - ll(block j; p2)`` is not positive, or ``k + 1`` if
    every difference is positive. The result is not clamped to ``2..k``.
    """
    if not 0.0 <= p1 < p2 <= 1.0:
        raise ValueError(f"need 0 <= p1 < p2 <= 1, got p1={p1!r}, p2={p2!r}")
    k = seq.k
    if k < 1:
        raise ValueError("find_segment needs a non-empty block sequence")
    c1, c0 = seq._p1, seq._p0
    lp1, lq1 = _log_or_neginf(p1), _log_or_neginf(1.0 - p1)
    lp2, lq2 = _log_or_neginf(p2), _log_or_neginf(1.0 - p2)
    lo, hi = 1, k + 1
    while lo < hi:
        mid = (lo + hi) // 2
        u = c1[mid] - c1[mid - 1]
        v = c0[mid] - c0[mid - 1]
        if _ll(u, v, lp1, lq1) > _ll(u, v, lp2, lq2):
            lo = mid + 1
        else:
            hi = mid
    return lo


def find_cands(seq: BlockSequence, eps: float) -> list[int]:
    """Candidate splits whose suffix rates bracket every suffix rate.

    Ladder over ``log freq(j, k) - log freq(1, k)``, which increases with
    ``j``; each rung is the first index that escapes the ``1 - eps`` bracket
    of the previous one.
    """
    _check_eps(eps)
    k = seq.k
    if k == 0:
        return []
    if k == 1:
        return [1]
    c1, c0 = seq._p1, seq._p0
    a, n = c1[k], c1[k] + c0[k]
    lq = math.log(a / n)
    scale = 1.0 / (1.0 - eps)

    def gap(j: int) -> float:
        sa = a - c1[j - 1]
        return math.log(sa / (n - c1[j - 1] - c0[j - 1])) - lq

    out = [1]
    i = 1
    while i < k:
        rho = gap(i) * scale
        lo, hi = i + 1, k + 1
        while lo < hi:
            mid = (lo + hi) // 2
            if gap(mid) > rho:
                hi = mid
            else:
                lo = mid + 1
        i = lo if lo <= k else k
        out.append(i)
    return out


def find_cands_prime(seq: BlockSequence, eps: float) -> list[int]:
    """Mirror of :func:`find_cands` for prefix rates, in ``1 - freq`` space.

    Walks down from ``k``; index ``j`` stands for the prefix rate
    ``freq(1, j - 1)``. Returned ascending.
    """
    _check_eps(eps)
    k = seq.k
    if k == 0:
        return []
    if k == 1:
        return [1]
    c1, c0 = seq._p1, seq._p0
    b, n = c0[k], c1[k] + c0[k]
    lq = math.log(b / n)
    scale = 1.0 / (1.0 - eps)

    def gap(j: int) -> float:
        # decreasing in j for j >= 2
        return math.log(c0[j - 1] / (c1[j - 1] + c0[j - 1])) - lq

    out = [k]
    i = k
    while i > 1:
        rho = gap(i) * scale
        # first j in 2..i with gap(j) <= rho; everything before it exceeds rho
        lo, hi = 2, i
        while lo < hi:
            mid = (lo + hi) // 2
            if gap(mid) > rho:
                lo = mid + 1
            else:
                hi = mid
        i = lo - 1 if lo - 1 >= 2 else 1
        out.append(i)
    out.reverse()
    return out


def find_change(seq: BlockSequence, eps: float) -> ChangeResult:
    """Split scoring at least ``(1 - eps)`` times the optimum."""
    _check_eps(eps)
    k = seq.k
    if k < 2:
        return NO_CHANGE
    if eps == 0.0:
        return exact_change_block(seq)
    c1, c0 = seq._p1, seq._p0
    a, b = c1[k], c0[k]
    cands = sorted(set(find_cands(seq, eps)).union(find_cands_prime(seq, eps)))

    best_i = 0
    best = -1.0
    tested = 0
    prev = 0
    for c in cands:
        if c >= 2:
            s = split_gain(c1[c - 1], c0[c - 1], a, b)
            tested += 1
            if s > best or (s == best and c < best_i):
                best, best_i = s, c
        if prev and prev + 1 < c:
            # rate of prefix 1..c-1 and of suffix prev..k
            la, lt = c1[c - 1], c1[c - 1] + c0[c - 1]
            ra = a - c1[prev - 1]
            rt = a + b - c1[prev - 1] - c0[prev - 1]
            r1 = la / lt
            r2 = ra / rt
            if r1 < r2:
                j = find_segment(seq, r1, r2)
                j = min(max(j, 2), k)
                s = split_gain(c1[j - 1], c0[j - 1], a, b)
                tested += 1
                if s > best or (s == best and j < best_i):
                    best, best_i = s, j
        prev = c
    return ChangeResult(best_i, seq._start[best_i - 1], best, tested)


def naive_change_raw(bits: Sequence[int]) -> ChangeResult:
    """Exhaustive scan over raw splits ``2..n`` with left rate <= right rate."""
    n = len(bits)
    if n < 1:
        raise ValueError("naive_change_raw needs at least one bit")
    a = sum(1 for x in bits if x)
    b = n - a
    best_i = None
    best = 0.0
    a1 = 0
    for i in range(2, n + 1):
        a1 += 1 if bits[i - 2] else 0
        n1 = i - 1
        n2 = n - n1
        if a1 * n2 > (a - a1) * n1:
            continue
        s = split_gain(a1, n1 - a1, a, b)
        if s > best:
            best, best_i = s, i
    if best_i is None:
        return ChangeResult(None, None, 0.0, n - 1)
    return ChangeResult(None, best_i, best, n - 1)
