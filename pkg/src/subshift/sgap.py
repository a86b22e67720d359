"""Entropy of S-gap shifts: ``log2(lambda)`` where lambda > 0 solves
``sum_{j in S} lambda^(-j-1) = 1``.

The root lies in ``[1, 2]`` and the left side is strictly decreasing for
``x > 1``, so plain bisection on that bracket always converges.  Infinite
sets are summed up to a truncation ``J`` and the omitted part is bounded by
the geometric tail ``x^(-J-2) / (1 - 1/x)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InputError, PrecisionError
from .language import GapSet

MIN_TOL = 1e-13
MAX_TRUNCATION = 10 ** 8


@dataclass(frozen=True)
class SgapSolution:
    lambda_: float
    entropy_bits: float
    residual: float
    bracket_width_final: float
    truncation: Optional[int]
    bracket_evals: int
    tol: float

    def to_json(self) -> dict:
        return {"lambda": self.lambda_, "entropy_bits": self.entropy_bits, "tol": self.tol,
                "J": self.truncation, "bracket_evals": self.bracket_evals,
                "residual": self.residual, "bracket_width_final": self.bracket_width_final}


def _powsum(js: np.ndarray, x: float) -> float:
    if js.size == 0:
        return 0.0
    return math.fsum(np.power(x, -(js.astype(np.float64) + 1.0)))


def tail_bound(x: float, J: int) -> float:
    """Upper bound on ``sum_{j > J} x^(-j-1)``."""
    return x ** (-J - 2) / (1.0 - 1.0 / x)


def sgap_f(S: GapSet, x: float, J: Optional[int] = None) -> tuple:
    """``(sum_{j in S, j <= J} x^(-j-1), bound on the omitted terms)``.

    Finite sets need no truncation (``J=None`` sums everything and the tail
    is 0).  Infinite sets need ``x > 1`` and an explicit ``J``.
    """
    if S.is_infinite:
        if x <= 1:
            raise InputError("S is infinite: the series diverges for x <= 1")
        if J is None:
            raise InputError("an infinite S needs a truncation J")
        return _powsum(S.members_upto(J), x), tail_bound(x, J)
    if x <= 0:
        raise InputError("x must be positive")
    members = np.asarray(sorted(S.explicit), dtype=np.int64)
    if J is None or (members.size and J >= members[-1]):
        return _powsum(members, x), 0.0
    return _powsum(members[members <= J], x), _powsum(members[members > J], x)


def choose_truncation(x: float, tol: float) -> int:
    """Smallest J with ``tail_bound(x, J) <= tol / 4``."""
    target = tol / 4.0
    J = max(0, math.ceil(math.log(1.0 / (target * (1.0 - 1.0 / x))) / math.log(x)) - 2)
    while J > 0 and tail_bound(x, J - 1) <= target:
        J -= 1
    while tail_bound(x, J) > target:
        J += 1
    if J > MAX_TRUNCATION:
        raise PrecisionError(f"truncation J={J} at x={x} exceeds {MAX_TRUNCATION}")
    return J


def sgap_entropy(S: GapSet, tol: float = 1e-10) -> SgapSolution:
    if tol < MIN_TOL:
        raise InputError(f"tol must be at least {MIN_TOL}")
    if S.is_empty:
        raise InputError("S is empty: the entropy equation has no solution")
    if S.is_everything:
        return SgapSolution(2.0, 1.0, 0.0, 0.0, None, 0, tol)
    if not S.is_infinite and len(S.explicit) == 1:
        return SgapSolution(1.0, 0.0, 0.0, 0.0, None, 0, tol)

    # f(1+) > 1: |S| >= 2 terms equal 1 at x = 1, or the series diverges there.
    # f(2) < 1 unless S contains every j >= 0.  f is never evaluated at 1.
    evals = 0
    lo, hi = 1.0, 2.0
    J_used = None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if S.is_infinite:
            J = choose_truncation(mid, tol)
            value, tail = sgap_f(S, mid, J)
            evals += 1
            while value <= 1.0 <= value + tail and tail > 1e-17:
                J = min(2 * J + 1, MAX_TRUNCATION)
                value, tail = sgap_f(S, mid, J)
                evals += 1
                if J == MAX_TRUNCATION:
                    break
            J_used = J
            if value > 1.0:
                lo = mid
            elif value + tail < 1.0:
                hi = mid
            else:
                lo = hi = mid  # f(mid) = 1 to within the tail bound
        else:
            value, _ = sgap_f(S, mid)
            evals += 1
            if value > 1.0:
                lo = mid
            elif value < 1.0:
                hi = mid
            else:
                lo = hi = mid
    lam = 0.5 * (lo + hi)
    if S.is_infinite:
        J_used = choose_truncation(lam, tol)
        value, tail = sgap_f(S, lam, J_used)
        residual = abs(value + 0.5 * tail - 1.0) + 0.5 * tail
    else:
        value, _ = sgap_f(S, lam)
        residual = abs(value - 1.0)
    evals += 1
    return SgapSolution(lam, math.log2(lam), residual, hi - lo, J_used, evals, tol)
