"""Exact evaluation of the first-moment bound on window collisions.

For a window ``t`` and a zero-sum-free tail block of size ``ell`` the expected
number of colliding partial-sum pairs in a uniformly random tail ordering is
at most

    t^2/ell + t(ell+t)/ell * (1 - (ell-(t-1))^t / (ell+t)^t)

Everything is computed with :class:`fractions.Fraction`; ``min_ell`` depends
on telling ``bound == 1`` apart from ``bound < 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import PreconditionError

MIN_ELL_SCAN_CAP = 10**7


@dataclass(frozen=True)
class BoundReport:
    t: int
    ell: int
    bound: Fraction

    @property
    def bound_float(self) -> float:
        return float(self.bound)

    @property
    def bound_rational(self) -> str:
        return str(self.bound)


def expectation_bound(t: int, ell: int) -> BoundReport:
    if t < 1 or ell < 1:
        raise PreconditionError(f"need t >= 1 and ell >= 1, got t={t}, ell={ell}")
    survive = Fraction(ell - (t - 1), ell + t) ** t
    value = Fraction(t * t, ell) + Fraction(t * (ell + t), ell) * (1 - survive)
    return BoundReport(t, ell, value)


@lru_cache(maxsize=None)
def min_ell(t: int) -> int:
    """Smallest ``ell`` whose bound is strictly below 1."""
    if t < 1:
        raise PreconditionError(f"need t >= 1, got {t}")
    for ell in range(1, MIN_ELL_SCAN_CAP + 1):
        if expectation_bound(t, ell).bound < 1:
            return ell
    raise RuntimeError(f"no ell <= {MIN_ELL_SCAN_CAP} brings the bound below 1 for t={t}")
