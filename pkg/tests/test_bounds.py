from fractions import Fraction

import pytest
import sympy as sp

from weakseq.bounds import expectation_bound, min_ell
from weakseq.errors import PreconditionError

_l, _t = sp.symbols("l t", positive=True)
_RHS = _t**2 / _l + _t * (_l + _t) / _l * (1 - (_l - (_t - 1)) ** _t / (_l + _t) ** _t)


def oracle(t, ell):
    """Symbolic evaluation of the right-hand side, independent of Fraction."""
    q = sp.Rational(_RHS.subs({_t: t, _l: ell}))
    return Fraction(int(q.p), int(q.q))


# scanned with the sympy oracle above
MIN_ELL = {1: 3, 2: 15, 3: 50, 4: 119, 5: 234}


def test_examples():
    assert expectation_bound(1, 4).bound == Fraction(1, 2)
    assert expectation_bound(1, 2).bound == 1
    assert expectation_bound(2, 4).bound == Fraction(13, 4)
    assert expectation_bound(1, 4).bound_rational == "1/2"


def test_t1_simplifies_symbolically():
    assert sp.simplify(_RHS.subs(_t, 1) - 2 / _l) == 0


@pytest.mark.parametrize("t", [1, 2, 3, 4, 5])
def test_matches_symbolic_oracle(t):
    for ell in list(range(1, 40)) + [100, 250, 1000]:
        assert expectation_bound(t, ell).bound == oracle(t, ell)


def test_min_ell_table():
    assert {t: min_ell(t) for t in MIN_ELL} == MIN_ELL
    for t, m in MIN_ELL.items():
        assert oracle(t, m) < 1 <= oracle(t, m - 1)


def test_min_ell_boundary_is_exact():
    # bound(1, 2) is exactly 1, so 2 is excluded
    assert expectation_bound(1, 2).bound == 1 and min_ell(1) == 3


@pytest.mark.parametrize("t", [2, 3])
def test_monotone_decrease(t):
    vals = [expectation_bound(t, ell).bound for ell in range(1, 2000)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("t", [1, 2, 3, 4, 5])
def test_tends_to_zero(t):
    assert expectation_bound(t, 10 * min_ell(t)).bound < Fraction(1, 5)


def test_float_agrees_with_rational():
    for t in range(1, 6):
        for ell in (1, 7, 50, 999):
            r = expectation_bound(t, ell)
            assert abs(r.bound_float - float(r.bound)) <= 1e-9 * abs(float(r.bound))
            num = t * t / ell + t * (ell + t) / ell * (1 - ((ell - (t - 1)) / (ell + t)) ** t)
            assert abs(num - r.bound_float) <= 1e-9 * r.bound_float


def test_preconditions():
    with pytest.raises(PreconditionError):
        expectation_bound(0, 3)
    with pytest.raises(PreconditionError):
        min_ell(0)
