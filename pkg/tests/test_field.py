from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import GF, Poly, symbols

from newtonstrata.errors import DatumError, SupportCeilingError
from newtonstrata.isocrystal.field import FiniteField, LaurentPoly, field_of, is_irreducible, least_irreducible

X = symbols("x")
FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (3, 3), (5, 2)]


def _sympy_poly(coeffs, q):
    return Poly(list(reversed(coeffs)), X, domain=GF(q))


@pytest.mark.parametrize("q,m", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_irreducibility_matches_sympy(q, m):
    for low in itertools.product(range(q), repeat=m):
        f = list(low) + [1]
        assert is_irreducible(f, q) == _sympy_poly(f, q).is_irreducible, f


def test_least_irreducible_convention():
    assert least_irreducible(2, 2) == (1, 1, 1)
    assert least_irreducible(3, 2) == (1, 0, 1)  # x^2 + 1
    assert least_irreducible(2, 3) == (1, 1, 0, 1)  # x^3 + x + 1
    for q, m in FIELDS:
        assert _sympy_poly(list(least_irreducible(q, m)), q).is_irreducible


@pytest.mark.parametrize("q,m", FIELDS)
def test_field_axioms(q, m):
    f = field_of(q, m)
    elems = list(f.elements())
    assert len(elems) == q ** m
    one = f.element([1])
    rng = np.random.default_rng(0)
    sample = [elems[i] for i in rng.choice(len(elems), size=min(len(elems), 12), replace=False)]
    for a, b, c in itertools.product(sample, repeat=3):
        assert np.array_equal(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c))
        assert np.array_equal(f.mul(a, (b + c) % q), (f.mul(a, b) + f.mul(a, c)) % q)
    for a in elems:
        if a.any():
            assert np.array_equal(f.mul(a, f.inv(a)), one)
        # Frobenius is a ring map of order m fixing F_q
        assert np.array_equal(f.frob(f.mul(a, a)), f.mul(f.frob(a), f.frob(a)))
        b = a
        for _ in range(m):
            b = f.frob(b)
        assert np.array_equal(b, a)
    fixed = [a for a in elems if np.array_equal(f.frob(a), a)]
    assert len(fixed) == q


def test_field_validation():
    with pytest.raises(DatumError):
        FiniteField(4)
    with pytest.raises(DatumError):
        FiniteField(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2 over F_2
    with pytest.raises(DatumError):
        FiniteField(3, 2, (1, 0, 2))  # not monic
    with pytest.raises(ZeroDivisionError):
        field_of(3).inv(field_of(3).element([0]))
    assert "x^2" in field_of(3, 2).describe()


def _poly(f, vals):
    return LaurentPoly.from_terms(f, [(k, c) for k, c in vals])


def poly_terms(m, q):
    coeff = st.lists(st.integers(0, q - 1), min_size=m, max_size=m)
    return st.lists(st.tuples(st.integers(-4, 6), coeff), max_size=6)


@pytest.mark.parametrize("q,m", [(3, 1), (2, 3), (5, 2)])
def test_laurent_ring_laws(q, m):
    f = field_of(q, m)

    @given(poly_terms(m, q), poly_terms(m, q), poly_terms(m, q))
    def check(ta, tb, tc):
        a, b, c = _poly(f, ta), _poly(f, tb), _poly(f, tc)
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert (a - a).is_zero()
        if not a.is_zero() and not b.is_zero():
            assert (a * b).valuation == a.valuation + b.valuation
            assert (a * b).degree == a.degree + b.degree
        assert (a * b).sigma() == a.sigma() * b.sigma()
        assert a.sigma(m) == a
        assert a.shift(2).shift(-2) == a

    check()


def test_laurent_basics():
    f = field_of(3)
    p = _poly(f, [(1, [2]), (3, [1])])
    assert p.valuation == 1 and p.degree == 3
    assert p.coefficient(3).tolist() == [1] and p.coefficient(2).tolist() == [0]
    assert p.truncate(2) == LaurentPoly.monomial(f, 1, [2])
    assert LaurentPoly.zero(f).valuation == float("inf")
    assert _poly(f, [(0, [1]), (0, [2])]).is_zero()
    assert hash(p) == hash(_poly(f, [(3, [1]), (1, [2])]))


def test_long_products_use_fft_consistently():
    f = field_of(5, 2)
    rng = np.random.default_rng(1)
    a = LaurentPoly(f, -3, rng.integers(0, 5, size=(600, 2)))
    b = LaurentPoly(f, 2, rng.integers(0, 5, size=(500, 2)))
    fast = a * b
    # schoolbook reference on a slice of coefficients
    k = 700
    acc = np.zeros(2, dtype=np.int64)
    for i in range(a.coeffs.shape[0]):
        j = k - i
        if 0 <= j < b.coeffs.shape[0]:
            acc = (acc + f.mul(a.coeffs[i], b.coeffs[j])) % 5
    assert np.array_equal(fast.coefficient(a.val + b.val + k), acc)


def test_support_ceiling():
    f = field_of(2)
    p = LaurentPoly(f, 0, np.ones((10, 1)))
    assert p.check_support(100) is p
    with pytest.raises(SupportCeilingError):
        p.check_support(5)
