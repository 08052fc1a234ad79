import mpmath
import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from src.cyclo import Cyclotomic, parse_cyclotomic

def test_roots_of_unity():
    i = Cyclotomic.root(4)
    assert i * i == -1
    w = Cyclotomic.root(3)
    assert w + w * w == -1
    assert Cyclotomic.root(12, 12) == 1
    total = Cyclotomic.from_int(15, 0)
    for j in range(15):
        total = total + Cyclotomic.root(15, j)
    assert total.is_zero()

def test_galois_and_rationality():
    z = Cyclotomic.root(5)
    s = z + z.conj()
    assert not s.is_rational()
    assert (s + s.galois(2)) == -1
    assert s.galois(4) == s
    assert Cyclotomic.from_int(7, Fraction(3, 4)).rational() == Fraction(3, 4)
    assert ((z * 4) / 4) == z
    with pytest.raises(ValueError):
        z + Cyclotomic.root(3)

def test_literal():
    z = Cyclotomic.root(8, 3) * Fraction(-2, 3) + 1
    assert parse_cyclotomic(z.literal(), 8) == z
    assert parse_cyclotomic('1+E^9', 8) == 1 + Cyclotomic.root(8)
    assert Cyclotomic.from_int(6, 0).literal() == '0'
    for bad in ('', '1 +E^1', '1+', 'x'):
        with pytest.raises(ValueError):
            parse_cyclotomic(bad, 8)

def test_abs_interval():
    z = 1 + Cyclotomic.root(3)                  # -zeta_3^2, absolute value 1
    lo, hi = z.abs_interval(96)
    assert lo <= 1 <= hi
    assert hi - lo < mpmath.mpf(2) ** -60

@settings(max_examples=50, deadline=None)
@given(st.sampled_from([3, 4, 5, 8, 12, 15]), st.data())
def test_arithmetic_matches_complex_values(e, data):
    coeffs = st.lists(st.integers(-5, 5), min_size=e, max_size=e)
    a = Cyclotomic.from_exponents(e, data.draw(coeffs))
    b = Cyclotomic.from_exponents(e, data.draw(coeffs))
    for exact, approx in ((a * b, a.to_complex() * b.to_complex()), (a - b, a.to_complex() - b.to_complex()),
                          (a.galois(-1), mpmath.conj(a.to_complex()))):
        assert abs(exact.to_complex() - approx) < mpmath.mpf(10) ** -8
