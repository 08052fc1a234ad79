import pytest
from hypothesis import given, settings, strategies as st

from src.ff import get_field
from src.poly import Poly, FactorizationError, factor_poly, is_irreducible, roots, from_roots, gcd, \
    companion_matrix
from src import linalg

def test_arithmetic():
    F = get_field(5)
    f = Poly(F, [1, 0, 1])
    g = Poly(F, [4, 1])
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.degree < g.degree
    assert Poly(F, [0, 0, 0]).is_zero()
    assert f(2) == 0 and f(3) == 0

def test_factor_small():
    F5 = get_field(5)
    f = Poly(F5, [4, 0, 0, 0, 1])           # x^4 - 1
    assert roots(f) == [1, 2, 3, 4]
    assert all(m == 1 and g.degree == 1 for g, m in factor_poly(f))
    F2 = get_field(2)
    f = Poly(F2, [0, 1, 0, 0, 1])            # x^4 + x = x (x + 1) (x^2 + x + 1)
    assert [g.coeffs for g, _ in factor_poly(f)] == [(0, 1), (1, 1), (1, 1, 1)]
    sq = Poly(F2, [1, 0, 1])                 # (x + 1)^2
    assert factor_poly(sq) == [(Poly(F2, [1, 1]), 2)]

def test_irreducible():
    assert is_irreducible(Poly(get_field(3), [1, 0, 1]))
    assert not is_irreducible(Poly(get_field(5), [1, 0, 1]))
    assert is_irreducible(Poly(get_field(2), [1, 1, 0, 1]))
    with pytest.raises(FactorizationError):
        factor_poly(Poly(get_field(3), []))

def test_companion_matrix():
    F = get_field(7)
    f = Poly(F, [3, 2, 5, 1])
    assert linalg.charpoly(F, companion_matrix(f)) == f
    assert not linalg.poly_at_matrix(F, f, companion_matrix(f)).any()

@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)]),
       st.lists(st.lists(st.integers(0, 8), min_size=2, max_size=4), min_size=1, max_size=3))
def test_factorization_multiplies_back(pk, parts):
    F = get_field(*pk)
    f = Poly(F, [1])
    for coeffs in parts:
        g = Poly(F, [c % F.q for c in coeffs[:-1]] + [1])
        f = f * g
    prod = Poly(F, [1])
    for g, m in factor_poly(f):
        assert is_irreducible(g)
        for _ in range(m):
            prod = prod * g
    assert prod == f.monic()

def test_from_roots_and_gcd():
    F = get_field(7)
    f = from_roots(F, [1, 2, 3])
    g = from_roots(F, [2, 3, 5])
    assert gcd(f, g) == from_roots(F, [2, 3])
