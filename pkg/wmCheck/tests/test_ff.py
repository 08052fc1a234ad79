import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.ff import FieldError, FieldElement, get_field, field_of_order, least_irreducible, embedding, restrict, \
    parse_literal, from_coeffs, field_arithmetic, discrete_log

SMALL = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (2, 3), (2, 4), (7, 2)]

def test_least_irreducible():
    assert least_irreducible(2, 2) == (1, 1, 1)
    assert least_irreducible(3, 2) == (1, 0, 1)
    assert least_irreducible(2, 3) == (1, 1, 0, 1)

def test_field_of_order():
    assert field_of_order(9) == get_field(3, 2)
    assert field_of_order(9) is get_field(3, 2)
    with pytest.raises(FieldError):
        field_of_order(6)
    with pytest.raises(FieldError):
        get_field(4)

def test_small_products():
    F4 = get_field(2, 2)
    assert int(F4.mul(2, 2)) == 3          # t^2 = t + 1
    F9 = get_field(3, 2)
    assert int(F9.mul(3, 3)) == 2          # t^2 = -1
    assert int(get_field(7).primitive_element()) == 3
    assert int(get_field(5).primitive_element()) == 2

@pytest.mark.parametrize('p,k', SMALL)
def test_inverses_and_orders(p, k):
    F = get_field(p, k)
    xs = np.arange(1, F.q)
    assert np.all(F.mul(xs, F.inv(xs)) == 1)
    g = F.primitive_element()
    assert F.order(g) == F.q - 1
    assert np.array_equal(np.sort(F.exp(np.arange(F.q - 1))), xs)
    with pytest.raises(FieldError):
        F.inv(0)

@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_field_axioms(pk, data):
    F = get_field(*pk)
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.pow(a, F.q) == a
    assert F.mul(a, b) == F.mul(b, a)

@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3))
def test_embedding_is_a_ring_map(a, b):
    sub, big = get_field(2, 2), get_field(2, 4)
    img = embedding(sub, big)
    assert img[int(sub.mul(a, b))] == big.mul(img[a], img[b])
    assert img[int(sub.add(a, b))] == big.add(img[a], img[b])
    assert restrict(img[a], big, sub) == a

def test_restrict_outside_subfield():
    with pytest.raises(FieldError):
        restrict(np.arange(16), get_field(2, 4), get_field(2, 2))

def test_conj_and_norm():
    F = get_field(3, 2)
    xs = np.arange(F.q)
    assert np.array_equal(F.conj(F.conj(xs)), xs)
    norms = F.norm_to_subfield(np.arange(1, F.q), 1)
    assert set(int(n) for n in norms) == {1, 2}
    assert np.all(F.mul(np.arange(1, F.q), F.conj(np.arange(1, F.q))) == norms)

def test_squares():
    F = get_field(7)
    assert F.nonsquare() == 3
    assert F.is_square(2) and not F.is_square(3)
    assert F.mul(F.sqrt(2), F.sqrt(2)) == 2
    with pytest.raises(FieldError):
        F.sqrt(3)

def test_literals_and_elements():
    x = parse_literal('3^2:[1,2]')
    assert x.code == 7 and x.coeffs == (1, 2)
    assert str(x) == '3^2:[1,2]'
    y = from_coeffs(get_field(3, 2), [0, 1])
    assert (x * y.inverse() * y) == x
    assert field_arithmetic(x, y, 'add') == x + y
    assert field_arithmetic(y, 4, 'pow').code == 1          # t^2 = -1
    with pytest.raises(FieldError):
        parse_literal('3^2:1,2')
    with pytest.raises(FieldError):
        x + FieldElement(get_field(3), 1)

def test_discrete_log():
    F = get_field(2, 3)
    g = FieldElement(F, F.primitive_element())
    for e in range(7):
        assert discrete_log(g ** e, g) == e
    with pytest.raises(FieldError):
        discrete_log(FieldElement(F, 0), g)
