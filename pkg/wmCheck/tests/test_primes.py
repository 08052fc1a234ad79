import pytest

from src.primes import (NotCovered, ppd, ppd_star, special_primes, order_polynomial, scan_lemma_pair,
                        center_exponent_D)

@pytest.mark.parametrize('a, n, p', [(2, 6, None), (2, 10, 11), (3, 5, 11), (2, 2, 3), (2, 13, 8191), (5, 4, 13),
                                     (2, 12, 13), (3, 4, 5)])
def test_ppd(a, n, p):
    assert ppd(a, n) == p

def test_ppd_star():
    assert ppd_star(2, 13) == 8191
    assert ppd_star(2, 13, -1) == 2731
    assert ppd_star(2, 14) == 43 * 127
    with pytest.raises(NotCovered):
        ppd_star(2, 12)
    with pytest.raises(NotCovered):
        ppd_star(2, 6, allow_small=True)
    with pytest.raises(ValueError):
        ppd_star(2, 13, 0)

@pytest.mark.parametrize('family, n, q, primes', [
    ('Sp', 24, 2, {241, 13, 7}),
    ('Sp', 12, 2, {13, 3, 7}),
    ('SL', 6, 2, {31}),
    ('SL', 4, 3, {5, 13}),
    ('SL', 4, 4, {17, 7}),
    ('PSL', 4, 3, {5, 13}),
    ('E8', 0, 2, {241, 41}),
    ('2B2', 0, 32, {41}),
])
def test_special_primes(family, n, q, primes):
    sp = special_primes(family, n, q)
    assert sp.primes == primes
    assert sorted(sp.as_dict()['set']) == sorted(primes)

@pytest.mark.parametrize('family, n, q', [('SL', 5, 3), ('SU', 5, 2), ('SU', 6, 3), ('Sp', 6, 3), ('Spin', 7, 3),
                                          ('Spin+', 8, 3), ('Spin-', 10, 2), ('Sp', 12, 5), ('G2', 0, 3)])
def test_special_primes_divide_the_order(family, n, q):
    sp = special_primes(family, n, q)
    order = order_polynomial(family, n, q)
    assert all(order % r == 0 and q % r for r in sp.primes)

@pytest.mark.parametrize('family, n, q', [('Sp', 4, 3), ('SL', 3, 5), ('SU', 3, 5), ('Sp', 6, 4), ('Spin+', 6, 3),
                                          ('2B2', 0, 8), ('2B2', 0, 27), ('G2', 0, 4), ('XX', 2, 3)])
def test_not_covered(family, n, q):
    with pytest.raises(NotCovered):
        special_primes(family, n, q)

def test_order_polynomial():
    assert order_polynomial('Spin', 5, 3) == 51840
    assert order_polynomial('G2', 0, 3) == 4245696
    assert order_polynomial('2B2', 0, 8) == 29120

def test_lemma_pair_scan():
    assert scan_lemma_pair(3, 18) == []

def test_center_exponent():
    assert center_exponent_D(2, 3, 'SL') == 432
    assert center_exponent_D(1, 5, 'Sp') == 4
    assert center_exponent_D(4, 2, 'Omega+') == 32
    with pytest.raises(ValueError):
        center_exponent_D(0, 3, 'SL')
    with pytest.raises(ValueError):
        center_exponent_D(1, 3, 'G2')
