import pytest

from src.ff import get_field, from_coeffs
from src.classical import ClassicalGroupSpec, IllegalParameters, is_regular_semisimple, spinor_norm
from src.construct import (ConstructionError, construct, verify_certificate, two_part, gamma_order, legal_deltas,
                           construction_suite, two_power_order)
from src import linalg

def test_helpers():
    assert two_part(24) == 8 and two_part(7) == 1
    assert gamma_order(3, 1) == 8 and gamma_order(5, 1) == 8 and gamma_order(3, 2) == 16
    assert legal_deltas('GL', 5) == [1, 2, 3, 4]
    assert legal_deltas('GL', 7) == [1, 6]
    assert legal_deltas('SO', 9) == [1, -1]
    assert legal_deltas('Sp', 9) == [None]
    assert len(legal_deltas('GU', 3)) == 4

def test_gl_pair():
    g, cert = construct('GL', 2, 5)
    spec = ClassicalGroupSpec('GL', 2, 5)
    assert cert.order == 4 and cert.determinant == 1
    assert linalg.det(spec.field, g.data) == 1
    assert is_regular_semisimple(spec, g)
    assert all(verify_certificate(spec, g, cert).values())
    summary = cert.summary()
    assert summary['group'] == 'GL2(5)' and summary['blocks'] == ['s_2(5^1:[1])']

@pytest.mark.parametrize('family', ['GL', 'GU'])
@pytest.mark.parametrize('n', [1, 2, 3, 4, 5, 6])
@pytest.mark.parametrize('q', [3, 5])
def test_linear_and_unitary(family, n, q):
    spec = ClassicalGroupSpec(family, n, q)
    for delta in legal_deltas(family, q):
        g, cert = construct(family, n, q, delta=delta)
        assert linalg.det(spec.field, g.data) == delta
        assert all(verify_certificate(spec, g, cert).values())

@pytest.mark.parametrize('half', [1, 2, 3, 4])
@pytest.mark.parametrize('q', [3, 5, 7])
def test_symplectic(half, q):
    g, cert = construct('Sp', half, q)
    spec = ClassicalGroupSpec('Sp', 2 * half, q)
    assert cert.determinant == 1
    assert all(verify_certificate(spec, g, cert).values())

@pytest.mark.parametrize('n', [2, 3, 4, 5, 6, 7, 8])
@pytest.mark.parametrize('q', [3, 5])
def test_orthogonal(n, q):
    for eps in ((1, -1) if n % 2 == 0 else (0,)):
        spec = ClassicalGroupSpec('SO', n, q, eps)
        for delta in (1, -1):
            g, cert = construct('SO', n, q, eps, delta)
            assert spinor_norm(spec, g) == delta and cert.spinor_norm == delta
            assert all(verify_certificate(spec, g, cert).values())

def test_unitary_determinant_literal():
    F9 = get_field(3, 2)
    minus_one = from_coeffs(F9, [2])
    g, cert = construct('GU', 2, 3, delta=minus_one)
    assert cert.determinant == minus_one.code

def test_rejections():
    with pytest.raises(ConstructionError):
        construct('GL', 2, 4)
    with pytest.raises(ConstructionError):
        construct('GL', 2, 7, delta=2)
    with pytest.raises(ConstructionError):
        construct('GL', 2, 5, delta=0)
    with pytest.raises(IllegalParameters):
        construct('SO', 4, 5, 1, 3)
    with pytest.raises(IllegalParameters):
        construct('Omega', 4, 5)
    with pytest.raises(ConstructionError):
        two_power_order(get_field(7), [[2, 0], [0, 1]])

def test_tampered_certificate_fails():
    g, cert = construct('Sp', 2, 3)
    spec = ClassicalGroupSpec('Sp', 4, 3)
    cert.order *= 2
    checks = verify_certificate(spec, g, cert)
    assert not checks['order'] and checks['member']

def test_construction_suite():
    rows = construction_suite(['GL', 'Sp', 'SO'], [1, 2, 3, 4], [3, 5])
    assert rows and all(not r['failed'] for r in rows)
    assert {r['family'] for r in rows} == {'GL', 'Sp', 'SO'}
    assert not any(r['family'] == 'Sp' and r['n'] % 2 for r in rows)
    assert not any(r['family'] == 'SO' and r['n'] < 2 for r in rows)
    bad = construction_suite(['GL'], [2], [4])
    assert bad[0]['failed'] and bad[0]['order'] is None

@pytest.mark.slow
def test_full_construction_range():
    rows = construction_suite(['GL', 'GU', 'Sp', 'SO'], range(1, 13), [3, 5, 7, 9, 11, 13, 17])
    assert [r for r in rows if r['failed']] == []
