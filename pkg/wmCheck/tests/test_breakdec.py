import itertools
import numpy as np
import pytest

from src.ff import get_field
from src.poly import Poly, companion_matrix
from src.classical import ClassicalGroupSpec, random_member
from src.breakdec import (UnsupportedParameters, dual_poly, form_module_decomposition, is_breakable, is_perfect,
                          allowed_split, bound_for, sample_bound_check)
from src import linalg

F2, F5 = get_field(2), get_field(5)

def test_dual_poly():
    assert dual_poly(Poly(F5, (3, 1))) == Poly(F5, (2, 1))
    f = Poly(F5, (2, 0, 1))
    assert dual_poly(dual_poly(f)) == f
    with pytest.raises(UnsupportedParameters):
        dual_poly(Poly(F5, (0, 1)))

def test_linear_decomposition():
    spec = ClassicalGroupSpec('GL', 4, 2)
    J2 = np.array([[1, 1], [0, 1]])
    C = companion_matrix(Poly(F2, (1, 1, 1)))
    x = linalg.block_diag(J2, C)
    dec = form_module_decomposition(spec, x)
    assert sorted(dec.dims) == [2, 2]
    assert not is_breakable(spec, x)
    J3 = np.array([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    y = linalg.block_diag(J3, [[1]])
    b = is_breakable(spec, y)
    assert b and b.clause == '1+3' and b.witness == (1,)
    J4 = np.eye(4, dtype=np.int64) + np.eye(4, k=1, dtype=np.int64)
    assert form_module_decomposition(spec, J4).dims == [4]
    assert not is_breakable(spec, J4)

def test_symplectic_scalar_perfection():
    spec = ClassicalGroupSpec('Sp', 4, 3)
    minus = get_field(3).neg(linalg.identity(4))
    dec = form_module_decomposition(spec, minus)
    assert dec.dims == [2, 2] and dec.labels == ['-W(1)', '-W(1)']
    assert not is_breakable(spec, minus)
    loose = is_breakable(spec, minus, require_perfect=False)
    assert loose and loose.clause == 'natural subgroup'

def test_orthogonal_identity():
    spec = ClassicalGroupSpec('SO', 4, 5, 1)
    I = linalg.identity(4)
    dec = form_module_decomposition(spec, I)
    assert dec.dims == [1, 1, 1, 1] and set(dec.labels) == {'V(1)'}
    assert is_breakable(spec, I).clause == 'both perfect'

def test_decomposition_is_block_diagonal():
    spec = ClassicalGroupSpec('Sp', 6, 5)
    rng = np.random.default_rng(3)
    for _ in range(5):
        x = random_member(spec, rng)
        dec = form_module_decomposition(spec, x, seed=1)
        assert sum(dec.dims) == 6 and dec.blocks is not None

def test_unsupported():
    spec = ClassicalGroupSpec('Sp', 4, 2)
    t = linalg.identity(4)
    t[0, 2] = 1
    with pytest.raises(UnsupportedParameters):
        form_module_decomposition(spec, t)
    with pytest.raises(UnsupportedParameters):
        form_module_decomposition(ClassicalGroupSpec('GL', 13, 2), linalg.identity(13))

def test_perfection_and_splits():
    assert not is_perfect('Sp', 4, 2) and is_perfect('Sp', 4, 3)
    assert is_perfect('Omega', 2, 3, 1) and not is_perfect('Omega', 2, 5, 1)
    assert not is_perfect('Omega', 4, 3, 1) and is_perfect('Omega', 4, 3, -1)
    assert not allowed_split('GL', 2, 2, 5) and allowed_split('GL', 2, 3, 4)
    assert not allowed_split('GU', 2, 3, 4) and allowed_split('GU', 2, 1, 6)
    assert allowed_split('GL', 4, 2, 2) and not allowed_split('GL', 4, 0, 4)

def test_bounds():
    assert bound_for('sp-centralizer', 'Sp', 8, 5) == 1250
    assert bound_for('gl2-centralizer', 'GL', 7, 2) == 512
    assert bound_for('large-q-centralizer', 'GL', 3, 4) == 63
    assert bound_for('eigenspace', 'Sp', 8, 3) == 4
    for args in (('sp-centralizer', 'GL', 8, 5), ('eigenspace', 'SO', 8, 5), ('gl2-centralizer', 'GL', 6, 2),
                 ('nope', 'GL', 3, 4)):
        with pytest.raises(UnsupportedParameters):
            bound_for(*args)

def test_sample_bound_check():
    report = sample_bound_check(ClassicalGroupSpec('GL', 3, 4), 'large-q-centralizer', samples=40, seed=2)
    assert report.ok and report.samples == 40
    assert 0 < report.unbreakable <= 40 and report.skipped == 0
    assert max(report.observed) <= 63
    tally = report.tally()
    assert list(tally.columns) == ['value', 'count'] and tally['count'].sum() == report.unbreakable
    assert report.as_dict()['violations'] == []

@pytest.mark.slow
def test_gl2_centralizer_sample():
    report = sample_bound_check(ClassicalGroupSpec('GL', 7, 2), 'gl2-centralizer', samples=200, seed=0)
    assert report.ok

def nondegenerate_planes(spec):
    """Column bases of every nondegenerate 2-dimensional subspace."""
    F = spec.field
    vectors = [np.array(v, dtype=np.int64) for v in itertools.product(range(F.q), repeat=spec.n) if any(v)]
    planes = {}
    for u in vectors:
        for v in vectors:
            if spec.form.bilinear(u, v):
                R, _ = linalg.rref(F, np.vstack([u, v]))
                planes.setdefault(R.tobytes(), R.T)
    return list(planes.values())

def stabilizes_a_plane(spec, planes, M) -> bool:
    F = spec.field
    return any(linalg.rank(F, np.hstack([U, linalg.matmul(F, M, U)])) == 2 for U in planes)

@pytest.mark.slow
def test_symplectic_breakability_matches_plane_search(groups):
    spec = ClassicalGroupSpec('Sp', 4, 3)
    F = spec.field
    planes = nondegenerate_planes(spec)
    assert len(planes) == 90
    G = groups('Sp4(3)')
    rng = np.random.default_rng(5)
    elements = [G.representative(c).data for c in range(G.num_classes)]
    elements += [random_member(spec, rng) for _ in range(1500)]
    for M in elements:
        assert bool(is_breakable(spec, M, require_perfect=False)) == stabilizes_a_plane(spec, planes, M)
        dec = form_module_decomposition(spec, M)
        assert np.array_equal(linalg.matmul(F, dec.basis, dec.blocks), linalg.matmul(F, M, dec.basis))

@pytest.mark.slow
def test_breakability_is_a_class_function(groups):
    spec = ClassicalGroupSpec('Sp', 4, 3)
    F = spec.field
    G = groups('Sp4(3)')
    rng = np.random.default_rng(8)
    for c in range(G.num_classes):
        R = G.representative(c).data
        strict, loose = bool(is_breakable(spec, R)), bool(is_breakable(spec, R, require_perfect=False))
        for i in range(3):
            T = random_member(spec, rng)
            M = linalg.matmul(F, linalg.matmul(F, T, R), linalg.inverse(F, T))
            assert G.class_of(spec.element(M)) == c
            assert bool(is_breakable(spec, M, seed=i)) == strict
            assert bool(is_breakable(spec, M, require_perfect=False, seed=i)) == loose

@pytest.mark.slow
@pytest.mark.parametrize('family, n, q, check', [
    ('GL', 7, 2, 'gl2-centralizer'), ('GL', 8, 2, 'gl2-centralizer'), ('GL', 7, 3, 'gl3-centralizer'),
    ('Sp', 8, 3, 'sp-centralizer'),
])
def test_bounds_on_ten_thousand_samples(family, n, q, check):
    report = sample_bound_check(ClassicalGroupSpec(family, n, q), check, samples=10 ** 4, seed=0)
    assert report.samples == 10 ** 4 and report.unbreakable > 0
    assert report.ok, report.violations[:3]
