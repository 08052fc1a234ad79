import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.ff import get_field
from src.forms import reflection
from src.groups import Element
from src.classical import (ClassicalGroupSpec, IllegalParameters, order_formula, enumerate_classical, membership,
                           is_member, spinor_norm, dickson_invariant, eigen_profile, mu_subgroup,
                           is_regular_semisimple, is_semisimple, elementary_divisors, gl_centralizer_order,
                           centralizer_order_gl, centralizer_order_bruteforce, random_isometry, random_member,
                           build_group)
from src import linalg

F5 = get_field(5)

@pytest.mark.parametrize('family, n, q, eps, order', [
    ('GL', 2, 3, 0, 48), ('SL', 2, 5, 0, 120), ('GU', 2, 2, 0, 18), ('SU', 3, 3, 0, 6048),
    ('Sp', 4, 2, 0, 720), ('Sp', 4, 3, 0, 51840), ('GO', 4, 2, 1, 72), ('Omega', 4, 2, -1, 60),
    ('SO', 3, 3, 0, 24), ('Omega', 3, 3, 0, 12), ('SO', 4, 3, -1, 720),
])
def test_order_formula(family, n, q, eps, order):
    assert order_formula(family, n, q, eps) == order

@pytest.mark.parametrize('args', [('Sp', 3, 3), ('GO', 3, 2), ('GO', 4, 3, 0), ('GL', 2, 6), ('XY', 2, 3),
                                  ('SL', 0, 3), ('SO', 1, 3)])
def test_illegal_parameters(args):
    with pytest.raises(IllegalParameters):
        ClassicalGroupSpec(*args)

@pytest.mark.parametrize('family, n, q, eps, classes', [
    ('SL', 2, 3, 0, 7), ('GU', 2, 2, 0, 9), ('SU', 3, 2, 0, None), ('Sp', 4, 2, 0, 11),
    ('SO', 3, 3, 0, 5), ('Omega', 3, 3, 0, 4), ('Omega', 4, 2, -1, 5), ('GO', 4, 2, 1, 9),
])
def test_enumeration_meets_order(family, n, q, eps, classes):
    spec = ClassicalGroupSpec(family, n, q, eps)
    G = enumerate_classical(spec)
    assert G.order == spec.order
    if classes is not None:
        assert G.num_classes == classes
    assert all(is_member(spec, g) for g in spec.generators)

def test_labels_and_fields():
    spec = ClassicalGroupSpec('SU', 3, 2)
    assert spec.label == 'SU3(2)' and spec.eps == -1
    assert spec.field.q == 4 and spec.base_field.q == 2 and spec.rank == 3
    assert ClassicalGroupSpec('Omega', 8, 2, -1).label == 'Omega-8(2)'
    assert ClassicalGroupSpec('Sp', 6, 3).rank == 3
    with pytest.raises(IllegalParameters):
        spec.matrix(linalg.identity(2))

def test_membership_reasons():
    spec = ClassicalGroupSpec('Omega', 3, 3)
    form = spec.form
    F = spec.field
    a = reflection(form, [0, 0, 1])                 # Q = 1, a square
    b = reflection(form, [1, 2, 0])                 # Q = 2, a non-square
    c = reflection(form, [1, 1, 0])                 # Q = 1
    assert membership(spec, a) == (False, 'determinant')
    assert membership(spec, linalg.matmul(F, a, b)) == (False, 'spinor norm')
    assert membership(spec, linalg.matmul(F, a, c)) == (True, 'member')
    so = ClassicalGroupSpec('SO', 3, 3)
    assert spinor_norm(so, linalg.matmul(F, a, b)) == -1
    assert membership(so, [[1, 1, 0], [0, 1, 0], [0, 0, 1]]) == (False, 'form not preserved')
    assert membership(so, [[1, 1, 0], [1, 1, 0], [0, 0, 1]]) == (False, 'singular')
    with pytest.raises(IllegalParameters):
        spinor_norm(ClassicalGroupSpec('Sp', 2, 3), linalg.identity(2))

def test_dickson_invariant():
    spec = ClassicalGroupSpec('Omega', 4, 2, -1)
    t = reflection(spec.form, [0, 0, 1, 0])
    assert dickson_invariant(spec, t) == 1
    assert membership(spec, t) == (False, 'Dickson invariant')
    assert is_member(ClassicalGroupSpec('GO', 4, 2, -1), t)

def test_random_isometry_is_member():
    for family, n, q, eps in (('SU', 3, 3, 0), ('Sp', 6, 3, 0), ('Omega', 6, 5, 1), ('SO', 5, 3, 0)):
        spec = ClassicalGroupSpec(family, n, q, eps)
        assert is_member(spec, random_isometry(spec, seed=4))

def test_eigen_profile():
    spec = ClassicalGroupSpec('GL', 3, 5)
    g = spec.element(np.diag([1, 2, 2]))
    profile = eigen_profile(spec, g)
    assert mu_subgroup(F5, 4) == [1, 2, 3, 4]
    assert mu_subgroup(F5, 2) == [1, 4]
    assert profile.e == {1: 1, 2: 2, 3: 0, 4: 0}
    assert profile.multiplicity(2) == 2 and profile.eigenspace(3) == 0
    assert sorted(profile.degrees) == [(1, 1), (1, 2)]

def test_regular_semisimple():
    spec = ClassicalGroupSpec('GL', 3, 5)
    assert is_regular_semisimple(spec, np.diag([1, 2, 3]))
    assert not is_regular_semisimple(spec, np.diag([1, 2, 2]))
    J = np.array([[1, 1, 0], [0, 1, 0], [0, 0, 2]])
    assert not is_semisimple(spec, J) and not is_regular_semisimple(spec, J)
    sp = ClassicalGroupSpec('Sp', 2, 5)
    assert is_regular_semisimple(sp, np.diag([2, 3]))
    assert not is_regular_semisimple(sp, np.diag([4, 4]))

def test_centralizer_orders():
    spec = ClassicalGroupSpec('GL', 3, 5)
    J = np.array([[1, 1, 0], [0, 1, 0], [0, 0, 2]])
    divisors = {f.coeffs: lam for f, lam in elementary_divisors(F5, J)}
    assert divisors == {(4, 1): [2], (3, 1): [1]}
    assert centralizer_order_gl(F5, J) == 80
    assert centralizer_order_bruteforce(spec, J) == 80
    assert gl_centralizer_order(2, [(1, [1, 1])], 2) == 6
    with pytest.raises(IllegalParameters):
        gl_centralizer_order(2, [(1, [1, 2])])
    with pytest.raises(IllegalParameters):
        gl_centralizer_order(2, [(1, [1])], 2)
    sl = ClassicalGroupSpec('SL', 2, 3)
    assert centralizer_order_bruteforce(sl, Element(linalg.identity(2), sl.field)) == 24

@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.sampled_from([('SO', 3, 5, 0), ('SO', 4, 3, 1),
                                                                         ('GO', 4, 3, -1), ('SO', 5, 3, 0)]))
def test_spinor_norm_is_multiplicative(s1, s2, params):
    spec = ClassicalGroupSpec(*params)
    a, b = random_isometry(spec, s1), random_isometry(spec, s2)
    assert spinor_norm(spec, a * b) == spinor_norm(spec, a) * spinor_norm(spec, b)

def test_build_group():
    spec = build_group('SU', 3, 3)
    assert spec.order == 6048 and spec.field.q == 9
    assert all(is_member(spec, g) for g in spec.generators)
    with pytest.raises(IllegalParameters):
        build_group('Sp', 3, 5)

@pytest.mark.parametrize('n', [4, 6])
def test_omega_plus_members_in_odd_characteristic(n):
    spec = ClassicalGroupSpec('Omega', n, 3, 1)
    rng = np.random.default_rng(n)
    for _ in range(20):
        M = random_member(spec, rng)
        assert membership(spec, M) == (True, 'member')

@pytest.mark.slow
@pytest.mark.parametrize('n', [4, 8])
def test_spinor_norm_on_random_special_orthogonal(n):
    spec = ClassicalGroupSpec('SO', n, 3, 1)
    rng = np.random.default_rng(2024)
    norms = [spinor_norm(spec, random_member(spec, rng)) for _ in range(1000)]
    assert set(norms) == {1, -1}
    assert 350 < norms.count(1) < 650
