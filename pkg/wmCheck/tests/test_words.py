import copy, os
import numpy as np
import pytest
from fractions import Fraction

from src.catalog import parse_designator
from src.groups import Element
from src.runner import sweep_values
from src.tabfile import read_table_file
from src.words import (STATUSES, HypothesisViolation, WordCheckResult, ClassView, class_names, nth_power_classes,
                       structure_constant, check_xNyN, check_xNyNzN, check_k_2element_cover, check_pq_products,
                       check_cycle_products, check_triple_class, check_condition_PN, class_determinants,
                       two_2elements_witness, alt_odd_decompose, proportion_divisible, half_criterion,
                       real_odd_power_check, tail_bound, check_det_constrained_triples)

pjoin = os.path.join

def orders_of(result, classes):
    return sorted(int(result.names[c][:-1]) for c in classes)

def test_class_names():
    assert class_names([1, 2, 3, 5, 5]) == ['1A', '2A', '3A', '5A', '5B']
    assert class_names([2] * 27)[-1] == '2AA'
    with pytest.raises(AssertionError):
        WordCheckResult('w', 'G', 'maybe', 'brute-force', 1, ['1A'])

def test_exponent_power_is_trivial(tables, groups):
    T = tables('A5')
    assert nth_power_classes(T, 30) == {0}
    assert nth_power_classes(groups('A5'), 60) == {0}
    assert nth_power_classes(T, 1) == set(range(5))
    with pytest.raises(HypothesisViolation):
        nth_power_classes(T, -1)
    result = check_xNyN(T, 30)
    assert result.status == 'not-surjective'
    assert result.image == [0] and result.missed == [1, 2, 3, 4]

def test_structure_constants(tables):
    T = tables('A5')
    assert structure_constant(T, 3, 3, 0) == 12
    assert structure_constant(T, 3, 4, 1) == 4
    assert structure_constant(T, 3, 4, 2) == 3
    assert structure_constant(T, 2, 2, 1) == 8
    assert isinstance(structure_constant(T, 1, 1, 0), Fraction)
    with pytest.raises(HypothesisViolation):
        structure_constant(T, 0, 0, 5)
    # modular counts agree with the exact Frobenius sums
    view = ClassView(T)
    M = view.counts(1, range(5), range(5))
    for a in range(5):
        for b in range(5):
            assert int(M[a, b]) == structure_constant(T, a, b, 1)

def test_alternating_twelfth_powers(tables, groups):
    T = tables('A5')
    result = check_xNyN(T, 12)
    assert result.status == 'surjective' and result.method == 'character-formula'
    assert [result.names[c] for c in result.image] == ['1A', '5A', '5B']
    both = check_xNyN(T, 12, groups('A5'))
    assert both.method == 'both' and both.status == 'surjective'
    brute = check_xNyN(groups('A5'), 12)
    assert brute.method == 'brute-force' and brute.status == 'surjective'
    d = result.as_dict()
    assert d['N'] == 12 and d['missed'] == [] and sorted(d['witnesses']) == result.names

def test_table_without_fusion(tables, groups):
    T = copy.deepcopy(tables('A5'))
    T.fusion = None
    with pytest.raises(HypothesisViolation):
        ClassView(T, groups('A5'))
    with pytest.raises(HypothesisViolation):
        ClassView([1, 2, 3])

def test_special_linear_twentieth_powers(groups):
    result = check_xNyN(groups('SL2(5)'), 20)
    assert result.status == 'not-surjective'
    assert orders_of(result, result.image) == [1, 3]
    missed = orders_of(result, result.missed)
    assert missed.count(5) == 2
    assert all(result.names[c] not in result.missed_names for c in result.image)

def test_projective_unipotents_are_missed(groups):
    G = groups('PSL2(11)')
    assert G.order == 660
    result = check_xNyN(G, 165)
    assert result.status == 'not-surjective'
    assert orders_of(result, result.image) == [1, 2]
    assert orders_of(result, result.missed) == [11, 11]

def test_three_factor_powers(tables):
    result = check_xNyNzN(tables('A5'), 30)
    assert result.status == 'not-surjective' and result.image == [0]
    result = check_xNyNzN(tables('A5'), 12)
    assert result.status == 'surjective'
    assert all(len(w) == 3 for w in result.witnesses.values())

def test_products_of_2elements(tables, groups):
    assert check_k_2element_cover(tables('A5'), 2).status == 'surjective'
    assert check_k_2element_cover(tables('A5'), 1).status == 'not-surjective'
    G = groups('SL2(5)')
    three = check_k_2element_cover(G, 3)
    assert three.status == 'surjective'
    assert all(len(w) == 3 for w in three.witnesses.values())
    assert check_k_2element_cover(G, 1).status == 'not-surjective'
    with pytest.raises(HypothesisViolation):
        check_k_2element_cover(G, 0)

def test_coprime_products(tables):
    result = check_pq_products(tables('A5'), 2, 3)
    assert result.status == 'surjective'
    assert [result.names[c] for c in result.image] == ['1A', '5A', '5B']
    assert result.notes == 'p=2, q=3'

def test_cycle_products(groups):
    assert check_cycle_products(groups('A5'), 3).status == 'surjective'
    result = check_cycle_products(groups('S4'), 3)
    assert result.status == 'not-surjective'
    assert 2 in orders_of(result, result.missed) and 4 in orders_of(result, result.missed)
    with pytest.raises(HypothesisViolation):
        check_cycle_products(groups('S4'), 5)
    with pytest.raises(HypothesisViolation):
        check_cycle_products(groups('GL2(3)'), 2)

def test_triple_class(tables):
    T = tables('A5')
    trivial = check_triple_class(T, 0)
    assert list(trivial.witnesses) == [0] and trivial.missed == [1, 2, 3, 4]
    result = check_triple_class(T, 3)
    assert sorted(set(result.witnesses) | set(result.missed)) == list(range(5))
    assert all(w == (3, 3, 3) for w in result.witnesses.values())

def test_class_determinants(groups):
    spec = parse_designator('GL2(3)').spec
    G = groups('GL2(3)')
    dets = class_determinants(spec, G)
    assert dets[0] == 1
    assert sum(G.class_sizes[c] for c in range(G.num_classes) if dets[c] == 1) == 24
    with pytest.raises(HypothesisViolation):
        class_determinants(spec, groups('A5'))

def test_condition_hypotheses(groups):
    spec = parse_designator('GL2(5)').spec
    G = groups('GL2(5)')
    with pytest.raises(HypothesisViolation):
        check_condition_PN(spec, G, 6)
    with pytest.raises(HypothesisViolation):
        check_condition_PN(spec, G, 2)
    with pytest.raises(HypothesisViolation):
        check_condition_PN(parse_designator('Sp2(5)').spec, G, 15)
    result = check_condition_PN(spec, G, 15, unbreakable_only=True)
    assert result.word == 'Pu(N)' and result.N == 15 and result.classes == G.num_classes
    assert result.notes == f'{len(result.skipped)} breakable classes skipped'
    assert result.skipped and result.status == 'surjective'
    assert not set(result.skipped) & (set(result.witnesses) | set(result.missed))
    assert result.as_dict()['skipped'] == [result.names[c] for c in result.skipped]

def test_real_elements_split_into_2elements(groups):
    G = groups('A5')
    for c in range(G.num_classes):
        g = G.representative(c)
        x, y = two_2elements_witness(G, g)
        assert x * y == g
        for f in (x, y):
            o = f.order()
            assert o & (o - 1) == 0
    C3 = groups('C3')
    assert two_2elements_witness(C3, C3.representative(1)) is None

@pytest.mark.parametrize('cycles, n', [
    ([(1, 2, 3, 4, 5)], 5),
    ([(1, 2, 3)], 5),
    ([(1, 2, 3), (4, 5, 6)], 6),
    ([(1, 2), (3, 4)], 4),
    ([(1, 2, 3), (4, 5, 6, 7, 8)], 8),
    ([(1, 2, 3, 4, 5, 6, 7)], 7),
    ([], 4),
])
def test_alternating_decomposition(cycles, n):
    g = Element.from_cycles(cycles, n)
    x, y = alt_odd_decompose(g)
    assert x * y == g and x.is_even() and y.is_even()

def test_alternating_decomposition_errors():
    with pytest.raises(HypothesisViolation):
        alt_odd_decompose(Element.from_cycles([(1, 2)], 4))
    with pytest.raises(HypothesisViolation):
        alt_odd_decompose(Element.from_cycles([(1, 2, 3)], 3))
    with pytest.raises(HypothesisViolation):
        alt_odd_decompose('(1,2,3)')

def test_counting_criteria(tables):
    T = tables('A5')
    assert proportion_divisible(T, [2, 5]) == Fraction(39, 60)
    assert proportion_divisible(T, [2, 3, 5]) == Fraction(59, 60)
    assert proportion_divisible(T, [7]) == 0
    half = half_criterion(T, [5])
    assert half['holds'] and half['proportion'] == Fraction(2, 5)
    assert not half_criterion(T, [2, 5])['holds']

def test_real_odd_powers(tables, templates):
    T = tables('A5')
    result = real_odd_power_check(T, 7)
    assert result.status == 'surjective' and result.method == 'realness'
    assert real_odd_power_check(T, 4).status == 'inconclusive'
    C4 = read_table_file(pjoin(templates, 'C4.ctab'))
    nonreal = real_odd_power_check(C4, 3)
    assert nonreal.status == 'inconclusive' and '4A' in nonreal.notes
    assert nonreal.status in STATUSES

def test_tail_bound(tables):
    T = tables('A5')
    bound, actual = tail_bound(T, 4, 3, 3, 3)
    assert abs(float(actual) - 0.25) < 1e-10
    assert float(bound) == pytest.approx(125 ** 0.5 / 4)
    _, empty = tail_bound(T, 6, 3, 3, 3)
    assert float(empty) < 1e-30
    with pytest.raises(HypothesisViolation):
        tail_bound(T, 0, 0, 0, 0)

def test_condition_holds_on_small_linear_group(groups):
    spec = parse_designator('GL2(5)').spec
    result = check_condition_PN(spec, groups('GL2(5)'), 15)
    assert result.status == 'surjective' and result.word == 'P(N)'

SIMPLE = ['A6', 'A7', 'A8', 'PSL2(7)', 'PSL2(8)', 'PSL2(11)', 'PSL2(13)', 'PSL3(3)', 'PSU3(3)', 'PSU4(2)']

@pytest.mark.slow
@pytest.mark.parametrize('label', SIMPLE)
def test_two_prime_powers_on_simple_groups(tables, groups, label):
    T, G = tables(label), groups(label)
    Ns = sweep_values({'sweep': {'pairs': True}}, T.order, T.exponent)
    assert len(Ns) > 1
    for N in Ns:
        result = check_xNyN(T, N, G)
        assert result.status == 'surjective', (N, result.missed_names)
        assert result.method == 'both'

@pytest.mark.slow
@pytest.mark.parametrize('label, k', [
    ('SL2(7)', 3), ('SL2(9)', 3), ('SL2(11)', 3), ('SL2(13)', 3), ('SL3(3)', 3), ('SU3(3)', 3), ('SU4(2)', 3),
    ('Sp4(3)', 3), ('A6', 2), ('A7', 2), ('A8', 2),
])
def test_2element_covers(groups, label, k):
    result = check_k_2element_cover(groups(label), k)
    assert result.status == 'surjective', result.missed_names
    assert all(len(w) == k for w in result.witnesses.values())

@pytest.mark.slow
def test_det_constrained_triples_in_unitary_group(groups):
    spec = parse_designator('GU3(3)').spec
    G = groups('GU3(3)')
    assert G.order == 24192
    result = check_det_constrained_triples(spec, G)
    assert result.status == 'surjective', result.missed_names
    dets = class_determinants(spec, G)
    for c, (x, y, z) in result.witnesses.items():
        assert dets[x] == dets[y] == 1
        assert G.element_orders[z] & (G.element_orders[z] - 1) == 0

@pytest.mark.slow
@pytest.mark.parametrize('label', ['SL2(5)', 'PSL2(7)', 'GL2(3)'])
def test_structure_constants_match_brute_force(tables, groups, label):
    T, G = tables(label), groups(label)
    fuse = T.fusion
    for a in range(T.k):
        for b in range(T.k):
            for c in range(T.k):
                assert structure_constant(T, a, b, c) == G.brute_structure_constant(fuse[a], fuse[b], fuse[c])

@pytest.mark.slow
@pytest.mark.parametrize('label', ['A5', 'S4', 'SL2(5)', 'GL2(3)', 'PSL2(7)'])
def test_tail_bound_holds(tables, label):
    T = tables(label)
    rng = np.random.default_rng(11)
    top = max(T.degrees)
    for _ in range(1000):
        D = int(rng.integers(1, top + 2))
        a, b, c = (int(x) for x in rng.integers(0, T.k, size=3))
        bound, actual = tail_bound(T, D, a, b, c)
        assert actual <= bound, (D, a, b, c)
