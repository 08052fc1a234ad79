import mpmath
import numpy as np
import sympy
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd

from src.cyclo import Cyclotomic
from src.chartab import CharacterTable, TableSemanticError, power_map, primes_one_mod, table_images, \
    CERT_PRIME_LIMIT
from src.groups import Element, EnumeratedGroup
from src.classical import ClassicalGroupSpec, UNITARY
from src.breakdec import is_breakable
from src import linalg

STATUSES = ('surjective', 'not-surjective', 'inconclusive')

class HypothesisViolation(ValueError):
    """Raised when the input falls outside the hypotheses of a check (wrong kind of N, group or element)."""

class TableCorruption(ValueError):
    """Raised when character-table sums that must be rational integers are not."""

def class_names(orders: list) -> list:
    """Names like 1A, 2A, 5A, 5B: element order, then a letter per class of that order in column order."""
    seen = {}
    out = []
    for o in orders:
        i = seen.get(o, 0)
        seen[o] = i + 1
        letters = ''
        while True:
            letters = chr(ord('A') + i % 26) + letters
            i = i // 26 - 1
            if i < 0:
                break
        out.append(f'{o}{letters}')
    return out

@dataclass
class WordCheckResult:
    word: str
    target: str
    status: str
    method: str
    classes: int
    names: list
    witnesses: dict = dc_field(default_factory=dict)
    missed: list = dc_field(default_factory=list)
    image: list = dc_field(default_factory=list)
    N: int = None
    notes: str = ''
    skipped: list = dc_field(default_factory=list)

    def __post_init__(self):
        assert self.status in STATUSES, f'unknown status {self.status}'

    @property
    def missed_names(self) -> list:
        return [self.names[c] for c in self.missed]

    def as_dict(self) -> dict:
        return {'word': self.word, 'target': self.target, 'N': self.N, 'status': self.status, 'method': self.method,
                'classes': self.classes,
                'image': [self.names[c] for c in self.image],
                'witnesses': {self.names[c]: [self.names[a] for a in w] for c, w in sorted(self.witnesses.items())},
                'missed': self.missed_names, 'skipped': [self.names[c] for c in self.skipped],
                'notes': self.notes}

class ClassView():
    """Class data and class-product counts of a character table or an enumerated group.

    Table counts come from the Frobenius formula reduced modulo two primes above |G| and congruent to 1 modulo
    the exponent (an exact integer computation, since every count lies in [0, |G|]); group counts come from class
    matrices. A table with a fusion may be paired with its group so witnesses are re-verified by brute force."""
    def __init__(self, target, group: EnumeratedGroup = None):
        if isinstance(target, CharacterTable):
            self.table, self.group = target, group
            if group is not None and target.fusion is None:
                raise HypothesisViolation('the table carries no fusion into the group')
            self.label, self.order, self.k = target.label, target.order, target.k
            self.sizes = np.array(target.sizes, dtype=np.int64)
            self.orders = list(target.orders)
            self.inverse = list(target.inverse)
        elif isinstance(target, EnumeratedGroup):
            self.table, self.group = None, target
            self.label, self.order, self.k = target.label, target.order, target.num_classes
            self.sizes = np.asarray(target.class_sizes, dtype=np.int64)
            self.orders = [int(o) for o in target.element_orders]
            self.inverse = [int(i) for i in target.inverse_class]
        else:
            raise HypothesisViolation('target must be a CharacterTable or an EnumeratedGroup')
        self.names = class_names(self.orders)
        self._images = None
        self._matrices = {}

    @property
    def method(self) -> str:
        if self.table is None:
            return 'brute-force'
        return 'both' if self.group is not None else 'character-formula'

    def power(self, N: int) -> list:
        if self.table is None:
            return [int(c) for c in self.group.power_class_map(N)]
        try:
            return power_map(self.table, N)
        except KeyError as e:
            raise HypothesisViolation(f'{self.label} lacks the power map for the prime {e.args[0]}')
        except TableSemanticError as e:
            raise TableCorruption(str(e))

    def _modular(self):
        if self._images is None:
            T = self.table
            primes = primes_one_mod(max(T.exponent, 1), T.order, 2)
            if primes[-1] >= CERT_PRIME_LIMIT:
                self._images = []
            else:
                self._images = [(ell, table_images(T, ell)[0]) for ell in primes]
        return self._images

    def _class_matrix(self, a: int) -> np.ndarray:
        if a not in self._matrices:
            self._matrices[a] = self.group.class_matrix(a)
        return self._matrices[a]

    def counts(self, c: int, A: list, B: list) -> np.ndarray:
        """M[i, j] = #{(x, y) in C_A[i] x C_B[j] : xy = g_c}."""
        A, B = list(A), list(B)
        if self.table is None:
            return np.array([[self._class_matrix(a)[b, c] for b in B] for a in A], dtype=np.int64).reshape(len(A),
                                                                                                          len(B))
        images = self._modular()
        if not images:
            return np.array([[int(structure_constant(self.table, a, b, c)) for b in B] for a in A],
                            dtype=np.int64).reshape(len(A), len(B))
        T = self.table
        results = []
        for ell, X in images:
            inv_deg = np.array([pow(d % ell, -1, ell) for d in T.degrees], dtype=np.int64)
            w = X[:, T.inverse[c]] * inv_deg % ell
            S = X[:, A].T @ (w[:, None] * X[:, B] % ell) % ell
            factor = (self.sizes[A][:, None] % ell) * (self.sizes[B][None, :] % ell) % ell
            factor = factor * pow(T.order % ell, -1, ell) % ell
            results.append(S * factor % ell)
        if not np.array_equal(results[0], results[1]):
            raise TableCorruption(f'class-product counts of {self.label} are not integers (class {c})')
        M = results[0]
        cap = np.minimum(self.sizes[A][:, None], self.sizes[B][None, :])
        if np.any(M > cap):
            raise TableCorruption(f'class-product counts of {self.label} exceed the class sizes (class {c})')
        return M

    def products(self, A: list, B: list, targets=None) -> dict:
        """{c: (a, b)} for every class c (of `targets`, default all) lying in C_a C_b for some a in A, b in B."""
        out = {}
        if not A or not B:
            return out
        for c in (range(self.k) if targets is None else targets):
            M = self.counts(c, A, B)
            hit = np.argwhere(M > 0)
            if len(hit):
                i, j = hit[0]
                out[c] = (A[int(i)], B[int(j)])
        return out

    def verify(self, witnesses: dict) -> None:
        """Re-count every witness by brute force in the group (fused ids for tables)."""
        if self.group is None:
            return
        fuse = self.table.fusion if self.table is not None else list(range(self.k))
        for c, w in witnesses.items():
            if len(w) != 2:
                continue
            a, b = w
            n = self.group.brute_structure_constant(fuse[a], fuse[b], fuse[c])
            assert n > 0, f'witness {self.names[a]} x {self.names[b]} misses {self.names[c]} in {self.label}'

    def result(self, word: str, witnesses: dict, **kw) -> WordCheckResult:
        skipped = kw.get('skipped', ())
        missed = [c for c in range(self.k) if c not in witnesses and c not in skipped]
        status = 'surjective' if not missed else 'not-surjective'
        return WordCheckResult(word, self.label, status, kw.pop('method', self.method), self.k, self.names,
                               witnesses, missed, **kw)

# power classes and structure constants
def nth_power_classes(target, N: int) -> set:
    """Classes of g^N over all g."""
    if N < 0:
        raise HypothesisViolation('N must be nonnegative')
    view = target if isinstance(target, ClassView) else ClassView(target)
    return set(view.power(N))

def structure_constant(T: CharacterTable, a: int, b: int, c: int) -> Fraction:
    """(|C_a||C_b|/|G|) sum_chi chi(a) chi(b) conj(chi(c)) / chi(1), exactly; the number of pairs (x, y) in
    C_a x C_b with xy = g_c."""
    for x in (a, b, c):
        if not 0 <= x < T.k:
            raise HypothesisViolation(f'class {x} outside 0..{T.k - 1}')
    total = Cyclotomic.from_int(T.exponent, 0)
    for row in T.values:
        total = total + row[a] * row[b] * row[T.inverse[c]] / row[0].rational()
    if not total.is_rational():
        raise TableCorruption(f'Frobenius sum for ({a}, {b}, {c}) in {T.label} is not rational: {total}')
    return Fraction(T.sizes[a] * T.sizes[b], T.order) * total.rational()

# word maps
def check_xNyN(target, N: int, group: EnumeratedGroup = None) -> WordCheckResult:
    """Surjectivity of (x, y) -> x^N y^N: every class must lie in C_a C_b for power classes a, b."""
    view = ClassView(target, group)
    try:
        P = sorted(nth_power_classes(view, N))
    except HypothesisViolation as e:
        return WordCheckResult('x^N y^N', view.label, 'inconclusive', view.method, view.k, view.names, N=N,
                               notes=str(e))
    witnesses = view.products(P, P)
    view.verify(witnesses)
    return view.result('x^N y^N', witnesses, image=P, N=N)

def check_xNyNzN(target, N: int, group: EnumeratedGroup = None) -> WordCheckResult:
    """Surjectivity of (x, y, z) -> x^N y^N z^N; witnesses are triples of power classes."""
    view = ClassView(target, group)
    try:
        P = sorted(nth_power_classes(view, N))
    except HypothesisViolation as e:
        return WordCheckResult('x^N y^N z^N', view.label, 'inconclusive', view.method, view.k, view.names, N=N,
                               notes=str(e))
    pairs = view.products(P, P)
    view.verify(pairs)
    last = view.products(sorted(pairs), P)
    witnesses = {c: pairs[d] + (b,) for c, (d, b) in last.items()}
    return view.result('x^N y^N z^N', witnesses, image=P, N=N)

def two_element_classes(view: ClassView) -> list:
    return [c for c in range(view.k) if view.orders[c] & (view.orders[c] - 1) == 0]

def check_k_2element_cover(target, k: int, group: EnumeratedGroup = None) -> WordCheckResult:
    """Whether every element is a product of k 2-elements (the identity counts as a 2-element)."""
    if k < 1:
        raise HypothesisViolation('k must be positive')
    view = ClassView(target, group)
    E = two_element_classes(view)
    chains = {c: (c,) for c in E}
    for _ in range(k - 1):
        step = view.products(sorted(chains), E)
        chains = {c: chains[d] + (b,) for c, (d, b) in step.items()}
    return view.result(f'{k} 2-elements', chains, image=E, N=k)

def check_pq_products(target, p: int, q: int, group: EnumeratedGroup = None) -> WordCheckResult:
    """Whether every element is a product of two {p, q}'-elements."""
    view = ClassView(target, group)
    Q = [c for c in range(view.k) if gcd(view.orders[c], p * q) == 1]
    witnesses = view.products(Q, Q)
    view.verify(witnesses)
    return view.result(f"two {{{p},{q}}}'-elements", witnesses, image=Q, notes=f'p={p}, q={q}')

def check_cycle_products(G: EnumeratedGroup, ell: int) -> WordCheckResult:
    """Whether every element of a permutation group is a product of two ell-cycles."""
    if G.field is not None:
        raise HypothesisViolation('cycle products need a permutation group')
    view = ClassView(G)
    Q = [c for c in range(view.k) if [len(x) for x in G.representative(c).cycles()] == [ell]]
    if not Q:
        raise HypothesisViolation(f'{G.label} contains no {ell}-cycles')
    witnesses = view.products(Q, Q)
    return view.result(f'two {ell}-cycles', witnesses, image=Q, N=ell)

def check_triple_class(T: CharacterTable, s: int, group: EnumeratedGroup = None) -> WordCheckResult:
    """Whether C_s C_s C_s covers G, decided per class by sum_chi chi(s)^3 conj(chi(g)) / chi(1)^2 != 0 and
    cross-checked against the iterated class-product counts."""
    view = ClassView(T, group)
    witnesses = {}
    for c in range(T.k):
        total = Cyclotomic.from_int(T.exponent, 0)
        for row in T.values:
            d = row[0].rational()
            total = total + row[s] * row[s] * row[s] * row[T.inverse[c]] / (d * d)
        if not total.is_rational():
            raise TableCorruption(f'triple sum at class {c} of {T.label} is not rational')
        count = Fraction(T.sizes[s] ** 3, T.order) * total.rational()
        iterated = int(sum(int(view.counts(d, [s], [s])[0, 0]) * int(view.counts(c, [d], [s])[0, 0])
                           for d in range(T.k)))
        if count != iterated:
            raise TableCorruption(f'triple count {count} differs from the iterated count {iterated} at class {c}')
        if count:
            witnesses[c] = (s, s, s)
    return view.result(f'{view.names[s]}^3', witnesses, image=[s])

def check_det_constrained_triples(spec: ClassicalGroupSpec, G: EnumeratedGroup) -> WordCheckResult:
    """Whether every element is xyz with x, y, z 2-elements and det x = det y = 1."""
    view = ClassView(G)
    dets = class_determinants(spec, G)
    E = two_element_classes(view)
    E1 = [c for c in E if dets[c] == 1]
    pairs = view.products(E1, E1)
    last = view.products(sorted(pairs), E)
    witnesses = {c: pairs[d] + (b,) for c, (d, b) in last.items()}
    return view.result('xyz, det x = det y = 1', witnesses, image=E1)

# linear and unitary groups
def class_determinants(spec: ClassicalGroupSpec, G: EnumeratedGroup) -> list:
    """Determinant of every class, checked to be constant on each class."""
    F, n = spec.field, spec.n
    if G.field != F:
        raise HypothesisViolation(f'{G.label} is not a matrix group over {F}')
    dets = linalg.batch_det(F, G.data.reshape(-1, n, n))
    per_class = dets[G.reps]
    assert np.array_equal(dets, per_class[G.class_index]), 'determinant is not constant on a class'
    return [int(d) for d in per_class]

def _check_N(spec: ClassicalGroupSpec, N: int) -> int:
    if spec.family not in ('GL', 'GU'):
        raise HypothesisViolation(f'the condition is stated for GL and GU, not {spec.family}')
    eps = -1 if spec.family in UNITARY else 1
    others = [t for t in sympy.primefactors(N) if t != spec.char]
    if len(others) > 1:
        raise HypothesisViolation(f'N = {N} has more than one prime besides {spec.char}')
    if others and (spec.q - eps) % others[0] == 0:
        raise HypothesisViolation(f'{others[0]} divides q - eps = {spec.q - eps}')
    return eps

def check_condition_PN(spec: ClassicalGroupSpec, G: EnumeratedGroup, N: int,
                       unbreakable_only: bool = False) -> WordCheckResult:
    """Every (unbreakable) g is x^N y^N with det(x^N) = 1.

    Parameters:
    - spec (ClassicalGroupSpec): GL_n(q) or GU_n(q).
    - G (EnumeratedGroup): the enumerated group of spec.
    - N (int): p^a t^b with t a prime not dividing q - eps.
    - unbreakable_only (bool): restrict to unbreakable classes."""
    _check_N(spec, N)
    view = ClassView(G)
    dets = class_determinants(spec, G)
    P = sorted(nth_power_classes(view, N))
    P1 = [a for a in P if dets[a] == 1]
    witnesses, skipped = {}, []
    for c in range(view.k):
        if unbreakable_only and is_breakable(spec, G.representative(c)):
            skipped.append(c)
            continue
        B = [b for b in P if dets[b] == dets[c]]
        hit = view.products(P1, B, targets=[c])
        if c in hit:
            witnesses[c] = hit[c]
    result = view.result('P(N)' if not unbreakable_only else 'Pu(N)', witnesses, image=P, N=N, skipped=skipped)
    result.notes = f'{len(skipped)} breakable classes skipped' if unbreakable_only else ''
    return result

# constructive decompositions
def _two_part_power(x: Element) -> Element:
    o = x.order()
    while o % 2 == 0:
        o //= 2
    return x ** o

def two_2elements_witness(G: EnumeratedGroup, g: Element):
    """(x, y) with xy = g and both 2-elements when g is real in G, else None."""
    gi = g.inverse()
    row, irow = G._row(g), G._row(gi)
    for start in range(0, G.order, 1 << 14):
        block = G.data[start:start + (1 << 14)]
        left = G._mul_rows(block, row[None, :])
        right = G._mul_rows(irow[None, :], block)
        hit = np.nonzero(np.all(left == right, axis=1))[0]
        if len(hit):
            t = G.element(start + int(hit[0]))
            x = _two_part_power(t)
            return x.inverse(), x * g
    return None

def _reflection(cycle: tuple) -> list:
    m = len(cycle)
    return [(cycle[i], cycle[m - 1 - i]) for i in range(m // 2)]

def _from_transpositions(pairs: list, n: int) -> Element:
    return Element.from_cycles(pairs, n)

def _cycle_pair(cycle: tuple, n: int, even: bool) -> tuple:
    """x, y with xy = the cycle (odd length >= 5), x an involution and y of order 2 or 4, of the chosen parity."""
    g = Element.from_cycles([cycle], n)
    full = _reflection(cycle)
    x = _from_transpositions(full, n)
    if x.is_even() != even:
        x = _from_transpositions(full[:-1], n)
    return x, x * g

def _inverting_even(g: Element):
    """An even permutation t with t g t^-1 = g^-1, or None."""
    n = g.degree
    cycles = g.cycles(include_fixed=True)
    t = _from_transpositions([p for c in cycles for p in _reflection(c)], n)
    if t.is_even():
        return t
    for c in cycles:
        if len(c) % 2 == 0:
            return t * Element.from_cycles([c], n)
    by_length = {}
    for c in cycles:
        by_length.setdefault(len(c), []).append(c)
    for length, same in by_length.items():
        if len(same) > 1:
            a, b = same[0], same[1]
            return t * _from_transpositions(list(zip(a, b)), n)
    return None

def alt_odd_decompose(g: Element) -> tuple:
    """(x, y), both 2-elements of the alternating group, with xy = g for an even permutation g."""
    if not isinstance(g, Element) or not g.is_perm:
        raise HypothesisViolation('alt_odd_decompose needs a permutation')
    if not g.is_even():
        raise HypothesisViolation(f'{g} is odd')
    n = g.degree
    t = _inverting_even(g)
    if t is not None:
        x = _two_part_power(t)
        x, y = x.inverse(), x * g
    else:
        cycles = sorted(g.cycles(), key=len)
        if len(cycles[0]) == 3 and len(cycles) < 2:
            raise HypothesisViolation(f'{g} is not a product of two 2-elements of A_{n}')
        xs, ys = [], []
        for i, c in enumerate(cycles):
            if len(c) == 3 and i == 0:
                xs.append(_from_transpositions([(c[0], c[2])], n))
                ys.append(_from_transpositions([(c[0], c[1])], n))
                continue
            odd_variant = len(cycles[0]) == 3 and i == 1
            xi, yi = _cycle_pair(c, n, even=not odd_variant)
            xs.append(xi)
            ys.append(yi)
        x, y = xs[0], ys[0]
        for xi, yi in zip(xs[1:], ys[1:]):
            x, y = x * xi, y * yi
    assert x * y == g, 'decomposition does not multiply back'
    assert x.is_even() and y.is_even(), 'factors are not in the alternating group'
    for f in (x, y):
        o = f.order()
        assert o & (o - 1) == 0, f'{f} is not a 2-element'
    return x, y

# counting criteria
def _divisible_mass(view: ClassView, primes) -> int:
    return int(sum(int(view.sizes[c]) for c in range(view.k) if any(view.orders[c] % p == 0 for p in primes)))

def proportion_divisible(target, primes) -> Fraction:
    """|{g : some prime of `primes` divides |g|}| / |G|."""
    view = ClassView(target)
    return Fraction(_divisible_mass(view, primes), view.order)

def half_criterion(target, primes) -> dict:
    """|X| < |G|/2 for X the elements of order divisible by a prime of `primes`; then every g is a quotient
    y z^-1 of two elements outside X."""
    view = ClassView(target)
    mass = _divisible_mass(view, primes)
    return {'target': view.label, 'primes': sorted(primes), 'proportion': Fraction(mass, view.order),
            'holds': 2 * mass < view.order}

def real_odd_power_check(target, N: int, group: EnumeratedGroup = None) -> WordCheckResult:
    """For a group in which every class is real and odd N, x^N y^N is surjective because every element is a
    product of two 2-elements and 2-elements are N-th powers. Witness pairs of 2-element classes are recorded."""
    view = ClassView(target, group)
    if N % 2 == 0:
        return WordCheckResult('x^N y^N', view.label, 'inconclusive', 'realness', view.k, view.names, N=N,
                               notes='N is even')
    nonreal = [c for c in range(view.k) if view.inverse[c] != c]
    if nonreal:
        return WordCheckResult('x^N y^N', view.label, 'inconclusive', 'realness', view.k, view.names, N=N,
                               notes=f'classes {[view.names[c] for c in nonreal]} are not real')
    E = two_element_classes(view)
    witnesses = view.products(E, E)
    assert len(witnesses) == view.k, f'a real class of {view.label} is not a product of two 2-elements'
    return view.result('x^N y^N', witnesses, image=E, N=N, method='realness')

def tail_bound(T: CharacterTable, D: int, a: int, b: int, c: int, prec: int = 128) -> tuple:
    """(bound, actual): (|C(a)| |C(b)| |C(c)|)^(1/2) / D and an upper bound, certified to `prec` bits, for
    |sum over chi(1) >= D of chi(a) chi(b) conj(chi(c)) / chi(1)|."""
    if D < 1:
        raise HypothesisViolation('D must be at least 1')
    C = T.centralizer_orders
    total = Cyclotomic.from_int(T.exponent, 0)
    for row in T.values:
        d = row[0].rational()
        if d >= D:
            total = total + row[a] * row[b] * row[T.inverse[c]] / d
    with mpmath.workprec(prec):
        bound = mpmath.sqrt(mpmath.mpf(C[a]) * C[b] * C[c]) / D
        _, actual = total.abs_interval(prec)
    return bound, actual
