import numpy as np
import pandas as pd
from dataclasses import dataclass, field as dc_field
from itertools import combinations

from src.ff import FieldSpec
from src.poly import Poly
from src.forms import FormSpec
from src.classical import ClassicalGroupSpec, ORTHOGONAL, UNITARY, order_formula, elementary_divisors, \
    centralizer_order_gl, centralizer_order_bruteforce, CommutantTooLarge, eigen_profile, form_spinor_norm, \
    random_member
from src import linalg
from src import param

class UnsupportedParameters(ValueError):
    """Raised for groups, dimensions or element types outside the implemented decomposition rules, and for
    bound checks requested outside their hypotheses."""

def dual_poly(f: Poly, hermitian: bool = False) -> Poly:
    """The monic polynomial whose roots are the inverses of the roots of f (hermitian: inverses of the
    conjugates, alpha -> alpha^(-q))."""
    F = f.spec
    if f.coeffs[0] == 0:
        raise UnsupportedParameters('x divides the polynomial; the element is singular')
    c = np.array(f.coeffs, dtype=np.int64)
    if hermitian:
        c = F.conj(c)
    return Poly(F, c[::-1]).monic()

@dataclass
class Summand:
    """One indecomposable orthogonal summand of V restricted to x.

    kind is 'V' (one Jordan block J_size of the factor, nondegenerate on its own), 'W' (two blocks J_size of a
    factor x -+ 1 that only split off together), 'paired' (J_size of factor plus J_size of its dual) or
    'divisor' (an elementary-divisor block of a group without form)."""
    kind: str
    factor: Poly
    size: int
    dim: int
    dual: Poly = None
    basis: np.ndarray = None

    @property
    def label(self) -> str:
        F = self.factor.spec
        if self.kind in ('V', 'W') and self.factor.degree == 1 and self.factor.coeffs[0] in (1, int(F.neg(1))):
            sign = '-' if (self.factor.coeffs[0] == 1 and F.p != 2) else ''
            return f'{sign}{self.kind}({self.size})'
        if self.kind == 'paired':
            return f'J{self.size}[{self.factor}] + J{self.size}[{self.dual}]'
        return f'J{self.size}[{self.factor}]'

@dataclass
class FormModuleDecomposition:
    group: str
    summands: list
    basis: np.ndarray = None
    blocks: np.ndarray = None

    @property
    def dims(self) -> list:
        return [s.dim for s in self.summands]

    @property
    def labels(self) -> list:
        return [s.label for s in self.summands]

    def ranges(self) -> list:
        out, start = [], 0
        for s in self.summands:
            out.append(list(range(start, start + s.dim)))
            start += s.dim
        return out

def _cyclic(F: FieldSpec, M, v, k: int) -> np.ndarray:
    cols = [np.asarray(v, dtype=np.int64)]
    for _ in range(k - 1):
        cols.append(linalg.matvec(F, M, cols[-1]))
    return np.stack(cols, axis=1)

def _random_in(F: FieldSpec, S, rng) -> np.ndarray:
    return linalg.matvec(F, S, rng.integers(0, F.q, size=S.shape[1]))

def _intersect_kernel(F: FieldSpec, R, P) -> np.ndarray:
    """R ∩ Ker P for a column basis R."""
    return linalg.matmul(F, R, linalg.nullspace(F, linalg.matmul(F, P, R)))

def _perp_within(form: FormSpec, R, Z) -> np.ndarray:
    F = form.field
    C = linalg.nullspace(F, form.bilinear(Z, R))
    if form.kind == 'hermitian':
        C = F.conj(C)
    return linalg.matmul(F, R, C)

def _component_plan(spec: ClassicalGroupSpec, divisors: list) -> list:
    """Per self-dual factor or dual pair: (f, dual, [(kind, size)...]) with sizes decreasing."""
    F = spec.field
    hermitian = spec.form.kind == 'hermitian'
    unipotent = {Poly(F, (int(F.neg(1)), 1)), Poly(F, (1, 1))}
    partitions = {f: lam for f, lam in divisors}
    seen, plan = set(), []
    for f, lam in divisors:
        if f in seen:
            continue
        g = dual_poly(f, hermitian)
        seen.update((f, g))
        if g != f:
            assert sorted(partitions.get(g, [])) == sorted(lam), f'{f} and its dual {g} have different Jordan types'
            plan.append((f, g, [('paired', s) for s in sorted(lam, reverse=True)]))
            continue
        if hermitian or f not in unipotent:
            items = [('V', s) for s in sorted(lam, reverse=True)]
        elif F.p == 2:
            if any(s > 1 for s in lam):
                raise UnsupportedParameters(f'unipotent Jordan blocks of size > 1 in characteristic 2 ({spec.label})')
            assert len(lam) % 2 == 0, 'odd fixed space in characteristic 2'
            items = [('W', 1)] * (len(lam) // 2)
        else:
            # symplectic: odd blocks pair; orthogonal: even blocks pair
            paired_parity = 1 if spec.family == 'Sp' else 0
            items = []
            for s in sorted(set(lam), reverse=True):
                c = lam.count(s)
                if s % 2 == paired_parity:
                    assert c % 2 == 0, f'unpaired Jordan blocks J_{s} in {spec.label}'
                    items += [('W', s)] * (c // 2)
                else:
                    items += [('V', s)] * c
        plan.append((f, f, items))
    return plan

def _realize(spec: ClassicalGroupSpec, M, f: Poly, g: Poly, items: list, rng) -> list:
    F, n, form = spec.field, spec.n, spec.form
    Pf = linalg.mat_pow(F, linalg.poly_at_matrix(F, f, M), n)
    R = linalg.nullspace(F, Pf)
    Pg = None
    if g != f:
        Pg = linalg.mat_pow(F, linalg.poly_at_matrix(F, g, M), n)
        R = np.hstack([R, linalg.nullspace(F, Pg)])
    out = []
    for kind, s in items:
        k = f.degree * s
        width = k if kind == 'V' else 2 * k
        for _ in range(param.PIECE_RETRIES):
            if kind == 'paired':
                v = _random_in(F, _intersect_kernel(F, R, Pf), rng)
                w = _random_in(F, _intersect_kernel(F, R, Pg), rng)
                Z = np.hstack([_cyclic(F, M, v, k), _cyclic(F, M, w, k)])
            elif kind == 'W':
                Z = np.hstack([_cyclic(F, M, _random_in(F, R, rng), k), _cyclic(F, M, _random_in(F, R, rng), k)])
            else:
                Z = _cyclic(F, M, _random_in(F, R, rng), k)
            if linalg.rank(F, Z) == width and linalg.rank(F, form.bilinear(Z, Z)) == width:
                break
        else:
            raise UnsupportedParameters(f'no nondegenerate {kind} summand of size {s} found in {spec.label}')
        out.append(Summand(kind, f, s, width, g if kind == 'paired' else None, Z))
        R = _perp_within(form, R, Z)
    assert R.shape[1] == 0, 'summands do not exhaust the primary component'
    return out

def _check_decomposition(spec: ClassicalGroupSpec, M, dec: FormModuleDecomposition):
    F, n = spec.field, spec.n
    assert sum(dec.dims) == n, f'summand dimensions {dec.dims} do not add up to {n}'
    if dec.basis is None:
        return
    assert linalg.rank(F, dec.basis) == n, 'summands are not independent'
    G = spec.form.bilinear(dec.basis, dec.basis)
    C = linalg.matmul(F, linalg.inverse(F, dec.basis), linalg.matmul(F, M, dec.basis))
    mask = np.zeros((n, n), dtype=bool)
    for idx in dec.ranges():
        mask[np.ix_(idx, idx)] = True
        assert linalg.rank(F, G[np.ix_(idx, idx)]) == len(idx), 'degenerate summand'
    assert not np.any(G[~mask]), 'summands are not mutually orthogonal'
    assert not np.any(C[~mask]), 'x does not preserve the summands'
    dec.blocks = C

def form_module_decomposition(spec: ClassicalGroupSpec, x, seed: int = 0) -> FormModuleDecomposition:
    """Orthogonal decomposition of the natural module into indecomposable x-invariant nondegenerate summands.

    Parameters:
    - spec (ClassicalGroupSpec): the ambient group; dimension at most param.DECOMPOSITION_MAX_DIM.
    - x (Element/np.ndarray): a member of the group.
    - seed (int): seed for the random choice of cyclic generators.

    Return
    - decomposition (FormModuleDecomposition): summands with bases (none for groups without a form), the
      combined basis and x written in it (block diagonal)."""
    if spec.n > param.DECOMPOSITION_MAX_DIM:
        raise UnsupportedParameters(f'decompositions are implemented up to dimension {param.DECOMPOSITION_MAX_DIM}')
    F = spec.field
    M = spec.matrix(x)
    divisors = elementary_divisors(F, M)
    if spec.form.kind == 'none':
        summands = [Summand('divisor', f, s, f.degree * s) for f, lam in divisors for s in lam]
        dec = FormModuleDecomposition(spec.label, summands)
        _check_decomposition(spec, M, dec)
        return dec
    rng = np.random.default_rng(seed)
    summands = []
    for f, g, items in _component_plan(spec, divisors):
        summands += _realize(spec, M, f, g, items, rng)
    dec = FormModuleDecomposition(spec.label, summands, np.hstack([s.basis for s in summands]))
    _check_decomposition(spec, M, dec)
    return dec

# breakability
def is_perfect(family: str, dim: int, q: int, eps: int = 0) -> bool:
    """Perfection of Sp_dim(q) or Omega^eps_dim(q); groups of order 1 count as perfect."""
    if family == 'Sp':
        return ('Sp', dim, q) not in param.imperfect_classical
    if dim == 1:
        return True
    if dim == 2:
        return order_formula('Omega', 2, q, eps) == 1
    name = 'Omega' + {1: '+', -1: '-'}.get(eps, '')
    return (name, dim, q) not in param.imperfect_classical

def allowed_split(family: str, q: int, a: int, b: int) -> bool:
    """Natural subgroups GL^e_a x GL^e_b admitted by the breakability rule for linear and unitary groups."""
    if q == 2 and family in UNITARY:
        bad = {2, 3}
    elif q in (2, 3):
        bad = {2}
    else:
        bad = set()
    return a >= 1 and b >= 1 and a not in bad and b not in bad

@dataclass
class Breakability:
    breakable: bool
    decomposition: FormModuleDecomposition
    witness: tuple = None           # summand indices spanning U
    clause: str = ''

    def __bool__(self):
        return self.breakable

def _linear_breakable(spec: ClassicalGroupSpec, dec: FormModuleDecomposition) -> Breakability:
    n = spec.n
    reach = {0: ()}
    for i, d in enumerate(dec.dims):
        for total, idx in list(reach.items()):
            reach.setdefault(total + d, idx + (i,))
    for a in sorted(reach):
        if 0 < a < n and allowed_split(spec.family, spec.q, a, n - a):
            return Breakability(True, dec, reach[a], f'{a}+{n - a}')
    return Breakability(False, dec)

def _in_omega(form: FormSpec, X) -> bool:
    F = form.field
    I = linalg.identity(X.shape[0])
    if F.p == 2:
        return linalg.rank(F, F.sub(X, I)) % 2 == 0
    if linalg.det(F, X) != 1:
        return False
    return form_spinor_norm(form, X) == 1

def _form_breakable(spec: ClassicalGroupSpec, dec: FormModuleDecomposition, require_perfect: bool) -> Breakability:
    F, n, q = spec.field, spec.n, spec.q
    k = len(dec.summands)
    ranges = dec.ranges()
    C = dec.blocks
    I = linalg.identity(n)
    minus_I = F.neg(I)
    orthogonal = spec.family in ORTHOGONAL
    cache = {}

    def side(members: tuple) -> tuple:
        """(in Cl(U), Cl(U) perfect, x_U = +-1) for the span of the given summands."""
        if members not in cache:
            idx = [i for m in members for i in ranges[m]]
            X = C[np.ix_(idx, idx)]
            scalar = bool(np.array_equal(X, I[:len(idx), :len(idx)]) or
                          np.array_equal(X, minus_I[:len(idx), :len(idx)]))
            if orthogonal:
                sub = spec.form.restrict(dec.basis[:, idx])
                cache[members] = (_in_omega(sub, X), is_perfect('Omega', len(idx), q, sub.eps), scalar)
            else:
                cache[members] = (True, is_perfect('Sp', len(idx), q), scalar)
        return cache[members]

    for size in range(1, k):
        for U in combinations(range(k), size):
            W = tuple(i for i in range(k) if i not in U)
            in_u, perfect_u, scalar_u = side(U)
            in_w, perfect_w, _ = side(W)
            if not (in_u and in_w):
                continue
            if not require_perfect:
                return Breakability(True, dec, U, 'natural subgroup')
            if perfect_u and perfect_w:
                return Breakability(True, dec, U, 'both perfect')
            if perfect_w and scalar_u:
                return Breakability(True, dec, U, 'scalar on U')
    return Breakability(False, dec)

def is_breakable(spec: ClassicalGroupSpec, x, require_perfect: bool = True, seed: int = 0) -> Breakability:
    """Breakability of x.

    Linear and unitary groups: x is breakable when a sub-multiset of its summand dimensions splits n as a + b
    with both parts admitted by allowed_split. Symplectic and orthogonal groups: x is breakable when some
    proper nonzero sum U of summands has x_U in Cl(U), x_{U-perp} in Cl(U-perp) (Cl = Sp or Omega) and either
    both groups are perfect, or Cl(U-perp) is perfect and x_U = +-1. With require_perfect=False the perfection
    clauses are dropped, which tests membership in a natural subgroup Cl(U) x Cl(U-perp)."""
    dec = form_module_decomposition(spec, x, seed)
    if spec.family in ('GL', 'SL') + UNITARY:
        return _linear_breakable(spec, dec)
    return _form_breakable(spec, dec, require_perfect)

# centralizer bounds for unbreakable elements
CHECKS = ('sp-centralizer', 'orthogonal-centralizer', 'eigenspace', 'gl2-centralizer', 'gu2-centralizer',
          'gl3-centralizer', 'large-q-centralizer')

def bound_for(check: str, family: str, n: int, q: int) -> int:
    """Upper bound asserted for unbreakable elements; n is the dimension of the natural module.

    Raises UnsupportedParameters outside the hypotheses of the bound."""
    def need(cond, why):
        if not cond:
            raise UnsupportedParameters(f'{check} needs {why}; got {family}{n}({q})')

    if check == 'sp-centralizer':
        need(family == 'Sp', 'a symplectic group')
        h = n // 2
        need(h >= 2 and (q != 3 or h >= 4) and (q != 2 or h >= 7), 'n >= 2, n >= 4 for q = 3, n >= 7 for q = 2')
        if q == 2:
            return 9 * 2 ** (2 * h + 9)
        if q == 3:
            return 24 * 3 ** (2 * h - 2) if h % 2 else 48 * 3 ** (2 * h + 1)
        if h % 2:
            return q ** (2 * h - 1) * (q * q - 1) if q % 2 else 2 * q ** (2 * h) * (q + 1)
        return 2 * q ** h if q % 2 else q ** (2 * h) * (q * q - 1)
    if check == 'orthogonal-centralizer':
        need(family in ORTHOGONAL, 'an orthogonal group')
        h = n // 2
        need((n % 2 == 0 and h >= 4) or (n % 2 and h >= 3 and q % 2), 'dimension 2n (n >= 4) or 2n+1 (n >= 3, q odd)')
        need(q > 3 or n >= 13, 'dimension at least 13 for q <= 3')
        if q == 2:
            return 3 * 2 ** (2 * h + 6)
        if q == 3:
            return 2 ** 6 * 3 ** (2 * h + 4) if n % 2 == 0 else 2 ** 4 * 3 ** (2 * h + 3)
        return q ** (2 * h - 2) * (q + 1) ** 2
    if check == 'eigenspace':
        need(family == 'Sp' or family in ORTHOGONAL, 'a symplectic or orthogonal group')
        if q == 5:
            need(family in ORTHOGONAL and n % 2 == 0 and n >= 10, 'an even-dimensional orthogonal group, n >= 5')
            return 2
        need(q in (2, 3), 'q in {2, 3, 5}')
        return 4
    if check == 'gl2-centralizer':
        need(family in ('GL', 'SL') and q == 2 and n >= 7, 'GL_n(2) with n >= 7')
        return 2 ** (n + 2)
    if check == 'gu2-centralizer':
        need(family in UNITARY and q == 2 and n >= 9, 'GU_n(2) with n >= 9')
        return 2 ** 48 if n == 9 else 2 ** (n + 4) * 9
    if check == 'gl3-centralizer':
        need(family in ('GL', 'SL') + UNITARY and q == 3 and n >= 7, 'GL^e_n(3) with n >= 7')
        return 3 ** (n + 2) * 2 ** 4
    if check == 'large-q-centralizer':
        need(family in ('GL', 'SL') + UNITARY and q >= 4, 'GL^e_n(q) with q >= 4')
        return q ** n - 1 if family in ('GL', 'SL') else q ** (n - 1) * (q + 1)
    raise UnsupportedParameters(f'unknown bound check {check}')

@dataclass
class BoundReport:
    check: str
    group: str
    samples: int
    bound: int
    seed: int
    unbreakable: int = 0
    skipped: int = 0
    observed: list = dc_field(default_factory=list)
    violations: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def tally(self) -> pd.DataFrame:
        """Counts of the observed values (centralizer orders or eigenspace dimensions) on unbreakable hits."""
        frame = pd.DataFrame({'value': [str(v) for v in self.observed]})
        if frame.empty:
            return pd.DataFrame(columns=['value', 'count'])
        return frame.value_counts().rename('count').reset_index()

    def as_dict(self) -> dict:
        return {'check': self.check, 'group': self.group, 'samples': self.samples, 'bound': str(self.bound),
                'seed': self.seed, 'unbreakable': self.unbreakable, 'skipped': self.skipped,
                'max observed': str(max(self.observed)) if self.observed else None,
                'violations': [{'element': e, 'value': str(v)} for e, v in self.violations]}

def _centralizer(spec: ClassicalGroupSpec, M) -> int:
    if spec.family in ('GL',):
        return centralizer_order_gl(spec.field, M)
    return centralizer_order_bruteforce(spec, M)

def _max_eigenspace(spec: ClassicalGroupSpec, M) -> int:
    dims = list(eigen_profile(spec, M, 1).e.values()) + list(eigen_profile(spec, M, -1).e.values())
    return max(dims) if dims else 0

def sample_bound_check(spec: ClassicalGroupSpec, check: str, samples: int = param.BOUND_SAMPLES,
                       seed: int = 0) -> BoundReport:
    """Draw seeded random elements and test the bound of `check` on every unbreakable one.

    Centralizer orders come from elementary divisors in GL and from the commuting algebra otherwise; elements
    whose commuting algebra is too large are counted as skipped. For gl2-centralizer, an element with
    |C| = 9 * 2^n (n even) is the admitted exception and is not a violation."""
    bound = bound_for(check, spec.family, spec.n, spec.q)
    rng = np.random.default_rng(seed)
    report = BoundReport(check, spec.label, samples, bound, seed)
    F = spec.field
    for i in range(samples):
        M = random_member(spec, rng)
        if is_breakable(spec, M, seed=seed + i):
            continue
        report.unbreakable += 1
        if check == 'eigenspace':
            value = _max_eigenspace(spec, M)
        else:
            try:
                value = _centralizer(spec, M)
            except CommutantTooLarge:
                report.skipped += 1
                continue
        report.observed.append(value)
        if value > bound:
            if check == 'gl2-centralizer' and spec.n % 2 == 0 and value == 9 * 2 ** spec.n:
                continue
            report.violations.append((linalg.format_matrix(F, M), value))
    return report
