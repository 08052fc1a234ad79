import numpy as np
from dataclasses import dataclass, field as dc_field
from math import prod

from src.ff import FieldSpec, FieldError, field_of_order, get_field, embedding
from src.poly import Poly, factor_poly
from src.forms import FormSpec, FormError, standard_gram, witt_type, isometric_basis, reflection, \
    reflection_factorization
from src.groups import Element, EnumeratedGroup, GroupError
from src import linalg
from src.param import ENUMERATION_CAP, COMMUTANT_LIMIT, CHUNK

FAMILIES = ('GL', 'SL', 'GU', 'SU', 'Sp', 'GO', 'SO', 'Omega')
ORTHOGONAL = ('GO', 'SO', 'Omega')
UNITARY = ('GU', 'SU')

class IllegalParameters(ValueError):
    """Raised for parameter combinations that define no group of the family, or inputs of the wrong shape."""

class CommutantTooLarge(ValueError):
    def __init__(self, dim: int, q: int):
        self.dim = dim
        super().__init__(f'commuting algebra of dimension {dim} over F_{q} is too large to enumerate')

def order_formula(family: str, n: int, q: int, eps: int = 0) -> int:
    """Order of the classical group from its closed-form order polynomial."""
    if family in ('GL', 'SL'):
        order = q ** (n * (n - 1) // 2) * prod(q ** i - 1 for i in range(1, n + 1))
        return order if family == 'GL' else order // (q - 1)
    if family in UNITARY:
        order = q ** (n * (n - 1) // 2) * prod(q ** i - (-1) ** i for i in range(1, n + 1))
        return order if family == 'GU' else order // (q + 1)
    if family == 'Sp':
        m = n // 2
        return q ** (m * m) * prod(q ** (2 * i) - 1 for i in range(1, m + 1))
    m = n // 2
    if n % 2:
        go = 2 * q ** (m * m) * prod(q ** (2 * i) - 1 for i in range(1, m + 1))
    else:
        go = 2 * q ** (m * (m - 1)) * (q ** m - eps) * prod(q ** (2 * i) - 1 for i in range(1, m))
    if family == 'GO':
        return go
    so = go // 2 if q % 2 else go
    if family == 'SO':
        return so
    return so // 2 if q % 2 else go // 2

class ClassicalGroupSpec():
    """A classical group with its fixed form.

    Matrices act on column vectors; unitary groups live over F_{q^2}. `eps` is +1 for GL/SL, -1 for GU/SU,
    the Witt type for even-dimensional orthogonal groups and 0 for Sp and odd-dimensional orthogonal groups."""
    def __init__(self, family: str, n: int, q: int, eps: int = 0):
        if family not in FAMILIES:
            raise IllegalParameters(f'unknown family {family}')
        try:
            base = field_of_order(q)
        except FieldError as e:
            raise IllegalParameters(str(e))
        if n < 1:
            raise IllegalParameters('dimension must be positive')
        if family == 'Sp' and n % 2:
            raise IllegalParameters('symplectic groups need even dimension')
        if family in ORTHOGONAL:
            if n < 2:
                raise IllegalParameters('orthogonal groups need dimension at least 2')
            if n % 2 and q % 2 == 0:
                raise IllegalParameters('odd-dimensional orthogonal groups need odd q')
            if n % 2 == 0 and eps not in (1, -1):
                raise IllegalParameters('even-dimensional orthogonal groups need eps = +1 or -1')
            eps = eps if n % 2 == 0 else 0
        elif family in UNITARY:
            eps = -1
        elif family in ('GL', 'SL'):
            eps = 1
        else:
            eps = 0
        self.family, self.n, self.q, self.eps = family, int(n), int(q), eps
        self.base_field = base
        self.field = get_field(base.p, 2 * base.k) if family in UNITARY else base
        kind = {'GL': 'none', 'SL': 'none', 'GU': 'hermitian', 'SU': 'hermitian', 'Sp': 'symplectic'}.get(
            family, 'quadratic' if q % 2 == 0 else 'symmetric')
        self.form = standard_gram(kind, self.n, self.field, eps)
        self._fix = None
        if family in ORTHOGONAL and n % 2 == 0:
            assert witt_type(self.form) == eps, f'standard form of {self.label} has the wrong Witt type'
        self.generators = standard_generators(self)

    @property
    def label(self) -> str:
        sign = {1: '+', -1: '-'}.get(self.eps, '') if self.family in ORTHOGONAL else ''
        return f'{self.family}{sign}{self.n}({self.q})'

    @property
    def order(self) -> int:
        return order_formula(self.family, self.n, self.q, self.eps)

    @property
    def char(self) -> int:
        return self.field.p

    @property
    def rank(self) -> int:
        """Rank of the ambient algebraic group measured by its maximal tori: n for GL-type, n/2 otherwise."""
        return self.n if self.family in ('GL', 'SL', 'GU', 'SU') else self.n // 2

    def element(self, M) -> Element:
        return Element(np.asarray(M, dtype=np.int64) % self.field.q, self.field)

    def matrix(self, g) -> np.ndarray:
        M = g.data if isinstance(g, Element) else np.asarray(g, dtype=np.int64)
        if isinstance(g, Element) and g.field != self.field:
            raise IllegalParameters(f'element over {g.field}, group over {self.field}')
        if M.shape != (self.n, self.n):
            raise IllegalParameters(f'expected a {self.n}x{self.n} matrix, got shape {M.shape}')
        return M

    def __repr__(self):
        return self.label

def build_group(family: str, n: int, q: int, eps: int = 0) -> ClassicalGroupSpec:
    return ClassicalGroupSpec(family, n, q, eps)

# generators and random members
def _root_elements(F: FieldSpec, n: int) -> list:
    """x_{+-a}(c) for the simple roots a of SL_n and c running over an F_p-basis of F."""
    out = []
    for i in range(n - 1):
        for c in F.prime_basis():
            for a, b in ((i, i + 1), (i + 1, i)):
                M = linalg.identity(n)
                M[a, b] = c
                out.append(M)
    return out

def _anisotropic(spec: ClassicalGroupSpec, rng, nonsquare_to=None) -> np.ndarray:
    """A vector with Q(v) != 0 (and Q(v)/nonsquare_to a non-square when given)."""
    F, form = spec.field, spec.form
    for _ in range(256):
        cand = rng.integers(0, F.q, size=(256, spec.n))
        vals = form.quadratic(cand)
        for v, Qv in zip(cand, vals):
            if Qv == 0:
                continue
            if nonsquare_to is None or not F.is_square(int(F.div(int(Qv), nonsquare_to))):
                return v
    raise FormError(f'no suitable anisotropic vector in {spec.label}')

def _corrections(spec: ClassicalGroupSpec) -> dict:
    """Fixed elements moving a member of the full isometry group into the subgroup of the family."""
    rng = np.random.default_rng(12345)
    form, F = spec.form, spec.field
    out = {}
    if spec.family in ORTHOGONAL:
        a = _anisotropic(spec, rng)
        out['reflection'] = reflection(form, a)
        if F.p != 2 and spec.family == 'Omega':
            Qa = form.quadratic(a)
            try:
                b = _anisotropic(spec, rng, nonsquare_to=Qa)
                out['spinor'] = linalg.matmul(F, reflection(form, a), reflection(form, b))
            except FormError:
                out['spinor'] = None
    return out

def random_member(spec: ClassicalGroupSpec, rng) -> np.ndarray:
    """A (close to) uniformly random element of the group as a matrix."""
    F, n = spec.field, spec.n
    if spec.family in ('GL', 'SL'):
        while True:
            M = rng.integers(0, F.q, size=(n, n))
            d = linalg.det(F, M)
            if d:
                break
        if spec.family == 'SL':
            M[:, 0] = F.mul(M[:, 0], int(F.inv(d)))
        return M
    M = isometric_basis(spec.form, spec.form, rng)
    if spec.family == 'SU':
        d = linalg.det(F, M)
        M[:, 0] = F.mul(M[:, 0], int(F.inv(d)))
    elif spec.family in ('SO', 'Omega'):
        fix = spec._fix
        if fix is None:
            fix = spec._fix = _corrections(spec)
        if F.p != 2 and linalg.det(F, M) != 1:
            M = linalg.matmul(F, M, fix['reflection'])
        if spec.family == 'Omega':
            if F.p == 2:
                if dickson_invariant(spec, M):
                    M = linalg.matmul(F, M, fix['reflection'])
            elif spinor_norm(spec, M) == -1:
                if fix['spinor'] is None:
                    raise FormError(f'no spinor-norm correction in {spec.label}')
                M = linalg.matmul(F, M, fix['spinor'])
    return M

def standard_generators(spec: ClassicalGroupSpec, count: int = 4, seed: int = 0) -> list:
    """Root elements (and a diagonal generator for GL) for the linear families; for the form groups, `count`
    seeded random members. enumerate_classical tops the list up until the order formula is met."""
    F, n = spec.field, spec.n
    if spec.family in ('GL', 'SL'):
        gens = [spec.element(M) for M in _root_elements(F, n)]
        if spec.family == 'GL' or not gens:
            D = linalg.identity(n)
            if spec.family == 'GL':
                D[0, 0] = F.primitive_element()
            gens.append(spec.element(D))
        return gens
    rng = np.random.default_rng(seed)
    return [spec.element(random_member(spec, rng)) for _ in range(count)]

def random_isometry(spec: ClassicalGroupSpec, seed: int = 0) -> Element:
    return spec.element(random_member(spec, np.random.default_rng(seed)))

def enumerate_classical(spec: ClassicalGroupSpec, cap: int = ENUMERATION_CAP, rounds: int = 8,
                        seed: int = 1) -> EnumeratedGroup:
    """Enumerate the group, adding seeded random members to the generators until the order formula is met."""
    target = spec.order
    if target > cap:
        raise GroupError(f'{spec.label} has order {target} above the enumeration cap {cap}')
    rng = np.random.default_rng(seed)
    gens = list(spec.generators)
    for _ in range(rounds):
        G = EnumeratedGroup(gens, cap, spec.label)
        if G.order == target:
            spec.generators = gens
            return G
        gens.append(spec.element(random_member(spec, rng)))
    raise GroupError(f'generators of {spec.label} reach only {G.order} of {target} elements')

# membership
def form_spinor_norm(form: FormSpec, M) -> int:
    """+1 or -1: the square class of the product of Q(v_i) over a reflection factorization of M, for any
    nondegenerate symmetric form in odd characteristic."""
    F = form.field
    value = 1
    for v in reflection_factorization(form, M):
        value = int(F.mul(value, form.quadratic(v)))
    return 1 if F.is_square(value) else -1

def spinor_norm(spec: ClassicalGroupSpec, g) -> int:
    """+1 or -1: the spinor norm of g in the group's own form (odd q)."""
    if spec.family not in ORTHOGONAL or spec.q % 2 == 0:
        raise IllegalParameters('the spinor norm is defined for orthogonal groups in odd characteristic')
    return form_spinor_norm(spec.form, spec.matrix(g))

def dickson_invariant(spec: ClassicalGroupSpec, g) -> int:
    """rank(g - 1) mod 2."""
    F = spec.field
    M = spec.matrix(g)
    return linalg.rank(F, F.sub(M, linalg.identity(spec.n))) % 2

def membership(spec: ClassicalGroupSpec, g) -> tuple:
    """(is_member, reason): invertibility, form preservation, determinant, spinor norm or Dickson invariant."""
    F = spec.field
    M = spec.matrix(g)
    if np.any(M < 0) or np.any(M >= F.q):
        raise IllegalParameters(f'entries outside {F}')
    d = linalg.det(F, M)
    if d == 0:
        return False, 'singular'
    if not spec.form.preserves(M):
        return False, 'form not preserved'
    if spec.family in ('SL', 'SU', 'SO', 'Omega') and d != 1:
        return False, 'determinant'
    if spec.family == 'Omega':
        if spec.q % 2:
            if spinor_norm(spec, M) != 1:
                return False, 'spinor norm'
        elif dickson_invariant(spec, M):
            return False, 'Dickson invariant'
    return True, 'member'

def is_member(spec: ClassicalGroupSpec, g) -> bool:
    return membership(spec, g)[0]

# eigenvalues
def _embed_poly_value(f: Poly, alpha: int, K: FieldSpec) -> int:
    img = embedding(f.spec, K)
    val = 0
    for c in reversed(f.coeffs):
        val = int(K.add(K.mul(val, alpha), int(img[c])))
    return val

@dataclass
class EigenProfile:
    """Characteristic-polynomial factors of g over its field, and e(g, alpha) = dim Ker(g - alpha) for alpha in
    the designated group mu_{q-eps} (a subgroup of alpha_field^*)."""
    field: FieldSpec
    factors: list
    alpha_field: FieldSpec
    e: dict = dc_field(default_factory=dict)

    @property
    def degrees(self) -> list:
        return [(f.degree, m) for f, m in self.factors]

    def multiplicity(self, alpha: int) -> int:
        """Algebraic multiplicity of alpha (a code of alpha_field)."""
        return sum(m for f, m in self.factors if _embed_poly_value(f, alpha, self.alpha_field) == 0)

    def eigenspace(self, alpha: int) -> int:
        return self.e.get(int(alpha), 0)

def mu_subgroup(K: FieldSpec, order: int) -> list:
    """Codes of the elements of K^* of order dividing `order`, increasing."""
    xs = np.arange(1, K.q, dtype=np.int64)
    return [int(x) for x in xs[K.pow(xs, order) == 1]]

def eigen_profile(spec: ClassicalGroupSpec, g, eps: int = None, seed: int = 0) -> EigenProfile:
    """Factors of the characteristic polynomial and the eigenspace dimensions e(g, alpha), alpha in mu_{q-eps}.

    Parameters:
    - spec (ClassicalGroupSpec): ambient group.
    - g (Element/np.ndarray): the element.
    - eps (int): +1 or -1; defaults to -1 for unitary families and +1 otherwise."""
    F, q, n = spec.field, spec.q, spec.n
    M = spec.matrix(g)
    eps = eps if eps is not None else (-1 if spec.family in UNITARY else 1)
    factors = factor_poly(linalg.charpoly(F, M), seed)
    assert sum(f.degree * m for f, m in factors) == n, 'characteristic polynomial degree mismatch'
    K = F if (eps == 1 or spec.family in UNITARY) else get_field(F.p, 2 * F.k)
    MK = embedding(F, K)[M] if K != F else M
    e = {}
    for alpha in mu_subgroup(K, q - eps):
        e[alpha] = n - linalg.rank(K, K.sub(MK, K.mul(alpha, linalg.identity(n))))
    return EigenProfile(F, factors, K, e)

def is_semisimple(spec: ClassicalGroupSpec, g) -> bool:
    F = spec.field
    M = spec.matrix(g)
    rad = Poly.const(F, 1)
    for f, _ in factor_poly(linalg.charpoly(F, M)):
        rad = rad * f
    return not np.any(linalg.poly_at_matrix(F, rad, M))

def _multiplicity_criterion(spec: ClassicalGroupSpec, factors: list) -> bool:
    F = spec.field
    one = Poly(F, (int(F.neg(1)), 1))
    minus_one = Poly(F, (1, 1))
    for f, m in factors:
        if spec.family in ORTHOGONAL and f in (one, minus_one):
            if spec.n % 2 and f == one and F.p != 2:
                if m != 1:
                    return False
            elif m > 2:
                return False
        elif m != 1:
            return False
    return True

def lie_centralizer_dim(spec: ClassicalGroupSpec, g) -> int:
    """Dimension of {X : Xg = gX} inside the Lie algebra of the form (all matrices for GL/GU, where the algebraic
    unitary group is GL over the closure)."""
    F, n = spec.field, spec.n
    M = spec.matrix(g)
    I = linalg.identity(n)
    rows = [F.sub(np.kron(I, M.T), np.kron(M, I))]
    if spec.family in ('Sp',) + ORTHOGONAL:
        G = spec.form.gram
        P = np.zeros((n * n, n * n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                P[i * n + j, j * n + i] = 1
        KG = np.kron(G, I)
        if spec.form.kind == 'quadratic':
            rows.append(F.sub(KG, P @ KG))
            rows.append(KG[[a * n + a for a in range(n)]])
        else:
            rows.append(F.add(np.kron(I, G.T) @ P, KG))
    system = np.vstack(rows)
    return n * n - linalg.rank(F, system)

def is_regular_semisimple(spec: ClassicalGroupSpec, g) -> bool:
    """Regular semisimple test, decided twice: eigenvalue multiplicities per family, and the dimension of the
    Lie-algebra centralizer against the rank. The two must agree."""
    F = spec.field
    M = spec.matrix(g)
    factors = factor_poly(linalg.charpoly(F, M))
    semisimple = is_semisimple(spec, M)
    by_multiplicity = semisimple and _multiplicity_criterion(spec, factors)
    by_dimension = semisimple and lie_centralizer_dim(spec, M) == spec.rank
    assert by_multiplicity == by_dimension, \
        f'regularity criteria disagree on {linalg.format_matrix(F, M)} in {spec.label}'
    return by_multiplicity

# centralizers
def elementary_divisors(F: FieldSpec, M) -> list:
    """(irreducible factor, partition) per primary component, partitions read off dim Ker f(M)^j."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    out = []
    for f, m in factor_poly(linalg.charpoly(F, M)):
        d = f.degree
        fM = linalg.poly_at_matrix(F, f, M)
        P = linalg.identity(n)
        dims = [0]
        for _ in range(m):
            P = linalg.matmul(F, P, fM)
            dims.append(linalg.kernel_dim(F, P))
            if dims[-1] == m * d:
                break
        conj = [(dims[j] - dims[j - 1]) // d for j in range(1, len(dims))]
        conj = [c for c in conj if c]
        partition = [sum(1 for c in conj if c >= i) for i in range(1, conj[0] + 1)] if conj else []
        out.append((f, partition))
    return out

def gl_centralizer_order(q: int, data: list, n: int = None) -> int:
    """|C_{GL_n(q)}(x)| from (degree, partition) pairs of the primary components.

    Each component with Q = q^d and partition lambda (m_i parts of size i, conjugate lambda') contributes
    Q^(sum lambda'_i^2 - sum m_i^2) * prod |GL_{m_i}(Q)|."""
    total = 1
    size = 0
    for d, lam in data:
        lam = [int(x) for x in lam]
        if d < 1 or not lam or any(x < 1 for x in lam) or lam != sorted(lam, reverse=True):
            raise IllegalParameters(f'inconsistent elementary divisor data ({d}, {lam})')
        Q = q ** d
        conj = [sum(1 for x in lam if x >= i) for i in range(1, lam[0] + 1)]
        mults = [lam.count(i) for i in set(lam)]
        total *= Q ** (sum(c * c for c in conj) - sum(m * m for m in mults))
        total *= prod(order_formula('GL', m, Q) for m in mults)
        size += d * sum(lam)
    if n is not None and size != n:
        raise IllegalParameters(f'elementary divisors have total degree {size}, expected {n}')
    return total

def centralizer_order_gl(F: FieldSpec, M) -> int:
    return gl_centralizer_order(F.q, [(f.degree, lam) for f, lam in elementary_divisors(F, M)],
                                np.asarray(M).shape[0])

def commutant_basis(F: FieldSpec, M) -> np.ndarray:
    """Basis of {X : XM = MX} as columns of row-major vec(X)."""
    n = M.shape[0]
    I = linalg.identity(n)
    return linalg.nullspace(F, F.sub(np.kron(I, M.T), np.kron(M, I)))

def centralizer_order_bruteforce(spec: ClassicalGroupSpec, g, limit: int = COMMUTANT_LIMIT) -> int:
    """|C_G(g)| by running over the commuting algebra and keeping the group members."""
    F, n = spec.field, spec.n
    M = spec.matrix(g)
    C = commutant_basis(F, M)
    d = C.shape[1]
    if F.q ** d > limit:
        raise CommutantTooLarge(d, F.q)
    form = spec.form
    weights = F.q ** np.arange(d, dtype=np.int64)
    count = 0
    for start in range(0, F.q ** d, CHUNK):
        idx = np.arange(start, min(start + CHUNK, F.q ** d), dtype=np.int64)
        coeffs = (idx[:, None] // weights[None, :]) % F.q
        X = linalg.matmul(F, coeffs, C.T).reshape(-1, n, n)
        dets = linalg.batch_det(F, X)
        keep = dets != 0
        if spec.family in ('SL', 'SU') or (spec.family in ('SO', 'Omega') and F.p != 2):
            keep &= dets == 1
        X = X[keep]
        if form.kind != 'none' and len(X):
            XT = np.swapaxes(X, 1, 2)
            sig = F.conj(X) if form.kind == 'hermitian' else X
            B = linalg.matmul(F, linalg.matmul(F, XT, form.gram), sig)
            ok = np.all(B == form.gram[None], axis=(1, 2))
            if form.kind == 'quadratic':
                for i in range(n):
                    ok &= form.quadratic(X[:, :, i]) == int(form.quad[i, i])
            X = X[ok]
        if spec.family == 'Omega':
            count += sum(1 for Y in X if membership(spec, Y)[0])
        else:
            count += len(X)
    return count
