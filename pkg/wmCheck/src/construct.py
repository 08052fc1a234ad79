import numpy as np
from collections import Counter
from dataclasses import dataclass, field as dc_field

from src.ff import FieldSpec, FieldElement, FieldError, field_of_order, get_field, embedding
from src.poly import Poly, factor_poly, companion_matrix
from src.forms import FormSpec, isometric_basis
from src.classical import ClassicalGroupSpec, IllegalParameters, is_member, spinor_norm, \
    is_regular_semisimple, eigen_profile, mu_subgroup
from src import linalg

class ConstructionError(ValueError):
    """Raised for parameters outside the constructions (even q, a non-2-element determinant) and for
    certificates that fail their recheck."""

def two_part(n: int) -> int:
    return n & -n

def _exponents(n: int) -> list:
    """Exponents of the binary expansion of n, decreasing."""
    return [i for i in reversed(range(n.bit_length())) if n >> i & 1]

def _odd_field(q: int) -> FieldSpec:
    try:
        F = field_of_order(q)
    except FieldError as e:
        raise ConstructionError(str(e))
    if F.p == 2:
        raise ConstructionError(f'2-element constructions need odd q, got q = {q}')
    return F

def two_power_order(F: FieldSpec, M) -> int:
    """Order of M when it is a 2-element, by repeated squaring; raises ConstructionError otherwise."""
    M = np.asarray(M, dtype=np.int64)
    I = linalg.identity(M.shape[0])
    cur, order = M, 1
    for _ in range(64):
        if np.array_equal(cur, I):
            return order
        cur = linalg.matmul(F, cur, cur)
        order *= 2
    raise ConstructionError('element is not a 2-element')

# base blocks
def _root_poly(F: FieldSpec, order: int, degree: int) -> Poly:
    """Least monic irreducible factor of x^(order/2) + 1 over F; its roots have order exactly `order`."""
    N = order // 2
    factors = [f for f, _ in factor_poly(Poly(F, [1] + [0] * (N - 1) + [1]))]
    assert all(f.degree == degree for f in factors), f'elements of order {order} do not have degree {degree} over {F}'
    return factors[0]

def gamma_order(q: int, m: int) -> int:
    """(q^(2^m) - 1)_2, the order of the eigenvalues of the base block s_m."""
    return two_part(q ** (2 ** m) - 1)

def _hyperbolic(F: FieldSpec, h: int, sign: int = 1) -> np.ndarray:
    G = np.zeros((2 * h, 2 * h), dtype=np.int64)
    G[np.arange(h), np.arange(h, 2 * h)] = 1
    G[np.arange(h, 2 * h), np.arange(h)] = 1 if sign == 1 else int(F.neg(1))
    return G

def base_block(kind: str, m: int, q: int) -> tuple:
    """The block s_m with its Gram matrix.

    Parameters:
    - kind (str): 'GL' (s_m in GL_{2^m}(q), no form), 'GU' (GU_{2^m}(q) through GL_{2^(m-1)}(q^2)),
      'Sp' or 'SO' (GL_{2^m}(q) placed as diag(A, A^-T) on a pair of totally isotropic subspaces).
    - m (int): block exponent; m >= 1 except for 'Sp'/'SO', which also accept m = 0.
    - q (int): odd field order.

    Return
    - (M, G): block matrix and Gram matrix (G is None for 'GL')."""
    F = _odd_field(q)
    order = gamma_order(q, m)
    if kind == 'GL':
        return companion_matrix(_root_poly(F, order, 2 ** m)), None
    if kind == 'GU':
        if m < 1:
            raise ConstructionError('unitary base blocks need m >= 1')
        K = get_field(F.p, 2 * F.k)
        A = companion_matrix(_root_poly(K, order, 2 ** (m - 1)))
        B = linalg.inverse(K, K.conj(A)).T
        return linalg.block_diag(A, B), _hyperbolic(K, 2 ** (m - 1))
    if kind in ('Sp', 'SO'):
        A = companion_matrix(_root_poly(F, order, 2 ** m))
        B = linalg.inverse(F, A).T
        return linalg.block_diag(A, B), _hyperbolic(F, 2 ** m, 1 if kind == 'SO' else -1)
    raise IllegalParameters(f'no base block for {kind}')

def _quarter_turn() -> np.ndarray:
    """[[0, -1], [1, 0]] before reduction: order 4, determinant 1, eigenvalues the square roots of -1."""
    return np.array([[0, -1], [1, 0]], dtype=np.int64)

def plane_gram(F: FieldSpec, sign: int) -> np.ndarray:
    """Gram of the orthogonal plane of Witt type `sign`: hyperbolic, or Q = x^2 - nu y^2."""
    if sign == 1:
        return _hyperbolic(F, 1)
    return np.array([[2, 0], [0, int(F.mul(2, F.neg(F.nonsquare())))]], dtype=np.int64) % F.q

def plane_generator(F: FieldSpec, sign: int) -> np.ndarray:
    """Element of SO^sign_2(q) generating the Sylow 2-subgroup (order (q - sign)_2, spinor norm -1)."""
    q = F.q
    target = two_part(q - sign)
    if sign == 1:
        lam = next(c for c in range(1, q) if F.order(c) == target)
        return np.array([[lam, 0], [0, int(F.inv(lam))]], dtype=np.int64)
    nu = F.nonsquare()
    for a in range(q):
        for b in range(1, q):
            if int(F.sub(F.mul(a, a), F.mul(nu, F.mul(b, b)))) != 1:
                continue
            M = np.array([[a, int(F.mul(nu, b))], [b, a]], dtype=np.int64)
            if linalg.order(F, M, limit=q + 1) == target:
                return M
    raise ConstructionError(f'no generator of the 2-part of SO^-_2({q})')

# certificates
@dataclass
class Certificate:
    """Claims about a constructed element, each rechecked by verify_certificate."""
    group: str
    order: int
    determinant: int
    factors: list
    spinor_norm: int = None
    regular: bool = True
    blocks: list = dc_field(default_factory=list)
    basis: np.ndarray = None

    def summary(self) -> dict:
        return {'group': self.group, 'order': self.order, 'determinant': self.determinant,
                'spinor_norm': self.spinor_norm, 'regular': self.regular,
                'eigenvalues': [(repr(f), m) for f, m in self.factors],
                'blocks': [name for name, _, _ in self.blocks]}

def _claimed_factors(F: FieldSpec, blocks: list) -> list:
    counts = Counter()
    for _, M, _ in blocks:
        for f, m in factor_poly(linalg.charpoly(F, M)):
            counts[f] += m
    return sorted(counts.items(), key=lambda t: t[0].sort_key())

def _assemble(spec: ClassicalGroupSpec, blocks: list, seed: int = 0) -> tuple:
    """Block-diagonal element moved onto the fixed form of `spec`: s = S M S^-1 with S^T G_std sigma(S) equal to
    the block Gram."""
    F = spec.field
    M = linalg.block_diag(*[b for _, b, _ in blocks])
    if spec.form.kind == 'none':
        return M, linalg.identity(spec.n)
    G = linalg.block_diag(*[g for _, _, g in blocks])
    target = FormSpec(spec.form.kind, F, G)
    S = isometric_basis(spec.form, target, np.random.default_rng(seed))
    return linalg.matmul(F, linalg.matmul(F, S, M), linalg.inverse(F, S)), S

def _certify(spec: ClassicalGroupSpec, blocks: list, determinant: int, theta: int = None, check: bool = True):
    F = spec.field
    for name, M, G in blocks:
        if G is not None:
            assert FormSpec(spec.form.kind, F, G).preserves(M), f'block {name} does not preserve its form'
    s, S = _assemble(spec, blocks)
    cert = Certificate(spec.label, max(two_power_order(F, M) for _, M, _ in blocks), int(determinant),
                       _claimed_factors(F, blocks), theta,
                       blocks=[(name, M.shape[0], linalg.det(F, M)) for name, M, _ in blocks], basis=S)
    g = spec.element(s)
    if check:
        failed = [k for k, ok in verify_certificate(spec, g, cert).items() if not ok]
        if failed:
            raise ConstructionError(f'certificate of {spec.label} failed: {", ".join(failed)}')
    return g, cert

def _eigenvalue_clause(spec: ClassicalGroupSpec, g) -> bool:
    F = spec.field
    if spec.family in ('GL', 'GU'):
        prof = eigen_profile(spec, g)
        present = [a for a, d in prof.e.items() if d > 0]
        return len(present) <= 2 and all(prof.multiplicity(a) == 1 for a in present)
    one, minus_one = Poly(F, (int(F.neg(1)), 1)), Poly(F, (1, 1))
    factors = factor_poly(linalg.charpoly(F, spec.matrix(g)))
    if spec.family == 'Sp':
        return all(f not in (one, minus_one) for f, _ in factors)
    return all(m == 1 or (m == 2 and f in (one, minus_one)) for f, m in factors)

def verify_certificate(spec: ClassicalGroupSpec, g, cert: Certificate) -> dict:
    """Recheck every claim of a certificate; returns {check: passed}."""
    F = spec.field
    M = spec.matrix(g)
    checks = {'member': is_member(spec, M)}
    try:
        checks['order'] = two_power_order(F, M) == cert.order
    except ConstructionError:
        checks['order'] = False
    d = linalg.det(F, M)
    checks['determinant'] = d == cert.determinant
    block_det = 1
    for _, _, bd in cert.blocks:
        block_det = int(F.mul(block_det, bd))
    checks['block determinants'] = block_det == d
    if cert.spinor_norm is not None:
        checks['spinor norm'] = spinor_norm(spec, M) == cert.spinor_norm
    checks['eigenvalues'] = factor_poly(linalg.charpoly(F, M)) == cert.factors
    checks['regular'] = is_regular_semisimple(spec, M) == cert.regular
    checks['eigenvalue multiplicities'] = _eigenvalue_clause(spec, M)
    return checks

# GL^eps_n(q)
def _as_code(delta, F: FieldSpec, base: FieldSpec) -> int:
    if isinstance(delta, FieldElement):
        if delta.spec == F:
            return delta.code
        if delta.spec == base:
            return int(embedding(base, F)[delta.code])
        raise ConstructionError(f'{delta} lies in neither {base} nor {F}')
    return int(delta) % F.q

def _gl_pair(F: FieldSpec, alpha: int, unitary: bool) -> tuple:
    """s_2(alpha): diag(1, alpha) for alpha != 1, otherwise the order-4 element with eigenvalues +-sqrt(-1)."""
    M = np.array([[1, 0], [0, alpha]], dtype=np.int64) if alpha != 1 else _quarter_turn() % F.q
    return M, (linalg.identity(2) if unitary else None)

def construct_glu_2element(n: int, q: int, eps: int = 1, delta=1, check: bool = True) -> tuple:
    """Regular 2-element s_n(delta) of GL_n(q) (eps = +1) or GU_n(q) (eps = -1) with determinant delta.

    Parameters:
    - n (int): dimension.
    - q (int): odd field order.
    - eps (int): +1 or -1.
    - delta (FieldElement/int): a 2-element of mu_{q-eps}; unitary determinants live in F_{q^2}.
    - check (bool): recheck the certificate before returning.

    Return
    - (Element, Certificate)"""
    if eps not in (1, -1):
        raise IllegalParameters('eps must be +1 or -1')
    if n < 1:
        raise IllegalParameters('dimension must be positive')
    base = _odd_field(q)
    unitary = eps == -1
    spec = ClassicalGroupSpec('GU' if unitary else 'GL', n, q)
    F = spec.field
    d = _as_code(delta, F, base)
    if d == 0 or int(F.pow(d, q - eps)) != 1:
        raise ConstructionError(f'{F.literal(d)} is not in mu_{q - eps}')
    if two_part(F.order(d)) != F.order(d):
        raise ConstructionError(f'{F.literal(d)} is not a 2-element')
    kind = 'GU' if unitary else 'GL'
    blocks = []
    if n % 2:
        head = _exponents(n - 1)
    else:
        ms = _exponents(n)
        head = ms[:-1] + list(range(ms[-1] - 1, 0, -1))
    for m in head:
        M, G = base_block(kind, m, q)
        blocks.append((f's_{m}', M, G))
    alpha = d
    for _, M, _ in blocks:
        alpha = int(F.div(alpha, linalg.det(F, M)))
    if n % 2:
        blocks.append(('alpha', np.array([[alpha]], dtype=np.int64), linalg.identity(1) if unitary else None))
    else:
        M, G = _gl_pair(F, alpha, unitary)
        blocks.append((f's_2({F.literal(alpha)})', M, G))
    return _certify(spec, blocks, d, check=check)

# Sp_2n(q)
def construct_sp_2element(n: int, q: int, check: bool = True) -> tuple:
    """Regular 2-element of Sp_{2n}(q) with neither 1 nor -1 as an eigenvalue.

    Blocks s_m follow the binary expansion of n; a trailing 2^0 becomes the order-4 element of Sp_2(q) = SL_2(q)."""
    if n < 1:
        raise IllegalParameters('n must be positive')
    F = _odd_field(q)
    spec = ClassicalGroupSpec('Sp', 2 * n, q)
    blocks = []
    for m in _exponents(n):
        if m == 0:
            blocks.append(('s_2(1)', _quarter_turn() % F.q, _hyperbolic(F, 1, -1)))
        else:
            M, G = base_block('Sp', m, q)
            blocks.append((f's_{m}', M, G))
    return _certify(spec, blocks, 1, check=check)

# SO^eps_n(q)
def so2_element(F: FieldSpec, sign: int, theta: int) -> tuple:
    """s^sign_2(theta): the Sylow 2 generator for theta = -1, the identity for theta = 1."""
    M = plane_generator(F, sign) if theta == -1 else linalg.identity(2)
    return M, plane_gram(F, sign)

def so4_element(F: FieldSpec, sign: int, theta: int) -> tuple:
    """s^sign_4(theta) in SO^alpha_2(q) x SO^{sign*alpha}_2(q), alpha = +-1 with q = alpha mod 4."""
    alpha = 1 if F.q % 4 == 1 else -1
    minus = F.neg(linalg.identity(2))
    s0 = plane_generator(F, alpha)
    if sign == 1:
        first = minus if theta == 1 else s0
        second = linalg.identity(2) if theta == 1 else minus
    else:
        first = s0
        second = minus if theta == 1 else linalg.identity(2)
    return (linalg.block_diag(first, second),
            linalg.block_diag(plane_gram(F, alpha), plane_gram(F, sign * alpha)))

def _so_head(half: int) -> list:
    """Binary exponents of `half` with the last one m_t >= 1 rewritten as (m_t - 1, ..., 1, 1); the final 1 is left
    to the caller."""
    ms = _exponents(half)
    return ms[:-1] + list(range(ms[-1] - 1, 0, -1))

def construct_so_2element(n: int, q: int, eps: int = 1, delta: int = 1, check: bool = True) -> tuple:
    """Regular 2-element of SO^eps_n(q) with spinor norm delta.

    Parameters:
    - n (int): dimension, at least 2.
    - q (int): odd field order.
    - eps (int): Witt type for even n (ignored for odd n).
    - delta (int): +1 or -1, the spinor norm.
    - check (bool): recheck the certificate before returning.

    Return
    - (Element, Certificate)"""
    F = _odd_field(q)
    if delta not in (1, -1):
        raise IllegalParameters('delta must be +1 or -1')
    if n < 2:
        raise IllegalParameters('orthogonal constructions need n >= 2')
    spec = ClassicalGroupSpec('SO', n, q, eps)
    eps = spec.eps
    alpha = 1 if q % 4 == 1 else -1
    blocks = []

    def add_head(ms):
        for m in ms:
            M, G = base_block('SO', m, q)
            blocks.append((f's_{m}', M, G))

    if n % 2 == 0 and n % 4 == 2:
        ms = _exponents((n - 2) // 2)
        add_head(ms)
        theta = (-1) ** len(ms) * delta
        M, G = so2_element(F, eps, theta)
        blocks.append((f's^{eps:+d}_2({theta:+d})', M, G))
    elif n % 2 == 0:
        head = _so_head(n // 2)
        add_head(head)
        theta = (-1) ** len(head) * delta
        M, G = so4_element(F, eps, theta)
        blocks.append((f's^{eps:+d}_4({theta:+d})', M, G))
    else:
        ms = _exponents((n - 1) // 2)
        if ms[-1] == 0:
            add_head(ms[:-1])
            t = len(ms)
            if delta == (-1) ** t:
                blocks.append(('s_0', plane_generator(F, alpha), plane_gram(F, alpha)))
            else:
                blocks.append(('-I_2', F.neg(linalg.identity(2)), plane_gram(F, alpha)))
        else:
            head = _so_head((n - 1) // 2)
            add_head(head)
            beta = (-1) ** (len(head) + 1) * delta
            M, G = so4_element(F, beta, -beta)
            blocks.append((f's^{beta:+d}_4({-beta:+d})', M, G))
        # the fixed line gets the Gram entry matching the discriminant of the standard form
        d_blocks = 1
        for _, _, G in blocks:
            d_blocks = int(F.mul(d_blocks, linalg.det(F, G)))
        c = int(F.div(linalg.det(F, spec.form.gram), d_blocks))
        blocks.append(('1', linalg.identity(1), np.array([[c]], dtype=np.int64)))
    return _certify(spec, blocks, 1, theta=delta, check=check)

def construct(family: str, n: int, q: int, eps: int = 1, delta=1, check: bool = True) -> tuple:
    """Dispatch on 'GL', 'GU', 'Sp' (n is the half dimension) or 'SO'."""
    if family in ('GL', 'GU'):
        return construct_glu_2element(n, q, 1 if family == 'GL' else -1, delta, check)
    if family == 'Sp':
        return construct_sp_2element(n, q, check)
    if family == 'SO':
        return construct_so_2element(n, q, eps, int(delta), check)
    raise IllegalParameters(f'no 2-element construction for {family}')

def legal_deltas(family: str, q: int) -> list:
    """Determinants (GL, GU: the 2-elements of mu_{q-eps} as field codes) or spinor norms (SO) the
    constructions accept; [None] for Sp."""
    if family == 'Sp':
        return [None]
    if family == 'SO':
        return [1, -1]
    eps = 1 if family == 'GL' else -1
    F = ClassicalGroupSpec(family, 1, q).field
    return mu_subgroup(F, two_part(q - eps))

def construction_suite(families, dims, qs) -> list:
    """Construct and recheck every legal (family, n, q, eps, delta); one row per element.

    dims are dimensions; Sp rows use dims // 2 as the half dimension and skip odd dimensions."""
    rows = []
    for family in families:
        for q in qs:
            for n in dims:
                if family == 'Sp' and n % 2:
                    continue
                signs = (1, -1) if family == 'SO' and n % 2 == 0 else (1,)
                for eps in signs:
                    if family == 'SO' and n < 2:
                        continue
                    for delta in legal_deltas(family, q):
                        size = n // 2 if family == 'Sp' else n
                        row = {'family': family, 'n': n, 'q': q, 'eps': eps, 'delta': delta}
                        try:
                            g, cert = construct(family, size, q, eps, 1 if delta is None else delta, check=False)
                            spec = ClassicalGroupSpec('SO' if family == 'SO' else family, n, q, eps)
                            checks = verify_certificate(spec, g, cert)
                            row['failed'] = [name for name, ok in checks.items() if not ok]
                            row['order'] = cert.order
                        except (ConstructionError, IllegalParameters) as e:
                            row['failed'] = [f'{type(e).__name__}: {e}']
                            row['order'] = None
                        rows.append(row)
    return rows
