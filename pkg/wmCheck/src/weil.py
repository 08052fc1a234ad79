import numpy as np
import sympy
from dataclasses import dataclass
from fractions import Fraction

from src.ff import FieldSpec, get_field, field_of_order
from src.cyclo import Cyclotomic
from src.chartab import CharacterTable
from src.classical import ClassicalGroupSpec
from src.groups import Element, EnumeratedGroup
from src import linalg

class WeilError(ValueError):
    """Raised for index ranges, fields or groups outside the Weil formulas."""

@dataclass(frozen=True)
class WeilParams:
    """Indices of the Weil character tau_{i,j} of GL_n(q) (eps = +1, 0 <= i, j <= q-2) or zeta_{i,j} of GU_n(q)
    (eps = -1, 0 <= i, j <= q). Values are returned in Q(zeta_conductor); the conductor must be divisible by
    q - eps."""
    eps: int
    n: int
    q: int
    i: int = 0
    j: int = 0
    conductor: int = 0

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise WeilError('eps must be +1 or -1')
        top = self.q - 2 if self.eps == 1 else self.q
        for name, v in (('i', self.i), ('j', self.j)):
            if not 0 <= v <= top:
                raise WeilError(f'index {name} = {v} outside 0..{top}')
        if self.n < 1:
            raise WeilError('dimension must be positive')
        if self.conductor == 0:
            object.__setattr__(self, 'conductor', self.q - self.eps)
        if self.conductor % (self.q - self.eps):
            raise WeilError(f'conductor {self.conductor} is not divisible by {self.q - self.eps}')

    @property
    def m(self) -> int:
        """Order of the scalar group mu_{q-eps} the eigenvalue sums run over."""
        return self.q - self.eps

def fixed_root(q: int, eps: int) -> tuple:
    """(field, generator) of mu_{q-eps}: delta = the least primitive element of F_q, or xi = g^(q-1) in F_{q^2}
    with g the least primitive element there."""
    F = field_of_order(q)
    if eps == 1:
        return F, F.primitive_element()
    K = get_field(F.p, 2 * F.k)
    return K, int(K.pow(K.primitive_element(), q - 1))

def _dlog(K: FieldSpec, q: int, eps: int, a: int) -> int:
    """Exponent l with root^l = a for the fixed root of mu_{q-eps}."""
    lg = int(K.log(a))
    if eps == 1:
        return lg
    assert lg % (q - 1) == 0, 'determinant outside mu_{q+1}'
    return lg // (q - 1)

def _matrix(x, K: FieldSpec, n: int) -> np.ndarray:
    M = x.data if isinstance(x, Element) else np.asarray(x, dtype=np.int64)
    if isinstance(x, Element) and x.field != K:
        raise WeilError(f'element over {x.field}, expected {K}')
    if M.shape != (n, n):
        raise WeilError(f'expected a {n}x{n} matrix')
    return M

def eigenspace_dims(params: WeilParams, x) -> list:
    """e(x, root^l) = dim Ker(x - root^l) for l = 0..q-eps-1."""
    K, root = fixed_root(params.q, params.eps)
    M = _matrix(x, K, params.n)
    I = linalg.identity(params.n)
    out = []
    for l in range(params.m):
        a = int(K.pow(root, l))
        out.append(params.n - linalg.rank(K, K.sub(M, K.mul(a, I))))
    return out

def _linear_character(params: WeilParams, M, K: FieldSpec) -> Cyclotomic:
    """lambda_j(x) = root~^(j * dlog det x)."""
    e = params.conductor
    l = _dlog(K, params.q, params.eps, linalg.det(K, M))
    return Cyclotomic.root(e, (e // params.m) * params.j * l)

def weil_gl_value(params: WeilParams, x) -> Cyclotomic:
    """tau_{i,j}(x) = lambda_j(x) ((1/(q-1)) sum_l delta~^(il) q^e(x, delta^l) - 2 [i = 0]).

    Parameters:
    - params (WeilParams): eps = +1.
    - x (Element/np.ndarray): element of GL_n(q).

    Return
    - value (Cyclotomic): exact value with the conductor of params."""
    if params.eps != 1:
        raise WeilError('weil_gl_value needs eps = +1')
    q, e = params.q, params.conductor
    K, _ = fixed_root(q, 1)
    M = _matrix(x, K, params.n)
    step = e // params.m
    vec = [0] * e
    for l, d in enumerate(eigenspace_dims(params, M)):
        vec[(step * params.i * l) % e] += q ** d
    value = Cyclotomic.from_exponents(e, vec) / (q - 1)
    if params.i == 0:
        value = value - 2
    return value * _linear_character(params, M, K)

def weil_gu_value(params: WeilParams, x) -> Cyclotomic:
    """zeta_{i,j}(x) = lambda_j(x) ((-1)^n/(q+1)) sum_l xi~^(il) (-q)^e(x, xi^l)."""
    if params.eps != -1:
        raise WeilError('weil_gu_value needs eps = -1')
    q, e, n = params.q, params.conductor, params.n
    K, _ = fixed_root(q, -1)
    M = _matrix(x, K, n)
    step = e // params.m
    vec = [0] * e
    for l, d in enumerate(eigenspace_dims(params, M)):
        vec[(step * params.i * l) % e] += (-q) ** d
    value = Cyclotomic.from_exponents(e, vec) / Fraction(q + 1, (-1) ** n)
    return value * _linear_character(params, M, K)

def weil_value(params: WeilParams, x) -> Cyclotomic:
    return weil_gl_value(params, x) if params.eps == 1 else weil_gu_value(params, x)

def weil_degree(eps: int, n: int, q: int, i: int) -> int:
    """Value at the identity: (q^n-1)/(q-1) - [i = 0] for GL, (q^n-(-1)^n)/(q+1) + (-1)^n [i = 0] for GU."""
    if eps == 1:
        return (q ** n - 1) // (q - 1) - (i == 0)
    return (q ** n - (-1) ** n) // (q + 1) + (-1) ** n * (i == 0)

def weil_rows(spec: ClassicalGroupSpec, G: EnumeratedGroup, T: CharacterTable) -> dict:
    """Row of T equal to each Weil character of GL_n(q) / GU_n(q), keyed by (i, j).

    T must carry its fusion into G. Raises WeilError when a Weil vector is not a row of T."""
    if spec.family not in ('GL', 'GU'):
        raise WeilError(f'Weil characters are implemented for GL and GU, not {spec.family}')
    if T.fusion is None:
        raise WeilError('the table carries no class fusion')
    eps = 1 if spec.family == 'GL' else -1
    reps = [G.representative(c) for c in T.fusion]
    rows = {tuple(row): r for r, row in enumerate(T.values)}
    out = {}
    top = spec.q - 2 if eps == 1 else spec.q
    for i in range(top + 1):
        for j in range(top + 1):
            params = WeilParams(eps, spec.n, spec.q, i, j, T.exponent)
            vec = tuple(weil_value(params, x) for x in reps)
            if vec not in rows:
                raise WeilError(f'Weil character ({i}, {j}) of {spec.label} is not a row of the table')
            out[(i, j)] = rows[vec]
    return out

# symplectic groups
@dataclass(frozen=True)
class SpWeilProfile:
    """Degrees of the four irreducible Weil characters of Sp_2n(q), q odd, and the magnitude bound
    |eta(g)|, |xi(g)| <= (B(g) + B(-g)) / 2 with B(g) = q^(dim Ker(g - 1) / 2)."""
    n: int
    q: int

    @property
    def degrees(self) -> list:
        a, b = (self.q ** self.n - 1) // 2, (self.q ** self.n + 1) // 2
        return [a, a, b, b]

    def magnitude(self, g) -> sympy.Expr:
        """B(g), exact (a square root when the fixed space has odd dimension)."""
        F = field_of_order(self.q)
        M = _matrix(g, F, 2 * self.n)
        d = linalg.kernel_dim(F, F.sub(M, linalg.identity(2 * self.n)))
        return sympy.sqrt(sympy.Integer(self.q) ** d)

    def bound(self, g) -> sympy.Expr:
        F = field_of_order(self.q)
        M = _matrix(g, F, 2 * self.n)
        return (self.magnitude(M) + self.magnitude(F.neg(M))) / 2

def sp_weil_profile(n: int, q: int) -> SpWeilProfile:
    if q % 2 == 0:
        raise WeilError('symplectic Weil characters need odd q')
    if n < 1:
        raise WeilError('n must be positive')
    return SpWeilProfile(n, q)
