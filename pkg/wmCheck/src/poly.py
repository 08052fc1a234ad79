import numpy as np
from collections import Counter

from src.ff import FieldSpec, FieldError

class FactorizationError(ValueError):
    """Raised when a polynomial cannot be factored (zero input, splitting retries exhausted)."""

class Poly():
    """Univariate polynomial over a FieldSpec; coefficients are field codes, lowest degree first, with no
    trailing zeros (the zero polynomial has an empty coefficient tuple)."""
    __slots__ = ('spec', 'coeffs')

    def __init__(self, spec: FieldSpec, coeffs):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.spec = spec
        self.coeffs = tuple(c)

    @classmethod
    def x(cls, spec):
        return cls(spec, (0, 1))

    @classmethod
    def const(cls, spec, c):
        return cls(spec, (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.spec == other.spec and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.spec, self.coeffs))

    def sort_key(self):
        return (self.degree, self.coeffs[::-1])

    def __repr__(self):
        if self.is_zero():
            return '0'
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            lit = str(c) if self.spec.k == 1 else self.spec.literal(c)
            mono = '' if i == 0 else ('x' if i == 1 else f'x^{i}')
            if mono and c == 1:
                terms.append(mono)
            else:
                terms.append(f'{lit}*{mono}' if mono else lit)
        return '+'.join(terms)

    def _arr(self):
        return np.array(self.coeffs, dtype=np.int64)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=np.int64)
        b = np.zeros(n, dtype=np.int64)
        a[:len(self.coeffs)] = self.coeffs
        b[:len(other.coeffs)] = other.coeffs
        return Poly(self.spec, self.spec.add(a, b))

    def __neg__(self):
        return Poly(self.spec, self.spec.neg(self._arr()))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if self.is_zero():
            return self
        return Poly(self.spec, self.spec.mul(self._arr(), int(c)))

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return Poly(self.spec, ())
        spec = self.spec
        b = other._arr()
        res = np.zeros(len(self.coeffs) + len(b) - 1, dtype=np.int64)
        for i, c in enumerate(self.coeffs):
            if c:
                res[i:i + len(b)] = spec.add(res[i:i + len(b)], spec.mul(c, b))
        return Poly(spec, res)

    def __divmod__(self, other):
        if other.is_zero():
            raise FieldError('polynomial division by zero')
        spec = self.spec
        r = self._arr().copy() if self.coeffs else np.zeros(0, dtype=np.int64)
        db = other.degree
        if self.degree < db:
            return Poly(spec, ()), self
        quo = np.zeros(self.degree - db + 1, dtype=np.int64)
        b = other._arr()
        inv_lead = int(spec.inv(other.lead))
        for d in range(self.degree, db - 1, -1):
            c = int(r[d])
            if c == 0:
                continue
            c = int(spec.mul(c, inv_lead))
            quo[d - db] = c
            r[d - db:d + 1] = spec.sub(r[d - db:d + 1], spec.mul(c, b))
        return Poly(spec, quo), Poly(spec, r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.spec.inv(self.lead))

    def __call__(self, x):
        """Evaluate at a field code (or array of codes) by Horner's rule."""
        val = np.zeros_like(np.asarray(x, dtype=np.int64))
        for c in reversed(self.coeffs):
            val = self.spec.add(self.spec.mul(val, x), c)
        return val

    def derivative(self):
        spec = self.spec
        return Poly(spec, [spec.mul(c, i % spec.p) for i, c in enumerate(self.coeffs)][1:])

    def powmod(self, e: int, m):
        result = Poly.const(self.spec, 1) % m
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            base = (base * base) % m
            e >>= 1
        return result

    def pth_root(self):
        """g with g^p = self, assuming only exponents divisible by p occur."""
        spec = self.spec
        p = spec.p
        assert all(c == 0 for i, c in enumerate(self.coeffs) if i % p), 'not a p-th power'
        roots = spec.pow(np.array(self.coeffs[::p], dtype=np.int64), spec.q // p)
        return Poly(spec, roots)

def gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()

def from_roots(spec: FieldSpec, roots) -> Poly:
    f = Poly.const(spec, 1)
    for r in roots:
        f = f * Poly(spec, (int(spec.neg(r)), 1))
    return f

def _squarefree(f: Poly) -> list:
    spec = f.spec
    out = []
    g = f.derivative()
    if g.is_zero():
        return [(h, m * spec.p) for h, m in _squarefree(f.pth_root())]
    c = gcd(f, g)
    w = f // c
    i = 1
    while not w.is_one():
        y = gcd(w, c)
        z = w // y
        if z.degree > 0:
            out.append((z.monic(), i))
        i += 1
        w, c = y, c // y
    if c.degree > 0:
        out.extend((h, m * spec.p) for h, m in _squarefree(c.monic().pth_root()))
    return out

def _distinct_degree(f: Poly) -> list:
    spec = f.spec
    out = []
    x = Poly.x(spec)
    h = x % f
    i = 1
    while f.degree >= 2 * i:
        h = h.powmod(spec.q, f)
        g = gcd(f, h - x)
        if not g.is_one():
            out.append((g, i))
            f = f // g
            h = h % f
        i += 1
    if f.degree > 0:
        out.append((f.monic(), f.degree))
    return out

def _equal_degree(f: Poly, d: int, rng, max_retries: int) -> list:
    spec = f.spec
    n = f.degree
    if n == d:
        return [f]
    factors = [f]
    failures = 0
    while len(factors) < n // d:
        a = Poly(spec, rng.integers(0, spec.q, size=n))
        if a.degree < 1:
            continue
        if spec.p == 2:
            b = a % f
            term = b
            for _ in range(spec.k * d - 1):
                term = (term * term) % f
                b = b + term
        else:
            b = a.powmod((spec.q ** d - 1) // 2, f) - Poly.const(spec, 1)
        split = []
        progressed = False
        for u in factors:
            if u.degree > d:
                g = gcd(u, b)
                if 0 < g.degree < u.degree:
                    split.extend([g, (u // g).monic()])
                    progressed = True
                    continue
            split.append(u)
        factors = split
        if progressed:
            failures = 0
        else:
            failures += 1
            if failures > max_retries:
                raise FactorizationError(f'equal-degree splitting failed after {max_retries} retries')
    return factors

def factor_poly(f: Poly, seed: int = 0, max_retries: int = 64) -> list:
    """Factor f into monic irreducibles.

    Parameters:
    - f (Poly): nonzero polynomial.
    - seed (int): seed of the equal-degree splitting.
    - max_retries (int): consecutive unproductive splitting attempts tolerated.

    Return
    - factors (list): sorted (irreducible Poly, multiplicity) pairs; their product is f up to its leading coefficient."""
    if f.is_zero():
        raise FactorizationError('cannot factor the zero polynomial')
    if f.degree == 0:
        return []
    rng = np.random.default_rng(seed)
    counts = Counter()
    for g, m in _squarefree(f.monic()):
        for h, d in _distinct_degree(g):
            for irr in _equal_degree(h, d, rng, max_retries):
                counts[irr] += m
    return sorted(counts.items(), key=lambda t: t[0].sort_key())

def is_irreducible(f: Poly) -> bool:
    if f.degree < 1:
        return False
    parts = _squarefree(f.monic())
    if len(parts) != 1 or parts[0][1] != 1:
        return False
    dd = _distinct_degree(parts[0][0])
    return len(dd) == 1 and dd[0][1] == f.degree

def roots(f: Poly, seed: int = 0) -> list:
    """Roots of f in its coefficient field, sorted, without multiplicity."""
    return sorted(int(f.spec.neg(g.coeffs[0])) for g, _ in factor_poly(f, seed) if g.degree == 1)

def companion_matrix(f: Poly) -> np.ndarray:
    """Companion matrix of a monic polynomial: ones on the subdiagonal, last column -f_0..-f_{n-1}."""
    f = f.monic()
    n = f.degree
    spec = f.spec
    C = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n):
        C[i, i - 1] = 1
    C[:, n - 1] = spec.neg(np.array(f.coeffs[:n], dtype=np.int64))
    return C
