import numpy as np
import sympy
from dataclasses import dataclass
from functools import lru_cache

from src.param import FULL_TABLE_LIMIT, LOG_TABLE_LIMIT, DLOG_LIMIT

class FieldError(ValueError):
    """Raised on illegal field parameters or arithmetic (division by zero, mixed fields)."""

def _trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f

def _prem(a, m, p):
    """Remainder of a modulo the monic polynomial m over F_p (coefficient lists, low degree first)."""
    a = [c % p for c in a]
    dm = len(m) - 1
    for d in range(len(a) - 1, dm - 1, -1):
        c = a[d]
        if c:
            for t in range(dm + 1):
                a[d - dm + t] = (a[d - dm + t] - c * m[t]) % p
    return _trim(a[:dm] if len(a) > dm else a)

def _pmulmod(a, b, m, p):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _prem(prod, m, p)

def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        b = [(c * inv) % p for c in b]
        a, b = b, _prem(a, b, p)
    return a

def _is_irreducible_prime(f, p):
    """Rabin-style test over F_p: gcd(x^(p^i) - x, f) = 1 for i <= deg f / 2."""
    n = len(f) - 1
    x = [0, 1]
    h = x
    for _ in range(n // 2):
        r = [1]
        base, e = h, p
        while e:
            if e & 1:
                r = _pmulmod(r, base, f, p)
            base = _pmulmod(base, base, f, p)
            e >>= 1
        h = r
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(f, _trim(diff), p)
        if len(g) > 1:
            return False
    return True

@lru_cache(maxsize=None)
def least_irreducible(p: int, k: int) -> tuple:
    """Least monic irreducible polynomial of degree k over F_p, ordered by c0 + c1*p + ... + c_{k-1}*p^(k-1).

    Return
    - modulus (tuple): coefficients c0..c_{k-1}, 1."""
    if k == 1:
        return (0, 1)
    for code in range(p ** k):
        low = [(code // p ** i) % p for i in range(k)]
        if low[0] == 0:
            continue
        f = low + [1]
        if _is_irreducible_prime(f, p):
            return tuple(f)
    raise FieldError(f'no irreducible polynomial of degree {k} over F_{p}')

class FieldSpec():
    """The field F_{p^k} = F_p[t]/(modulus). Elements are integer codes c0 + c1*p + ... (base-p digits are the
    coefficients of the reduced polynomial in t); every arithmetic method accepts ints or numpy integer arrays."""
    def __init__(self, p: int, k: int = 1):
        """Parameters:
        - p (int): prime characteristic.
        - k (int): extension degree, at least 1."""
        if not sympy.isprime(p):
            raise FieldError(f'{p} is not prime')
        if k < 1:
            raise FieldError(f'extension degree must be positive, got {k}')
        self.p, self.k = int(p), int(k)
        self.q = self.p ** self.k
        self.modulus = least_irreducible(self.p, self.k)
        self._weights = self.p ** np.arange(self.k, dtype=np.int64)
        self._mod = np.array(self.modulus, dtype=np.int64)
        self._add = self._mul = None
        self._exp = self._log = None
        self._prim = None
        if self.q <= FULL_TABLE_LIMIT:
            self.__build_tables()

    def __repr__(self):
        return f'F_{self.q}' if self.k == 1 else f'F_{self.p}^{self.k}'

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash(('FieldSpec', self.p, self.k))

    def __reduce__(self):
        return (get_field, (self.p, self.k))

    # digits
    def digits(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._weights) % self.p

    def from_digits(self, d) -> np.ndarray:
        return (np.asarray(d, dtype=np.int64) % self.p * self._weights).sum(axis=-1)

    def __conv_mul(self, a, b):
        da, db = self.digits(a), self.digits(b)
        da, db = np.broadcast_arrays(da, db)
        k, p = self.k, self.p
        prod = np.zeros(da.shape[:-1] + (2 * k - 1,), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                prod[..., i + j] += da[..., i] * db[..., j]
        prod %= p
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[..., d]
            for t in range(k):
                prod[..., d - k + t] -= c * self._mod[t]
            prod[..., d - k:d] %= p
        return self.from_digits(prod[..., :k])

    def __build_tables(self):
        codes = np.arange(self.q, dtype=np.int64)
        A, B = np.meshgrid(codes, codes, indexing='ij')
        self._add = self.from_digits(self.digits(A) + self.digits(B))
        self._mul = self.__conv_mul(A, B)

    # arithmetic
    def add(self, a, b):
        if self._add is not None:
            return self._add[a, b]
        if self.k == 1:
            return (np.asarray(a, dtype=np.int64) + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(np.asarray(a, dtype=np.int64), b)
        return self.from_digits(self.digits(a) + self.digits(b))

    def neg(self, a):
        if self.k == 1:
            return (-np.asarray(a, dtype=np.int64)) % self.p
        if self.p == 2:
            return np.asarray(a, dtype=np.int64)
        return self.from_digits(-self.digits(a))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self._mul is not None:
            return self._mul[a, b]
        if self.k == 1:
            return (np.asarray(a, dtype=np.int64) * b) % self.p
        if self.q <= LOG_TABLE_LIMIT:
            self.__ensure_log()
            a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
            res = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
            return np.where((a == 0) | (b == 0), 0, res)
        return self.__conv_mul(a, b)

    def pow(self, a, e: int):
        """a^e for an integer exponent e (negative allowed for nonzero a)."""
        e = int(e)
        a = np.asarray(a, dtype=np.int64)
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0:
            return np.ones_like(a)
        if self.q <= LOG_TABLE_LIMIT:
            self.__ensure_log()
            res = self._exp[(self._log[a] * (e % (self.q - 1))) % (self.q - 1)]
            return np.where(a == 0, 0, res)
        result = np.ones_like(a)
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise FieldError('division by zero')
        if self.q <= LOG_TABLE_LIMIT:
            self.__ensure_log()
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def frobenius(self, a, times: int = 1):
        return self.pow(a, self.p ** (times % self.k))

    def conj(self, a):
        """The involution x -> x^(sqrt q) of a field of even degree (unitary conjugation)."""
        if self.k % 2:
            raise FieldError(f'{self} has no involutory automorphism')
        return self.pow(a, self.p ** (self.k // 2))

    def norm_to_subfield(self, a, d: int):
        if self.k % d:
            raise FieldError(f'degree {d} does not divide {self.k}')
        return self.pow(a, (self.q - 1) // (self.p ** d - 1))

    def trace_to_subfield(self, a, d: int):
        if self.k % d:
            raise FieldError(f'degree {d} does not divide {self.k}')
        total = term = np.asarray(a, dtype=np.int64)
        for _ in range(self.k // d - 1):
            term = self.pow(term, self.p ** d)
            total = self.add(total, term)
        return total

    # multiplicative structure
    def __slow_pow(self, a, e):
        result, base = 1, int(a)
        while e:
            if e & 1:
                result = int(self.__conv_mul(result, base))
            base = int(self.__conv_mul(base, base))
            e >>= 1
        return result

    def primitive_element(self) -> int:
        """Least code generating the multiplicative group."""
        if self._prim is None:
            if self.q == 2:
                self._prim = 1
                return 1
            factors = sympy.primefactors(self.q - 1)
            for c in range(2, self.q):
                if all(self.__slow_pow(c, (self.q - 1) // r) != 1 for r in factors):
                    self._prim = c
                    break
        return self._prim

    def __ensure_log(self, limit: int = LOG_TABLE_LIMIT):
        if self._log is not None:
            return
        if self.q > limit:
            raise FieldError(f'{self} is too large for logarithm tables')
        g, n = self.primitive_element(), self.q - 1
        block = min(n, 4096)
        head = np.empty(block, dtype=np.int64)
        x = 1
        for i in range(block):
            head[i] = x
            x = int(self.__conv_mul(x, g))
        step = x
        exp = [head]
        cur = step
        while block * len(exp) < n:
            exp.append(self.__conv_mul(head, cur))
            cur = int(self.__conv_mul(cur, step))
        self._exp = np.concatenate(exp)[:n]
        self._log = np.zeros(self.q, dtype=np.int64)
        self._log[self._exp] = np.arange(n, dtype=np.int64)

    def log(self, a):
        """Logarithm to the base primitive_element(); tables are built on first use."""
        self.__ensure_log(DLOG_LIMIT)
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise FieldError('logarithm of zero')
        return self._log[a]

    def exp(self, e):
        self.__ensure_log(DLOG_LIMIT)
        return self._exp[np.asarray(e, dtype=np.int64) % (self.q - 1)]

    def is_square(self, a) -> bool:
        a = int(a)
        if a == 0 or self.p == 2:
            return True
        return int(self.pow(a, (self.q - 1) // 2)) == 1

    def nonsquare(self) -> int:
        """Least non-square code (odd characteristic)."""
        if self.p == 2:
            raise FieldError('every element is a square in characteristic 2')
        return next(c for c in range(2, self.q) if not self.is_square(c))

    def sqrt(self, a) -> int:
        a = int(a)
        if a == 0:
            return 0
        roots = np.nonzero(self.mul(np.arange(self.q), np.arange(self.q)) == a)[0]
        if len(roots) == 0:
            raise FieldError(f'{a} is not a square in {self}')
        return int(roots[0])

    def order(self, a) -> int:
        a = int(a)
        if a == 0:
            raise FieldError('zero has no multiplicative order')
        n = self.q - 1
        for r, m in sympy.factorint(n).items():
            for _ in range(m):
                if int(self.pow(a, n // r)) == 1:
                    n //= r
                else:
                    break
        return n

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def prime_basis(self) -> list:
        """Codes of 1, t, ..., t^(k-1): an F_p-basis."""
        return [self.p ** i for i in range(self.k)]

    def literal(self, a) -> str:
        coeffs = ','.join(str(int(c)) for c in self.digits(a))
        return f'{self.p}^{self.k}:[{coeffs}]'

@lru_cache(maxsize=None)
def get_field(p: int, k: int = 1) -> FieldSpec:
    """Shared FieldSpec instance for F_{p^k}."""
    return FieldSpec(p, k)

def field_of_order(q: int) -> FieldSpec:
    factors = sympy.factorint(q)
    if len(factors) != 1:
        raise FieldError(f'{q} is not a prime power')
    (p, k), = factors.items()
    return get_field(p, k)

@lru_cache(maxsize=None)
def embedding(sub: FieldSpec, big: FieldSpec) -> np.ndarray:
    """Image of every code of `sub` inside `big` (sub.k must divide big.k); the generator t of `sub` goes to
    the least root of sub.modulus in `big`."""
    if sub.p != big.p or big.k % sub.k:
        raise FieldError(f'{sub} does not embed in {big}')
    if sub.k == 1:
        return np.arange(sub.q, dtype=np.int64)
    xs = big.elements()
    val = np.zeros_like(xs)
    for c in reversed(sub.modulus):
        val = big.add(big.mul(val, xs), c)
    root = int(xs[val == 0][0])
    powers = [1]
    for _ in range(sub.k - 1):
        powers.append(int(big.mul(powers[-1], root)))
    digits = sub.digits(np.arange(sub.q))
    image = np.zeros(sub.q, dtype=np.int64)
    for i, r in enumerate(powers):
        image = big.add(image, big.mul(digits[:, i], r))
    return image

def restrict(codes, big: FieldSpec, sub: FieldSpec):
    """Inverse of embedding on its image; raises FieldError for codes outside the subfield."""
    image = embedding(sub, big)
    back = np.full(big.q, -1, dtype=np.int64)
    back[image] = np.arange(sub.q)
    res = back[np.asarray(codes, dtype=np.int64)]
    if np.any(res < 0):
        raise FieldError(f'element does not lie in {sub}')
    return res

@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    code: int

    @property
    def coeffs(self) -> tuple:
        return tuple(int(c) for c in self.spec.digits(self.code))

    def __check(self, other):
        if not isinstance(other, FieldElement) or other.spec != self.spec:
            raise FieldError('incompatible field specs')

    def __add__(self, other):
        self.__check(other)
        return FieldElement(self.spec, int(self.spec.add(self.code, other.code)))

    def __sub__(self, other):
        self.__check(other)
        return FieldElement(self.spec, int(self.spec.sub(self.code, other.code)))

    def __mul__(self, other):
        self.__check(other)
        return FieldElement(self.spec, int(self.spec.mul(self.code, other.code)))

    def __neg__(self):
        return FieldElement(self.spec, int(self.spec.neg(self.code)))

    def __pow__(self, e: int):
        return FieldElement(self.spec, int(self.spec.pow(self.code, e)))

    def inverse(self):
        return FieldElement(self.spec, int(self.spec.inv(self.code)))

    def __str__(self):
        return self.spec.literal(self.code)

def from_coeffs(spec: FieldSpec, coeffs) -> FieldElement:
    coeffs = list(coeffs) + [0] * (spec.k - len(coeffs))
    if len(coeffs) != spec.k:
        raise FieldError(f'{len(coeffs)} coefficients for {spec}')
    return FieldElement(spec, int(spec.from_digits(coeffs)))

def parse_literal(text: str) -> FieldElement:
    """Parse `p^k:[c0,c1,...]`."""
    try:
        head, body = text.strip().split(':', 1)
        p, k = (int(x) for x in head.split('^'))
        body = body.strip()
        assert body[0] == '[' and body[-1] == ']', 'coefficients must be bracketed'
        coeffs = [int(c) for c in body[1:-1].split(',') if c.strip()]
    except (ValueError, AssertionError, IndexError) as e:
        raise FieldError(f'malformed field literal {text!r}: {e}')
    return from_coeffs(get_field(p, k), [c % p for c in coeffs])

def field_arithmetic(a: FieldElement, b, op: str, d: int = 1) -> FieldElement:
    """Exact arithmetic on field elements.

    Parameters:
    - a (FieldElement): left operand.
    - b (FieldElement/int/None): right operand (exponent for pow, unused for unary ops).
    - op (str): one of add, mul, inv, pow, frobenius, norm_to_subfield, trace_to_subfield.
    - d (int): subfield degree for norm/trace."""
    spec = a.spec
    if op in ('add', 'mul'):
        if not isinstance(b, FieldElement) or b.spec != spec:
            raise FieldError('incompatible field specs')
        fn = spec.add if op == 'add' else spec.mul
        return FieldElement(spec, int(fn(a.code, b.code)))
    if op == 'inv':
        return a.inverse()
    if op == 'pow':
        return a ** int(b)
    if op == 'frobenius':
        return FieldElement(spec, int(spec.frobenius(a.code)))
    if op == 'norm_to_subfield':
        return FieldElement(spec, int(spec.norm_to_subfield(a.code, d)))
    if op == 'trace_to_subfield':
        return FieldElement(spec, int(spec.trace_to_subfield(a.code, d)))
    raise FieldError(f'unknown operation {op}')

def discrete_log(x: FieldElement, g: FieldElement) -> int:
    """Exponent e with g^e = x, 0 <= e < q - 1 (table based, q <= 2^24)."""
    spec = x.spec
    if g.spec != spec:
        raise FieldError('incompatible field specs')
    if spec.q > DLOG_LIMIT:
        raise FieldError(f'{spec} is too large for discrete logarithms')
    if x.code == 0:
        raise FieldError('logarithm of zero')
    if g.code == 0:
        raise FieldError('zero is not a generator')
    n = spec.q - 1
    if n == 1:
        return 0
    lg = int(spec.log(g.code))
    if np.gcd(lg, n) != 1:
        raise FieldError(f'{g} does not generate the multiplicative group')
    return int(spec.log(x.code)) * pow(lg, -1, n) % n
