import re
import numpy as np
import sympy
import mpmath
from math import gcd
from fractions import Fraction
from functools import lru_cache

@lru_cache(maxsize=None)
def cyclotomic_coeffs(e: int) -> tuple:
    """Coefficients of the e-th cyclotomic polynomial, constant term first."""
    x = sympy.Symbol('x')
    return tuple(int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(e, x), x).all_coeffs()))

@lru_cache(maxsize=None)
def reduction_matrix(e: int) -> np.ndarray:
    """Row i holds x^i mod Phi_e in the power basis 1, x, ..., x^(phi(e)-1), for 0 <= i < e."""
    phi_c = cyclotomic_coeffs(e)
    d = len(phi_c) - 1
    R = np.zeros((e, d), dtype=np.int64)
    for i in range(min(d, e)):
        R[i, i] = 1
    for i in range(d, e):
        prev = R[i - 1]
        row = np.zeros(d, dtype=np.int64)
        row[1:] = prev[:-1]
        top = prev[-1]
        row -= top * np.array(phi_c[:d], dtype=np.int64)
        R[i] = row
    return R

def reduce_exponent_vectors(V, e: int) -> np.ndarray:
    """Power-basis coefficients of sum_j V[..., j] zeta_e^j for integer arrays V with trailing length e."""
    return np.asarray(V, dtype=np.int64) @ reduction_matrix(e)

_TERM = re.compile(r'([+-]?)(\d+(?:/\d+)?)?(?:\*?E\^(\d+))?')

class Cyclotomic():
    """Element of Q(zeta_e) in the power basis modulo Phi_e: sum_j c_j zeta_e^j, j < phi(e), stored as integer
    numerators over one positive common denominator (canonical, so equality is coefficient-wise)."""
    __slots__ = ('e', 'num', 'den')

    def __init__(self, e: int, coeffs, den: int = 1):
        self.e = int(e)
        d = len(cyclotomic_coeffs(self.e)) - 1
        coeffs = list(coeffs)
        if any(isinstance(c, Fraction) for c in coeffs):
            common = 1
            for c in coeffs:
                common = common * Fraction(c).denominator // gcd(common, Fraction(c).denominator)
            coeffs = [int(Fraction(c) * common) for c in coeffs]
            den = den * common
        coeffs = [int(c) for c in coeffs] + [0] * (d - len(coeffs))
        assert len(coeffs) == d, f'{len(coeffs)} coefficients for conductor {e}'
        den = int(den)
        assert den != 0, 'zero denominator'
        if den < 0:
            coeffs, den = [-c for c in coeffs], -den
        g = den
        for c in coeffs:
            g = gcd(g, c)
        if g > 1:
            coeffs, den = [c // g for c in coeffs], den // g
        self.num = tuple(coeffs)
        self.den = den

    @classmethod
    def from_int(cls, e: int, n):
        n = Fraction(n)
        return cls(e, [n.numerator], n.denominator)

    @classmethod
    def root(cls, e: int, j: int = 1):
        """zeta_e^j"""
        v = [0] * e
        v[j % e] = 1
        return cls.from_exponents(e, v)

    @classmethod
    def from_exponents(cls, e: int, vec, den: int = 1):
        """sum_j vec[j] zeta_e^j for an integer vector of length e (indices read mod e)."""
        full = [0] * e
        for j, c in enumerate(vec):
            full[j % e] += int(c)
        R = reduction_matrix(e)
        out = [0] * R.shape[1]
        for j, c in enumerate(full):
            if c:
                row = R[j]
                for i in np.nonzero(row)[0]:
                    out[i] += c * int(row[i])
        return cls(e, out, den)

    def __coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.e != self.e:
                raise ValueError(f'conductors {self.e} and {other.e} differ')
            return other
        return Cyclotomic.from_int(self.e, other)

    def __add__(self, other):
        other = self.__coerce(other)
        den = self.den * other.den
        return Cyclotomic(self.e, [a * other.den + b * self.den for a, b in zip(self.num, other.num)], den)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.e, [-a for a in self.num], self.den)

    def __sub__(self, other):
        return self + (-self.__coerce(other))

    def __rsub__(self, other):
        return self.__coerce(other) - self

    def __mul__(self, other):
        other = self.__coerce(other)
        prod = [0] * (2 * len(self.num))
        for i, a in enumerate(self.num):
            if a:
                for j, b in enumerate(other.num):
                    if b:
                        prod[i + j] += a * b
        return Cyclotomic.from_exponents(self.e, prod, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, n):
        n = Fraction(n)
        return Cyclotomic(self.e, [a * n.denominator for a in self.num], self.den * n.numerator)

    def galois(self, r: int):
        """Image under zeta -> zeta^r (an automorphism when gcd(r, e) = 1)."""
        vec = [0] * self.e
        for j, c in enumerate(self.num):
            vec[(j * r) % self.e] += c
        return Cyclotomic.from_exponents(self.e, vec, self.den)

    def conj(self):
        return self.galois(-1)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational(self) -> Fraction:
        assert self.is_rational(), f'{self} is not rational'
        return Fraction(self.num[0] if self.num else 0, self.den)

    def __eq__(self, other):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.from_int(self.e, other)
        return self.e == other.e and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.e, self.num, self.den))

    def to_complex(self, dps: int = 30) -> mpmath.mpc:
        with mpmath.workdps(dps):
            total = mpmath.mpc(0)
            for j, c in enumerate(self.num):
                if c:
                    total += c * mpmath.expjpi(mpmath.mpf(2 * j) / self.e)
            return total / self.den

    def abs_interval(self, prec: int = 128) -> tuple:
        """(lower, upper) bounds of the complex absolute value; the radius covers the rounding of every term
        evaluated at `prec` bits."""
        with mpmath.workprec(prec):
            value = abs(self.to_complex(dps=int(prec * 0.30103) + 1))
            scale = sum(abs(c) for c in self.num) / mpmath.mpf(self.den) + 1
            radius = scale * len(self.num) * mpmath.ldexp(1, 8 - prec)
            return max(value - radius, mpmath.mpf(0)), value + radius

    def literal(self) -> str:
        """`c0+c1*E^1+...` over nonzero terms, rationals as n/d, no whitespace."""
        terms = []
        for j, c in enumerate(self.num):
            if not c:
                continue
            coef = Fraction(c, self.den)
            text = str(abs(coef))
            sign = '-' if coef < 0 else '+'
            body = text if j == 0 else f'{text}*E^{j}'
            terms.append((sign, body))
        if not terms:
            return '0'
        out = ('-' if terms[0][0] == '-' else '') + terms[0][1]
        return out + ''.join(s + b for s, b in terms[1:])

    def __repr__(self):
        return self.literal()

def parse_cyclotomic(text: str, e: int) -> Cyclotomic:
    """Inverse of Cyclotomic.literal; exponents may be any nonnegative integer (read mod e)."""
    if not text or any(ch.isspace() for ch in text):
        raise ValueError(f'malformed cyclotomic literal {text!r}')
    pos = 0
    vec = [Fraction(0)] * e
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f'malformed cyclotomic literal {text!r} at offset {pos}')
        if pos > 0 and not m.group(1):
            raise ValueError(f'missing sign in cyclotomic literal {text!r} at offset {pos}')
        coef = Fraction(m.group(2)) if m.group(2) is not None else Fraction(1)
        if m.group(1) == '-':
            coef = -coef
        j = int(m.group(3)) if m.group(3) is not None else 0
        vec[j % e] += coef
        pos = m.end()
    common = 1
    for c in vec:
        common = common * c.denominator // gcd(common, c.denominator)
    return Cyclotomic.from_exponents(e, [int(c * common) for c in vec], common)
