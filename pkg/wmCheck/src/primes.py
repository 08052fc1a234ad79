import sympy
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, factorial, prod

from src.classical import order_formula
from src import param

SEARCH_LIMIT = 1 << 20          # primes = 1 mod n below this are tried before factoring the cyclotomic value

class NotCovered(ValueError):
    """Raised for parameters no special-prime row (or substitute) covers, and for missing primitive divisors."""

@lru_cache(maxsize=None)
def ppd(a: int, n: int):
    """Least primitive prime divisor of a^n - 1 (a prime p with ord_p(a) = n), or None.

    None occurs exactly for a = 2, n = 1; n = 2 with a + 1 a power of 2; and (a, n) = (2, 6)."""
    if a < 2 or n < 1:
        raise ValueError(f'ppd needs a >= 2 and n >= 1, got ({a}, {n})')
    for p in range(n + 1, SEARCH_LIMIT, n):
        if pow(a, n, p) == 1 and sympy.isprime(p) and sympy.n_order(a, p) == n:
            return p
    value = int(sympy.cyclotomic_poly(n, a))
    for r in sympy.primefactors(n):
        while value % r == 0:
            value //= r
    if value == 1:
        return None
    # all remaining factors exceed the search limit and are primitive
    return min(sympy.primefactors(value))

def _ppd_required(a: int, n: int) -> int:
    p = ppd(a, n)
    if p is None:
        raise NotCovered(f'{a}^{n} - 1 has no primitive prime divisor')
    return p

def ppd_star(q: int, n: int, eps: int = 1, allow_small: bool = False) -> int:
    """l*(q^n - eps): ppd(q, n) for odd n and ppd(q, n) ppd(q, n/2) for even n when eps = +1; ppd(q, 2n) when
    eps = -1. Defined for n >= 13 unless allow_small is set."""
    if eps not in (1, -1):
        raise ValueError('eps must be +1 or -1')
    if n < 13 and not allow_small:
        raise NotCovered(f'l* is defined for n >= 13, got n = {n}')
    if eps == -1:
        return _ppd_required(q, 2 * n)
    if n % 2:
        return _ppd_required(q, n)
    return _ppd_required(q, n) * _ppd_required(q, n // 2)

@dataclass(frozen=True)
class SpecialPrimeSet:
    r: int
    s1: int
    s2: int
    source: str = ''

    @property
    def primes(self) -> set:
        return {self.r, self.s1, self.s2}

    def as_dict(self) -> dict:
        return {'r': self.r, 's1': self.s1, 's2': self.s2, 'set': sorted(self.primes), 'source': self.source}

def _char(q: int) -> tuple:
    factors = sympy.factorint(q)
    if len(factors) != 1:
        raise ValueError(f'{q} is not a prime power')
    return next(iter(factors.items()))

_ALIASES = {'Omega+': 'Spin+', 'Omega-': 'Spin-', 'Omega': 'Spin', 'PSL': 'SL', 'PSU': 'SU', 'PSp': 'Sp'}

def _classical_row(family: str, n: int, p: int, f: int) -> tuple:
    """(r, s1, s2, row) for the classical rows; n is the dimension."""
    L = lambda k: _ppd_required(p, k)
    if family == 'SL':
        if n < 4:
            raise NotCovered('SL rows start at n = 4')
        return L(n * f), L((n - 1) * f), L((n - 1) * f), 'SL_n(q), n >= 4'
    if family == 'SU':
        if n % 2 and n >= 5:
            s = L((n - 1) * f) if n % 4 == 1 else L((n - 1) * f // 2)
            return L(2 * n * f), s, s, 'SU_n(q), n >= 5 odd'
        if n % 2 == 0 and n >= 4:
            s = L(n * f) if n % 4 == 0 else L(n * f // 2)
            return L((2 * n - 2) * f), s, s, 'SU_n(q), n >= 4 even'
        raise NotCovered('SU rows start at n = 4 (even) and n = 5 (odd)')
    h = n // 2
    if family in ('Sp', 'Spin'):
        if (family == 'Sp' and n % 2) or (family == 'Spin' and n % 2 == 0):
            raise NotCovered(f'{family} in dimension {n}')
        if h >= 3 and h % 2:
            s = L(h * f)
            return L(2 * h * f), s, s, 'Sp_2n(q), Spin_2n+1(q), n >= 3 odd'
        if h >= 6 and h % 2 == 0:
            return L(2 * h * f), L(h * f), L(h * f // 2), 'Sp_2n(q), Spin_2n+1(q), n >= 6 even'
        raise NotCovered(f'no row for {family} in dimension {n}')
    if family in ('Spin+', 'Spin-'):
        if n % 2 or h < 4:
            raise NotCovered(f'{family} rows need even dimension 2n with n >= 4')
        if family == 'Spin+':
            s = L(h * f) if h % 2 else L((h - 1) * f)
            return L((2 * h - 2) * f), s, s, 'Spin+_2n(q), n >= 4'
        s = L((2 * h - 2) * f)
        return L(2 * h * f), s, s, 'Spin-_2n(q), n >= 4'
    raise NotCovered(f'unknown family {family}')

# exceptional rows: (r, s) multipliers of f, with the Suzuki/Ree groups read over Q = q^2 = p^F (multipliers of F)
_EXCEPTIONAL = {'2B2': (2, 4, 4, lambda Q: Q > 8),
                '2G2': (3, 6, 6, lambda Q: Q > 27),
                '2F4': (2, 12, 6, lambda Q: Q > 8),
                'G2': (None, 3, 3, lambda q: q not in (2, 4)),
                '3D4': (None, 12, 12, lambda q: True),
                'F4': (None, 12, 8, lambda q: True),
                'E6': (None, 9, 8, lambda q: True),
                '2E6': (None, 18, 8, lambda q: True),
                'E7': (None, 18, 7, lambda q: True),
                'E8': (None, 24, 20, lambda q: True)}

def special_primes(family: str, n: int, q: int) -> SpecialPrimeSet:
    """The special primes {r, s1, s2} of a group of Lie type.

    Parameters:
    - family (str): SL, SU, Sp, Spin (odd dimension), Spin+/Spin- (Omega+/Omega- accepted), or an exceptional type
      2B2, 2G2, 2F4 (q is then q^2), G2, 3D4, F4, E6, 2E6, E7, E8.
    - n (int): dimension of the natural module (ignored for exceptional types).
    - q (int): field order.

    Return
    - primes (SpecialPrimeSet). Raises NotCovered outside every row."""
    family = _ALIASES.get(family, family)
    p, f = _char(q)
    if (family, n, q) in param.special_rows:
        r, s1, s2 = param.special_rows[(family, n, q)]
        return SpecialPrimeSet(r, s1, s2, f'{family}{n}({q})')
    if family in _EXCEPTIONAL:
        char, rm, sm, ok = _EXCEPTIONAL[family]
        if char is not None and p != char:
            raise NotCovered(f'{family}({q}) needs characteristic {char}')
        if not ok(q):
            raise NotCovered(f'{family}({q}) lies in the excluded range')
        if char is not None and f % 2 == 0:
            raise NotCovered(f'{family}({q}) needs an odd power of {char}')
        r, s = _ppd_required(p, rm * f), _ppd_required(p, sm * f)
        out = SpecialPrimeSet(r, s, s, family)
    else:
        key = n if family in ('SL', 'SU') else n // 2
        if (key, q) in param.special_exclusions.get(family, set()):
            sub = param.special_substitutes.get((family, n, q))
            if sub is None:
                raise NotCovered(f'{family}{n}({q}) is excluded from its row and has no substitute')
            r, s = sub[0], sub[-1]
            return SpecialPrimeSet(r, s, s, f'substitute for {family}{n}({q})')
        r, s1, s2, row = _classical_row(family, n, p, f)
        out = SpecialPrimeSet(r, s1, s2, row)
    assert all(sympy.isprime(x) and x != p for x in out.primes), f'{out} contains the characteristic'
    return out

def order_polynomial(family: str, n: int, q: int) -> int:
    """Order of the quasisimple group of the row (Spin groups measured through Omega, which shares every odd
    special prime); exceptional types use their standard order polynomials."""
    family = _ALIASES.get(family, family)
    if family in ('SL', 'SU', 'Sp'):
        return order_formula(family, n, q)
    if family == 'Spin':
        return order_formula('Sp', n - 1, q)
    if family in ('Spin+', 'Spin-'):
        return order_formula('Omega', n, q, 1 if family == 'Spin+' else -1)
    Q = q
    exc = {'2B2': Q ** 2 * (Q ** 2 + 1) * (Q - 1),
           '2G2': Q ** 3 * (Q ** 3 + 1) * (Q - 1),
           '2F4': Q ** 12 * (Q ** 6 + 1) * (Q ** 4 - 1) * (Q ** 3 + 1) * (Q - 1),
           'G2': q ** 6 * (q ** 6 - 1) * (q ** 2 - 1),
           '3D4': q ** 12 * (q ** 8 + q ** 4 + 1) * (q ** 6 - 1) * (q ** 2 - 1),
           'F4': q ** 24 * prod(q ** d - 1 for d in (12, 8, 6, 2)),
           'E6': q ** 36 * prod(q ** d - 1 for d in (12, 9, 8, 6, 5, 2)),
           '2E6': q ** 36 * (q ** 12 - 1) * (q ** 9 + 1) * (q ** 8 - 1) * (q ** 6 - 1) * (q ** 5 + 1) * (q ** 2 - 1),
           'E7': q ** 63 * prod(q ** d - 1 for d in (18, 14, 12, 10, 8, 6, 2)),
           'E8': q ** 120 * prod(q ** d - 1 for d in (30, 24, 20, 18, 14, 12, 8, 2))}
    if family not in exc:
        raise NotCovered(f'unknown family {family}')
    return exc[family]

def scan_lemma_pair(q_max: int, n_max: int, n_min: int = 13) -> list:
    """Pairs violating: gcd(l*(q^n - a), l*(q^m - b)) > 1 only if (n, a) = (m, b), or a = + and n in {2m, 4m}.

    Runs over prime powers q <= q_max and n_min <= m <= n <= n_max; returns (q, n, a, m, b) tuples."""
    violations = []
    for q in range(2, q_max + 1):
        if len(sympy.factorint(q)) != 1:
            continue
        stars = {}
        for n in range(n_min, n_max + 1):
            for a in (1, -1):
                try:
                    stars[(n, a)] = ppd_star(q, n, a, allow_small=n < 13)
                except NotCovered:
                    continue
        for (n, a), x in stars.items():
            for (m, b), y in stars.items():
                if m > n or gcd(x, y) == 1:
                    continue
                if (n, a) == (m, b) or (a == 1 and n in (2 * m, 4 * m)):
                    continue
                violations.append((q, n, a, m, b))
    return violations

def center_exponent_D(k: int, Q: int, family: str) -> int:
    """D(k, Q): 2 (Q!)^(k+1) for SL/SU, 2^(k+1) for Sp and Omega+."""
    if k < 1 or Q < 2:
        raise ValueError('need k >= 1 and Q >= 2')
    if family in ('SL', 'SU'):
        return 2 * factorial(Q) ** (k + 1)
    if family in ('Sp', 'Omega+', 'SO+'):
        return 2 ** (k + 1)
    raise ValueError(f'D(k, Q) is not defined for {family}')
