import numpy as np
import sympy
from math import gcd, lcm
from functools import lru_cache

from src.ff import get_field
from src.poly import roots
from src.cyclo import Cyclotomic, cyclotomic_coeffs, reduction_matrix, reduce_exponent_vectors
from src.groups import EnumeratedGroup
from src import linalg
from src.param import DIXON_RETRIES

CERT_PRIME_LIMIT = 1 << 25      # certifying primes stay below this so products of residues fit in int64

class DixonError(ValueError):
    """Raised when eigenspace splitting or the character lift fails."""

class OrthogonalityViolation(ValueError):
    def __init__(self, kind: str, pair: tuple, defect):
        self.kind, self.pair, self.defect = kind, pair, defect
        super().__init__(f'{kind} orthogonality fails at {pair}: defect {defect}')

class TableSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        self.line, self.column = line, column
        super().__init__(f'line {line}, column {column}: {message}')

class TableSemanticError(ValueError):
    def __init__(self, invariant: str, detail: str = ''):
        self.invariant = invariant
        super().__init__(f'{invariant}' + (f': {detail}' if detail else ''))

class CharacterTable():
    """Exact character table: rows are irreducible characters, columns classes; values are Cyclotomic numbers
    with conductor equal to the exponent. `fusion` maps table columns to ClassIds of the enumerated group the
    table was computed from (None for ingested tables)."""
    def __init__(self, label: str, order: int, exponent: int, sizes, orders, inverse, powermaps: dict,
                 values, fusion=None):
        self.label = label
        self.order = int(order)
        self.exponent = int(exponent)
        self.sizes = [int(s) for s in sizes]
        self.orders = [int(o) for o in orders]
        self.inverse = [int(i) for i in inverse]
        self.powermaps = {int(p): [int(c) for c in m] for p, m in powermaps.items()}
        self.values = [list(row) for row in values]
        self.fusion = None if fusion is None else [int(c) for c in fusion]
        self.k = len(self.sizes)
        self._num = None

    @property
    def degrees(self) -> list:
        return [int(row[0].rational()) for row in self.values]

    @property
    def centralizer_orders(self) -> list:
        return [self.order // s for s in self.sizes]

    def __eq__(self, other):
        return (isinstance(other, CharacterTable) and self.label == other.label and self.order == other.order
                and self.exponent == other.exponent and self.sizes == other.sizes and self.orders == other.orders
                and self.inverse == other.inverse and self.powermaps == other.powermaps
                and self.values == other.values)

    def value(self, i: int, j: int) -> Cyclotomic:
        return self.values[i][j]

    def numerators(self) -> np.ndarray:
        """(k, k, phi(e)) integer tensor of power-basis coefficients; all values must be cyclotomic integers."""
        if self._num is None:
            phi = len(cyclotomic_coeffs(self.exponent)) - 1
            num = np.zeros((self.k, self.k, phi), dtype=np.int64)
            for i, row in enumerate(self.values):
                for j, v in enumerate(row):
                    if v.den != 1:
                        raise TableSemanticError('integrality', f'value ({i},{j}) = {v} is not a cyclotomic integer')
                    num[i, j] = v.num
            self._num = num
        return self._num

    def galois_matrix(self, r: int) -> np.ndarray:
        """Matrix of zeta -> zeta^r on the power basis (row vectors)."""
        e = self.exponent
        phi = len(cyclotomic_coeffs(e)) - 1
        return reduction_matrix(e)[(np.arange(phi) * r) % e]

# modular images
def primes_one_mod(e: int, start: int, count: int) -> list:
    out = []
    ell = start + (1 - start) % e
    if ell <= start:
        ell += e
    while len(out) < count:
        if sympy.isprime(ell):
            out.append(ell)
        ell += e
    return out

def dixon_prime(order: int, exponent: int) -> int:
    """Least prime ell = 1 mod exponent with ell > 2 sqrt(order)."""
    ell = 1 + exponent
    while ell * ell <= 4 * order or not sympy.isprime(ell):
        ell += exponent
    return ell

@lru_cache(maxsize=None)
def _root_of_unity(e: int, ell: int) -> int:
    return pow(int(sympy.primitive_root(ell)), (ell - 1) // e, ell)

def units(e: int) -> list:
    return [r for r in range(e) if gcd(r, e) == 1] if e > 1 else [0]

def embedding_matrix(e: int, ell: int) -> np.ndarray:
    """E[u, i] = z^(r_u * i) mod ell for the units r_u of Z/e and a primitive e-th root z mod ell."""
    z = _root_of_unity(e, ell)
    phi = len(cyclotomic_coeffs(e)) - 1
    rs = units(e)
    E = np.zeros((len(rs), phi), dtype=np.int64)
    for u, r in enumerate(rs):
        zr = pow(z, r, ell)
        acc = 1
        for i in range(phi):
            E[u, i] = acc
            acc = acc * zr % ell
    return E

def table_images(T: CharacterTable, ell: int) -> np.ndarray:
    """Values of every character at every class under every embedding Q(zeta_e) -> F_ell: shape (U, k, k)."""
    E = embedding_matrix(T.exponent, ell)
    num = T.numerators() % ell
    out = np.zeros((E.shape[0], T.k, T.k), dtype=np.int64)
    for i in range(E.shape[1]):
        out = (out + E[:, i, None, None] * num[None, :, :, i]) % ell
    return out

def certifying_primes(e: int, bound: int) -> list:
    """Primes = 1 mod e below CERT_PRIME_LIMIT whose product exceeds 2 * bound. A cyclotomic integer whose
    conjugates are all smaller than that product in absolute value and which vanishes modulo each prime is 0."""
    out, prod = [], 1
    start = CERT_PRIME_LIMIT // 2
    while prod <= 2 * bound:
        ell = primes_one_mod(e, start, 1)[0]
        assert ell < CERT_PRIME_LIMIT, 'no certifying prime below the limit'
        out.append(ell)
        prod *= ell
        start = ell + 1
    return out

def _conj_index(e: int) -> list:
    rs = units(e)
    pos = {r: u for u, r in enumerate(rs)}
    return [pos[(-r) % e] if e > 1 else 0 for r in rs]

def _row_sum_exact(T: CharacterTable, i: int, i2: int) -> Cyclotomic:
    total = Cyclotomic.from_int(T.exponent, 0)
    for j in range(T.k):
        total = total + T.values[i][j] * T.values[i2][j].conj() * T.sizes[j]
    return total

def _col_sum_exact(T: CharacterTable, j: int, j2: int) -> Cyclotomic:
    total = Cyclotomic.from_int(T.exponent, 0)
    for i in range(T.k):
        total = total + T.values[i][j] * T.values[i][j2].conj()
    return total

def check_orthogonality(T: CharacterTable) -> dict:
    """Exact certificate of both orthogonality relations and sum of squared degrees = |G|.

    Return
    - certificate (dict): primes used and the checked relations.
    Raises OrthogonalityViolation with the first violating pair and its exact defect."""
    degs = []
    for i in range(T.k):
        v = T.values[i][0]
        if not v.is_rational() or v.rational().denominator != 1 or v.rational() <= 0:
            raise OrthogonalityViolation('degree', (i, 0), v)
        degs.append(int(v.rational()))
    if sum(d * d for d in degs) != T.order:
        raise OrthogonalityViolation('degree', (0, 0), sum(d * d for d in degs) - T.order)
    # |sigma(v)| <= sum of |coefficients| for every embedding sigma
    vmax = int(np.abs(T.numerators()).sum(axis=2).max())
    bound = (T.order + T.k) * vmax * vmax + T.order
    primes = certifying_primes(T.exponent, bound)
    cj = _conj_index(T.exponent)
    cent = T.centralizer_orders
    bad_row = bad_col = None
    for ell in primes:
        imgs = table_images(T, ell)
        sizes = np.array(T.sizes, dtype=np.int64) % ell
        for u in range(imgs.shape[0]):
            X, Xc = imgs[u], imgs[cj[u]]
            R = ((X * sizes[None, :]) % ell) @ Xc.T % ell
            target = np.eye(T.k, dtype=np.int64) * (T.order % ell)
            bad = np.argwhere(R != target)
            if len(bad) and bad_row is None:
                bad_row = tuple(int(x) for x in bad[0])
            C = (X.T @ Xc) % ell
            target = np.diag(np.array(cent, dtype=np.int64) % ell)
            bad = np.argwhere(C != target)
            if len(bad) and bad_col is None:
                bad_col = tuple(int(x) for x in bad[0])
    if bad_col is not None:
        j, j2 = bad_col
        defect = _col_sum_exact(T, j, j2) - (cent[j] if j == j2 else 0)
        raise OrthogonalityViolation('column', bad_col, defect)
    if bad_row is not None:
        i, i2 = bad_row
        defect = _row_sum_exact(T, i, i2) - (T.order if i == i2 else 0)
        raise OrthogonalityViolation('row', bad_row, defect)
    return {'group': T.label, 'primes': primes, 'relations': ['row', 'column', 'degrees'], 'k': T.k}

def _phi_mulmod(a, b, e: int, p: int) -> np.ndarray:
    prod = np.convolve(a % p, b % p) % p
    full = np.zeros(e, dtype=np.int64)
    np.add.at(full, np.arange(len(prod)) % e, prod)
    return (full % p) @ reduction_matrix(e) % p

def check_power_maps(T: CharacterTable) -> None:
    """For each stored prime p and class j: chi(g^p) = sigma_r(chi(g)) with r = p mod |g| a unit mod e when p does
    not divide |g|, and chi(g)^p = chi(g^p) modulo p otherwise. Raises TableSemanticError."""
    e = T.exponent
    num = T.numerators()
    for p, pmap in T.powermaps.items():
        for j in range(T.k):
            o = T.orders[j]
            target = num[:, pmap[j], :]
            if o % p:
                r = p
                while gcd(r, e) != 1:
                    r += o
                twisted = num[:, j, :] @ T.galois_matrix(r)
                if not np.array_equal(twisted, target):
                    raise TableSemanticError('powermap consistency', f'prime {p}, class {j}')
            else:
                for i in range(T.k):
                    acc = np.zeros_like(num[i, j]); acc[0] = 1
                    for _ in range(p):
                        acc = _phi_mulmod(acc, num[i, j], e, p)
                    if np.any((acc - target[i]) % p):
                        raise TableSemanticError('powermap consistency', f'prime {p}, class {j}, character {i}')

def validate_table(T: CharacterTable) -> dict:
    """Every structural invariant of a character table; returns the orthogonality certificate."""
    if T.k == 0 or len(T.orders) != T.k or len(T.inverse) != T.k or len(T.values) != T.k:
        raise TableSemanticError('class count', f'{T.k} classes declared')
    if any(len(row) != T.k for row in T.values):
        raise TableSemanticError('class count', 'character row of wrong length')
    if sum(T.sizes) != T.order:
        raise TableSemanticError('class sizes', f'sum {sum(T.sizes)} != order {T.order}')
    if any(T.order % s for s in T.sizes):
        raise TableSemanticError('class sizes', 'a class size does not divide the order')
    if T.sizes[0] != 1 or T.orders[0] != 1:
        raise TableSemanticError('identity class', 'class 0 must be the identity')
    if lcm(*T.orders) != T.exponent:
        raise TableSemanticError('exponent', f'lcm of element orders is {lcm(*T.orders)}')
    if sorted(T.inverse) != list(range(T.k)) or any(T.inverse[T.inverse[j]] != j for j in range(T.k)):
        raise TableSemanticError('inverse map', 'not an involution')
    needed = set(sympy.primefactors(T.exponent))
    if set(T.powermaps) != needed or any(len(m) != T.k for m in T.powermaps.values()):
        raise TableSemanticError('powermap incomplete', f'expected primes {sorted(needed)}')
    if any(v.e != T.exponent for row in T.values for v in row):
        raise TableSemanticError('conductor', 'values must use the table exponent')
    if any(v != 1 for v in T.values[0]):
        raise TableSemanticError('trivial character', 'row 0 must be identically 1')
    T.numerators()
    try:
        cert = check_orthogonality(T)
    except OrthogonalityViolation as e:
        raise TableSemanticError('orthogonality', str(e))
    check_power_maps(T)
    return cert

# Dixon-Schneider
def _restricted(F, M, B, piv):
    """Matrix R with M B = B R for a basis B (columns) of an M-invariant subspace; piv indexes invertible rows."""
    MB = linalg.matmul(F, M, B)
    return linalg.matmul(F, linalg.inverse(F, B[piv]), MB[piv])

def _split_spaces(G: EnumeratedGroup, F, seed: int) -> list:
    k = G.num_classes
    ell = F.p
    rng = np.random.default_rng(seed)
    mats = {}

    def class_matrix(a):
        if a not in mats:
            mats[a] = G.class_matrix(a) % ell
        return mats[a]

    spaces = [linalg.identity(k)]
    failures = 0
    while any(S.shape[1] > 1 for S in spaces):
        progressed = False
        out = []
        for S in spaces:
            d = S.shape[1]
            if d == 1:
                out.append(S)
                continue
            picks = range(1, k) if k <= 24 else rng.choice(np.arange(1, k), size=min(k - 1, 8), replace=False)
            M = np.zeros((k, k), dtype=np.int64)
            for a in picks:
                M = (M + int(rng.integers(1, ell)) * class_matrix(int(a))) % ell
            piv = linalg.rref(F, S.T)[1]
            R = _restricted(F, M, S, piv)
            lams = roots(linalg.charpoly(F, R), seed=int(rng.integers(1 << 30)))
            parts = []
            for lam in lams:
                A = (R - lam * linalg.identity(d)) % ell
                N = linalg.nullspace(F, A)
                if N.shape[1]:
                    parts.append(linalg.matmul(F, S, N))
            if sum(P.shape[1] for P in parts) != d:
                raise DixonError('class algebra is not diagonalizable over the Dixon prime')
            if len(parts) > 1:
                progressed = True
            out.extend(parts)
        spaces = out
        if not progressed and any(S.shape[1] > 1 for S in spaces):
            failures += 1
            if failures > DIXON_RETRIES:
                raise DixonError(f'eigenspace splitting failed after {DIXON_RETRIES} retries; re-seed')
    return spaces

def dixon_schneider(G: EnumeratedGroup, seed: int = 0) -> CharacterTable:
    """Exact character table of an enumerated group.

    Parameters:
    - G (EnumeratedGroup): the group, classes computed.
    - seed (int): seed of the random class-matrix combinations.

    Return
    - table (CharacterTable): canonical class and character order, fused to G's ClassIds."""
    k, order, e = G.num_classes, G.order, G.exponent
    ell = dixon_prime(order, e)
    F = get_field(ell)
    spaces = _split_spaces(G, F, seed)
    if len(spaces) != k:
        raise DixonError(f'found {len(spaces)} characters for {k} classes')
    sizes = G.class_sizes % ell
    inv = G.inverse_class
    z = _root_of_unity(e, ell)
    vals = np.zeros((k, k), dtype=np.int64)
    degs = []
    for i, S in enumerate(spaces):
        w = S[:, 0] % ell
        assert w[0] != 0, 'central character vanishes at the identity'
        w = w * pow(int(w[0]), -1, ell) % ell
        norm = 0
        for c in range(k):
            norm = (norm + int(w[c]) * int(w[inv[c]]) % ell * pow(int(sizes[c]), -1, ell)) % ell
        dsq = order * pow(norm, -1, ell) % ell
        r = sympy.sqrt_mod(dsq, ell)
        if r is None:
            raise DixonError('degree square has no root modulo the Dixon prime')
        d = min(int(r), ell - int(r))
        if order % d or d * d > order:
            raise DixonError(f'lifted degree {d} is impossible for order {order}')
        degs.append(d)
        for c in range(k):
            vals[i, c] = int(w[c]) * d % ell * pow(int(sizes[c]), -1, ell) % ell
    expo = np.zeros((k, k, e), dtype=np.int64)
    for c in range(k):
        pt = G.power_table(c)
        o = len(pt)
        step = e // o
        zo = pow(z, step, ell)
        oinv = pow(o, -1, ell)
        for jj in range(o):
            zneg = [pow(zo, (-jj * kk) % o, ell) for kk in range(o)]
            m = (vals[:, pt] * np.array(zneg, dtype=np.int64)[None, :] % ell).sum(axis=1) % ell * oinv % ell
            expo[:, c, step * jj] = m
    if not np.array_equal(expo.sum(axis=2), np.array(degs)[:, None] * np.ones(k, dtype=np.int64)[None, :]):
        raise DixonError('eigenvalue multiplicities do not sum to the degree')
    coeffs = reduce_exponent_vectors(expo, e)
    values = [[Cyclotomic(e, coeffs[i, c]) for c in range(k)] for i in range(k)]
    raw = CharacterTable(G.label, order, e, G.class_sizes, G.element_orders, inv,
                         {p: G.power_class_map(p) for p in sympy.primefactors(e)}, values,
                         fusion=list(range(k)))
    T = canonical_order(raw, [int(r) for r in G.reps])
    validate_table(T)
    return T

def canonical_order(T: CharacterTable, rep_ids=None) -> CharacterTable:
    """Classes by (element order, class size, least representative id); characters by degree, then values."""
    rep_ids = rep_ids if rep_ids is not None else list(range(T.k))
    cols = sorted(range(T.k), key=lambda c: (T.orders[c], T.sizes[c], rep_ids[c]))
    pos = {c: i for i, c in enumerate(cols)}
    rows = sorted(range(T.k), key=lambda i: (T.values[i][cols[0]].rational(), any(v != 1 for v in T.values[i]),
                                              [(v.num, v.den) for v in (T.values[i][c] for c in cols)]))
    values = [[T.values[i][c] for c in cols] for i in rows]
    powermaps = {p: [pos[m[c]] for c in cols] for p, m in T.powermaps.items()}
    fusion = None if T.fusion is None else [T.fusion[c] for c in cols]
    return CharacterTable(T.label, T.order, T.exponent, [T.sizes[c] for c in cols], [T.orders[c] for c in cols],
                          [pos[T.inverse[c]] for c in cols], powermaps, values, fusion)

# queries
def nonvanishing_profile(T: CharacterTable, j: int) -> int:
    """#{i : chi_i(g_j) != 0}; never exceeds |C_G(g_j)|."""
    count = sum(1 for i in range(T.k) if not T.values[i][j].is_zero())
    assert count <= T.centralizer_orders[j], f'nonvanishing count {count} exceeds the centralizer order'
    return count

def column_profile(T: CharacterTable, j: int) -> dict:
    """Nonvanishing count, its bound and the Galois orbits of the nonzero values on column j."""
    nonzero = [i for i in range(T.k) if not T.values[i][j].is_zero()]
    orbits, seen = [], set()
    for i in nonzero:
        if i in seen:
            continue
        conj = {T.values[i][j].galois(r) for r in units(T.exponent)}
        orbit = [i2 for i2 in nonzero if T.values[i2][j] in conj]
        seen.update(orbit)
        orbits.append(orbit)
    return {'class': j, 'nonvanishing': len(nonzero), 'bound': T.centralizer_orders[j], 'orbits': orbits}

def real_classes(T: CharacterTable) -> list:
    return [j for j in range(T.k) if T.inverse[j] == j]

def galois_power_map(T: CharacterTable, r: int) -> list:
    """Class of g^r for r a unit mod the exponent: the column equal to the zeta -> zeta^r twist of column j."""
    if gcd(r, T.exponent) != 1:
        raise ValueError(f'{r} is not a unit modulo {T.exponent}')
    num = T.numerators()
    G_r = T.galois_matrix(r)
    keys = {num[:, j, :].tobytes(): j for j in range(T.k)}
    out = []
    for j in range(T.k):
        twisted = (num[:, j, :] @ G_r).astype(np.int64)
        hit = keys.get(twisted.tobytes())
        if hit is None:
            raise TableSemanticError('powermap consistency', f'no column matches the twist of class {j} by {r}')
        out.append(hit)
    return out

def power_map(T: CharacterTable, N: int) -> list:
    """Class of g^N for every class, composed from stored prime power maps and Galois twists for primes coprime
    to the exponent. KeyError when a needed prime power map is missing."""
    classes = list(range(T.k))
    if N == 0:
        return [0] * T.k
    for p, a in sympy.factorint(N).items():
        if T.exponent % p == 0:
            pmap = T.powermaps[p]
        else:
            pmap = galois_power_map(T, p % T.exponent if T.exponent > 1 else 1)
        for _ in range(a):
            classes = [pmap[c] for c in classes]
    return classes
