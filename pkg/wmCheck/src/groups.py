import numpy as np
from math import lcm

from src.ff import FieldSpec
from src import linalg
from src.param import ENUMERATION_CAP, CHUNK

class GroupError(ValueError):
    """Raised for inconsistent generators or elements outside an enumerated group."""

class EnumerationCapExceeded(ValueError):
    def __init__(self, partial_count: int, cap: int):
        self.partial_count = partial_count
        super().__init__(f'enumeration cap {cap} exceeded after {partial_count} elements')

def perm_from_cycles(cycles, n: int) -> np.ndarray:
    """Image array on points 0..n-1 of a product of disjoint cycles written on points 1..n."""
    img = np.arange(n, dtype=np.int64)
    for cyc in cycles:
        cyc = [int(c) - 1 for c in cyc]
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a] = b
    return img

class Element():
    """A permutation of 0..n-1 (field is None) or an invertible n x n matrix over a FieldSpec acting on column
    vectors. Products follow (fg)(i) = f(g(i)): the right factor acts first."""
    __slots__ = ('field', 'data', '_key')

    def __init__(self, data, field: FieldSpec = None, check: bool = True):
        self.field = field
        self.data = np.asarray(data, dtype=np.int64)
        self._key = None
        if check:
            if field is None:
                n = len(self.data)
                if self.data.ndim != 1 or not np.array_equal(np.sort(self.data), np.arange(n)):
                    raise GroupError('permutation images are not a bijection')
            else:
                if self.data.ndim != 2 or self.data.shape[0] != self.data.shape[1]:
                    raise GroupError('matrix element must be square')
                if np.any(self.data < 0) or np.any(self.data >= field.q):
                    raise GroupError(f'matrix entries outside {field}')
                if linalg.det(field, self.data) == 0:
                    raise GroupError('matrix element is singular')

    @classmethod
    def from_cycles(cls, cycles, n: int):
        return cls(perm_from_cycles(cycles, n))

    @classmethod
    def identity_like(cls, other):
        n = other.degree
        if other.field is None:
            return cls(np.arange(n), check=False)
        return cls(linalg.identity(n), other.field, check=False)

    @property
    def is_perm(self) -> bool:
        return self.field is None

    @property
    def degree(self) -> int:
        return self.data.shape[0]

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = self.data.tobytes()
        return self._key

    def __check(self, other):
        if not isinstance(other, Element) or other.field != self.field or other.degree != self.degree:
            raise GroupError('elements of different groups')

    def __mul__(self, other):
        self.__check(other)
        if self.field is None:
            return Element(self.data[other.data], check=False)
        return Element(linalg.matmul(self.field, self.data, other.data), self.field, check=False)

    def inverse(self):
        if self.field is None:
            return Element(np.argsort(self.data), check=False)
        return Element(linalg.inverse(self.field, self.data), self.field, check=False)

    def __pow__(self, e: int):
        e = int(e)
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = Element.identity_like(self)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, Element) and other.field == self.field and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.field, self.key))

    def is_identity(self) -> bool:
        if self.field is None:
            return bool(np.array_equal(self.data, np.arange(self.degree)))
        return bool(np.array_equal(self.data, linalg.identity(self.degree)))

    def order(self) -> int:
        if self.field is None:
            return lcm(*[len(c) for c in self.cycles(include_fixed=True)]) if self.degree else 1
        return linalg.order(self.field, self.data)

    def conj(self, t):
        """t * self * t^-1"""
        return t * self * t.inverse()

    def cycles(self, include_fixed: bool = False) -> list:
        """Disjoint cycles on points 1..n, each starting at its least point."""
        assert self.field is None, 'cycles of a matrix element'
        seen = np.zeros(self.degree, dtype=bool)
        out = []
        for i in range(self.degree):
            if seen[i]:
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j + 1)
                j = int(self.data[j])
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def __repr__(self):
        if self.field is None:
            cyc = self.cycles()
            return ''.join('(' + ','.join(map(str, c)) + ')' for c in cyc) if cyc else '()'
        return linalg.format_matrix(self.field, self.data)

class EnumeratedGroup():
    """A finite group listed element by element by breadth-first closure of its generators, with conjugacy
    classes, power maps and centralizer orders. Elements get dense ids in BFS order (identity is 0); classes are
    numbered by their least element id, so class 0 is the identity class."""
    def __init__(self, generators: list, cap: int = ENUMERATION_CAP, label: str = ''):
        """Parameters:
        - generators (list[Element]): nonempty list sharing a variant, degree and field.
        - cap (int): maximal number of elements; EnumerationCapExceeded past it.
        - label (str): name used in tables and reports."""
        if not generators:
            raise GroupError('at least one generator is required')
        g0 = generators[0]
        for g in generators:
            if not isinstance(g, Element) or g.field != g0.field or g.degree != g0.degree:
                raise GroupError('generators must share a variant, degree and field')
        if cap < 1:
            raise GroupError('cap must be positive')
        self.label = label
        self.generators = list(generators)
        self.field = g0.field
        self.n = g0.degree
        self.width = self.n if self.field is None else self.n * self.n
        radix = self.n if self.field is None else self.field.q
        self.__fits = radix ** self.width < 2 ** 63
        if self.__fits:
            self.__weights = np.array([radix ** i for i in range(self.width)], dtype=np.int64)
        else:
            self.__weights = np.array([radix ** i for i in range(self.width)], dtype=object)
        self.__enumerate(cap)
        self.__classes()

    # element storage
    def _encode(self, rows: np.ndarray) -> np.ndarray:
        rows = rows.reshape(len(rows), self.width)
        if self.__fits:
            return rows @ self.__weights
        return rows.astype(object) @ self.__weights

    def _mul_rows(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Row-wise products A[i] * B[i] of flattened elements; either side may be a single row."""
        A = np.atleast_2d(A)
        B = np.atleast_2d(B)
        if self.field is None:
            A, B = np.broadcast_arrays(A, B)
            return np.take_along_axis(A, B, axis=1)
        n = self.n
        prod = linalg.matmul(self.field, A.reshape(-1, n, n), B.reshape(-1, n, n))
        return prod.reshape(len(prod), n * n)

    def _row(self, g: Element) -> np.ndarray:
        if g.field != self.field or g.degree != self.n:
            raise GroupError(f'element does not belong to {self.label or "this group"}')
        return g.data.reshape(self.width)

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        """Ids of flattened elements, -1 where absent."""
        keys = self._encode(np.atleast_2d(rows))
        pos = np.searchsorted(self.__sorted_keys, keys)
        pos = np.minimum(pos, len(self.__sorted_keys) - 1)
        found = self.__sorted_keys[pos] == keys
        return np.where(found, self.__sorted_ids[pos], -1).astype(np.int64)

    def __enumerate(self, cap: int):
        if self.field is None:
            ident = np.arange(self.n, dtype=np.int64)
        else:
            ident = linalg.identity(self.n).reshape(self.width)
        gens = [self._row(g) for g in self.generators]
        parts = [ident[None, :]]
        known = self._encode(ident[None, :])
        frontier = ident[None, :]
        total = 1
        while len(frontier):
            cand = []
            for s in gens:
                for i in range(0, len(frontier), CHUNK):
                    cand.append(self._mul_rows(frontier[i:i + CHUNK], s[None, :]))
            cand = np.concatenate(cand)
            keys = self._encode(cand)
            keys, first = np.unique(keys, return_index=True)
            pos = np.minimum(np.searchsorted(known, keys), len(known) - 1)
            new = known[pos] != keys
            frontier = cand[first[new]]
            total += len(frontier)
            if total > cap:
                raise EnumerationCapExceeded(total, cap)
            if len(frontier):
                parts.append(frontier)
                known = np.sort(np.concatenate([known, keys[new]]))
        self.data = np.concatenate(parts)
        self.order = len(self.data)
        self.keys = self._encode(self.data)
        order = np.argsort(self.keys, kind='stable')
        self.__sorted_keys = self.keys[order]
        self.__sorted_ids = order

    def element(self, i: int) -> Element:
        row = self.data[int(i)]
        if self.field is None:
            return Element(row.copy(), check=False)
        return Element(row.reshape(self.n, self.n).copy(), self.field, check=False)

    def index(self, g: Element) -> int:
        i = int(self.lookup(self._row(g))[0])
        if i < 0:
            raise GroupError(f'{g} is not an element of {self.label or "this group"}')
        return i

    def __len__(self):
        return self.order

    def __contains__(self, g: Element) -> bool:
        try:
            return self.index(g) >= 0
        except GroupError:
            return False

    def multiply_ids(self, a, b) -> np.ndarray:
        return self.lookup(self._mul_rows(self.data[np.atleast_1d(a)], self.data[np.atleast_1d(b)]))

    # conjugacy classes
    def __conjugation_images(self, s: Element) -> np.ndarray:
        s_row, s_inv = self._row(s), self._row(s.inverse())
        out = np.empty(self.order, dtype=np.int64)
        for i in range(0, self.order, CHUNK):
            block = self._mul_rows(self._mul_rows(s_inv[None, :], self.data[i:i + CHUNK]), s_row[None, :])
            out[i:i + CHUNK] = self.lookup(block)
        assert np.all(out >= 0), 'conjugate fell outside the enumerated group'
        return out

    def __classes(self):
        conj = [self.__conjugation_images(s) for s in self.generators]
        labels = np.arange(self.order, dtype=np.int64)
        while True:
            new = labels.copy()
            for c in conj:
                np.minimum.at(new, c, new)
                new = np.minimum(new, new[c])
            new = new[new]
            if np.array_equal(new, labels):
                break
            labels = new
        self.reps, self.class_index = np.unique(labels, return_inverse=True)
        self.class_index = self.class_index.astype(np.int64)
        self.num_classes = len(self.reps)
        self.class_sizes = np.bincount(self.class_index, minlength=self.num_classes).astype(np.int64)
        self.centralizer_orders = self.order // self.class_sizes
        assert np.all(self.order % self.class_sizes == 0), 'class size does not divide the group order'
        self.__power_tables = []
        for c in range(self.num_classes):
            g = self.element(self.reps[c])
            row, cur = self._row(g), self.data[0]
            ids = [0]
            while True:
                cur = self._mul_rows(cur[None, :], row[None, :])[0]
                i = int(self.lookup(cur)[0])
                if i == 0:
                    break
                ids.append(i)
            self.__power_tables.append(self.class_index[np.array(ids)])
        self.element_orders = np.array([len(t) for t in self.__power_tables], dtype=np.int64)
        self.exponent = lcm(*[int(o) for o in self.element_orders])
        self.inverse_class = np.array([int(t[-1]) if len(t) > 1 else 0 for t in self.__power_tables],
                                      dtype=np.int64)

    def class_of(self, g: Element) -> int:
        """ClassId of g; GroupError when g is not in the group."""
        return int(self.class_index[self.index(g)])

    def class_elements(self, c: int) -> np.ndarray:
        return np.nonzero(self.class_index == c)[0]

    def representative(self, c: int) -> Element:
        return self.element(self.reps[c])

    def power_class_map(self, N: int) -> np.ndarray:
        """Class of g^N for a representative g of every class (N >= 0)."""
        if N < 0:
            raise GroupError('power must be nonnegative')
        return np.array([int(t[N % len(t)]) for t in self.__power_tables], dtype=np.int64)

    def power_table(self, c: int) -> np.ndarray:
        """Classes of g^0, g^1, ..., g^(o-1) for the representative g of class c."""
        return self.__power_tables[c]

    def brute_structure_constant(self, a: int, b: int, c: int) -> int:
        """#{(x, y) in C_a x C_b : xy = z} for the representative z of class c, counted by running x over C_a and
        testing x^-1 z in C_b (x^-1 runs over the inverse class)."""
        xs = self.class_elements(int(self.inverse_class[a]))
        z = self.data[self.reps[c]]
        hits = 0
        for i in range(0, len(xs), CHUNK):
            ys = self.lookup(self._mul_rows(self.data[xs[i:i + CHUNK]], z[None, :]))
            hits += int(np.count_nonzero(self.class_index[ys] == b))
        return hits

    def class_matrix(self, a: int) -> np.ndarray:
        """M[b, c] = brute_structure_constant(a, b, c) for all b, c."""
        k = self.num_classes
        xs = self.class_elements(int(self.inverse_class[a]))
        M = np.zeros((k, k), dtype=np.int64)
        for c in range(k):
            z = self.data[self.reps[c]]
            for i in range(0, len(xs), CHUNK):
                ys = self.lookup(self._mul_rows(self.data[xs[i:i + CHUNK]], z[None, :]))
                M[:, c] += np.bincount(self.class_index[ys], minlength=k)
        return M

    def summary(self) -> dict:
        return {'label': self.label, 'order': self.order, 'classes': self.num_classes, 'exponent': self.exponent,
                'sizes': self.class_sizes.tolist(), 'orders': self.element_orders.tolist()}

def enumerate_group(generators: list, cap: int = ENUMERATION_CAP, label: str = '') -> EnumeratedGroup:
    return EnumeratedGroup(generators, cap, label)

def class_of(G: EnumeratedGroup, g: Element) -> int:
    return G.class_of(g)

def power_class_map(G: EnumeratedGroup, N: int) -> dict:
    return {c: int(d) for c, d in enumerate(G.power_class_map(N))}

def brute_structure_constant(G: EnumeratedGroup, a: int, b: int, c: int) -> int:
    return G.brute_structure_constant(a, b, c)

class ProductReplacement():
    """Seeded product-replacement walk over a generating list; each call returns the next sample."""
    def __init__(self, generators: list, seed: int = 0, burn_in: int = 50, slots: int = 10, gap: int = 4):
        if not generators:
            raise GroupError('at least one generator is required')
        self.rng = np.random.default_rng(seed)
        self.state = [generators[i % len(generators)] for i in range(max(slots, len(generators)))]
        self.acc = Element.identity_like(generators[0])
        self.gap = gap
        for _ in range(burn_in):
            self.__step()

    def __step(self):
        i, j = self.rng.choice(len(self.state), size=2, replace=False)
        other = self.state[j] if self.rng.integers(2) else self.state[j].inverse()
        if self.rng.integers(2):
            self.state[i] = self.state[i] * other
        else:
            self.state[i] = other * self.state[i]
        self.acc = self.acc * self.state[i]

    def __call__(self) -> Element:
        for _ in range(self.gap):
            self.__step()
        return self.acc

def random_element(generators: list, seed: int = 0, burn_in: int = 50) -> Element:
    return ProductReplacement(generators, seed, burn_in)()
