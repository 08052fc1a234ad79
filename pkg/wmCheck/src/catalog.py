import re
import numpy as np
from dataclasses import dataclass
from math import gcd

from src.classical import ClassicalGroupSpec, IllegalParameters, enumerate_classical, random_member
from src.groups import Element, EnumeratedGroup, GroupError
from src import linalg
from src.param import ENUMERATION_CAP

_PERM = re.compile(r'^(C|S|A)(\d+)$')
_LIE = re.compile(r'^(GL|SL|GU|SU|Sp|GO|SO|Omega|PSL|PSU|PSp)([+-]?)(\d+)\((\d+)\)$')
_PROJECTIVE = {'PSL': 'SL', 'PSU': 'SU', 'PSp': 'Sp'}

class DesignatorError(ValueError):
    """Raised for group designators that do not parse or name an illegal group."""

@dataclass
class GroupSource:
    """A named group: a permutation family (C, S, A), a classical matrix group, or a projective quotient.

    kind is 'perm', 'matrix' or 'projective'; spec is the classical group behind the last two."""
    label: str
    kind: str
    degree: int = 0
    spec: ClassicalGroupSpec = None

    @property
    def center_order(self) -> int:
        if self.kind != 'projective':
            return 1
        s = self.spec
        if s.family == 'SL':
            return gcd(s.n, s.q - 1)
        if s.family == 'SU':
            return gcd(s.n, s.q + 1)
        return gcd(2, s.q - 1)

    @property
    def order(self) -> int:
        if self.kind == 'perm':
            letter, n = self.label[0], self.degree
            full = 1
            for i in range(2, n + 1):
                full *= i
            return {'C': n, 'S': full, 'A': max(full // 2, 1)}[letter]
        return self.spec.order // self.center_order

    def generators(self) -> list:
        if self.kind == 'perm':
            return permutation_generators(self.label[0], self.degree)
        return list(self.spec.generators)

    def build(self, cap: int = ENUMERATION_CAP, seed: int = 1) -> EnumeratedGroup:
        if self.order > cap:
            raise GroupError(f'{self.label} has order {self.order} above the enumeration cap {cap}')
        if self.kind == 'perm':
            return EnumeratedGroup(self.generators(), cap, self.label)
        if self.kind == 'matrix':
            G = enumerate_classical(self.spec, cap, seed=seed)
            G.label = self.label
            return G
        return projective_group(self.spec, self.label, cap, seed)

def permutation_generators(letter: str, n: int) -> list:
    """Generators of C_n, S_n or A_n on points 1..n."""
    if n < 1:
        raise DesignatorError('degree must be positive')
    if letter == 'C' or (letter == 'S' and n < 3):
        return [Element.from_cycles([tuple(range(1, n + 1))] if n > 1 else [], n)]
    if letter == 'S':
        return [Element.from_cycles([(1, 2)], n), Element.from_cycles([tuple(range(1, n + 1))], n)]
    if n < 3:
        return [Element.from_cycles([], n)]
    return [Element.from_cycles([(1, 2, k)], n) for k in range(3, n + 1)]

def parse_designator(text: str) -> GroupSource:
    """GroupSource for designators like A5, S4, C3, GL2(5), SU3(3), Sp4(3), Omega-8(2), PSL2(11).

    Projective names resolve to the matrix group itself when its centre is trivial."""
    text = text.strip()
    m = _PERM.match(text)
    if m:
        return GroupSource(text, 'perm', int(m.group(2)))
    m = _LIE.match(text)
    if not m:
        raise DesignatorError(f'cannot parse group designator {text!r}')
    family, sign, n, q = m.group(1), m.group(2), int(m.group(3)), int(m.group(4))
    eps = {'+': 1, '-': -1, '': 0}[sign]
    if sign and family not in ('GO', 'SO', 'Omega'):
        raise DesignatorError(f'{family} takes no sign')
    try:
        spec = ClassicalGroupSpec(_PROJECTIVE.get(family, family), n, q, eps)
    except IllegalParameters as e:
        raise DesignatorError(f'{text}: {e}')
    if family in _PROJECTIVE:
        source = GroupSource(text, 'projective', n, spec)
        if source.center_order == 1:
            source.kind = 'matrix'
        return source
    return GroupSource(text, 'matrix', n, spec)

# projective action
def projective_points(F, n: int) -> np.ndarray:
    """Normalized representatives (first nonzero coordinate 1) of the 1-spaces of F^n, one per row."""
    blocks = []
    Q = F.q
    for lead in range(n):
        tail = n - lead - 1
        count = Q ** tail
        rows = np.zeros((count, n), dtype=np.int64)
        rows[:, lead] = 1
        idx = np.arange(count, dtype=np.int64)
        for j in range(tail):
            rows[:, lead + 1 + j] = (idx // Q ** j) % Q
        blocks.append(rows)
    return np.concatenate(blocks)

def _normalize(F, V: np.ndarray) -> np.ndarray:
    lead = np.argmax(V != 0, axis=1)
    scale = F.inv(V[np.arange(len(V)), lead])
    return F.mul(V, scale[:, None])

def projective_permutation(F, points: np.ndarray, M) -> Element:
    """The permutation of the rows of `points` induced by v -> Mv."""
    weights = F.q ** np.arange(points.shape[1], dtype=np.int64)
    keys = points @ weights
    order = np.argsort(keys)
    images = _normalize(F, linalg.transpose(linalg.matmul(F, M, linalg.transpose(points))))
    pos = np.searchsorted(keys[order], images @ weights)
    return Element(order[pos])

def projective_group(spec: ClassicalGroupSpec, label: str, cap: int = ENUMERATION_CAP, seed: int = 1,
                     rounds: int = 8) -> EnumeratedGroup:
    """The image of the matrix group in its action on the points of projective space (the group modulo its
    scalar subgroup), enumerated as a permutation group."""
    F = spec.field
    points = projective_points(F, spec.n)
    center = GroupSource(label, 'projective', spec.n, spec).center_order
    target = spec.order // center
    rng = np.random.default_rng(seed)
    mats = [g.data for g in spec.generators]
    for _ in range(rounds):
        G = EnumeratedGroup([projective_permutation(F, points, M) for M in mats], cap, label)
        if G.order == target:
            return G
        mats.append(random_member(spec, rng))
    raise GroupError(f'generators of {label} reach only {G.order} of {target} elements')

