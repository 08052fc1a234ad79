import numpy as np

from src.ff import FieldSpec, FieldError
from src import linalg

KINDS = ('none', 'symplectic', 'symmetric', 'quadratic', 'hermitian')

class FormError(ValueError):
    """Raised for degenerate or inconsistent forms and failed basis searches."""

class FormSpec():
    """A sesquilinear or quadratic form on F^n.

    `gram` is the bilinear Gram matrix B(u, v) = u^T G v (hermitian: u^T G conj(v), over F_{q^2}).
    `quad` is the upper-triangular matrix of a characteristic-2 quadratic form, Q(v) = sum_{i<=j} quad[i,j] v_i v_j;
    in odd characteristic the quadratic form of a symmetric Gram is Q(v) = B(v, v) / 2.
    `eps` is the Witt type (+1/-1) of an even-dimensional orthogonal form, 0 otherwise."""
    def __init__(self, kind: str, field: FieldSpec, gram, quad=None, eps: int = 0):
        if kind not in KINDS:
            raise FormError(f'unknown form kind {kind}')
        self.kind = kind
        self.field = field
        self.gram = np.asarray(gram, dtype=np.int64)
        self.quad = None if quad is None else np.asarray(quad, dtype=np.int64)
        self.eps = eps
        self.n = self.gram.shape[0]
        if kind == 'quadratic' and self.quad is None:
            raise FormError('a quadratic form needs its coefficient matrix')

    @property
    def is_orthogonal(self) -> bool:
        return self.kind in ('symmetric', 'quadratic')

    def __sigma(self, V):
        return self.field.conj(V) if self.kind == 'hermitian' else np.asarray(V, dtype=np.int64)

    def bilinear(self, U, V) -> np.ndarray:
        """U^T G sigma(V) for column vectors or matrices of column vectors."""
        U = np.asarray(U, dtype=np.int64)
        V = np.asarray(V, dtype=np.int64)
        U2 = U[:, None] if U.ndim == 1 else U
        V2 = V[:, None] if V.ndim == 1 else V
        out = linalg.matmul(self.field, linalg.matmul(self.field, U2.T, self.gram), self.__sigma(V2))
        if U.ndim == 1 and V.ndim == 1:
            return int(out[0, 0])
        return out

    def quadratic(self, V) -> np.ndarray:
        """Q of a vector (int) or of each row of a 2-d batch."""
        F = self.field
        V = np.asarray(V, dtype=np.int64)
        rows = np.atleast_2d(V)
        if self.kind == 'quadratic':
            QV = linalg.matmul(F, rows, self.quad.T)
            vals = np.zeros(len(rows), dtype=np.int64)
            for i in range(self.n):
                vals = F.add(vals, F.mul(rows[:, i], QV[:, i]))
        elif self.kind == 'symmetric':
            GV = linalg.matmul(F, rows, self.gram)
            vals = np.zeros(len(rows), dtype=np.int64)
            for i in range(self.n):
                vals = F.add(vals, F.mul(rows[:, i], GV[:, i]))
            vals = F.mul(vals, int(F.inv(2)))
        else:
            raise FormError(f'{self.kind} forms have no quadratic form')
        return int(vals[0]) if V.ndim == 1 else vals

    def self_values(self, V) -> np.ndarray:
        """B(v, v) for each row of a batch (hermitian: v^T G conj(v))."""
        F = self.field
        rows = np.atleast_2d(np.asarray(V, dtype=np.int64))
        GV = linalg.matmul(F, rows, self.gram)
        sv = self.__sigma(rows)
        vals = np.zeros(len(rows), dtype=np.int64)
        for i in range(self.n):
            vals = F.add(vals, F.mul(GV[:, i], sv[:, i]))
        return vals

    def preserves(self, g) -> bool:
        F = self.field
        g = np.asarray(g, dtype=np.int64)
        if self.kind == 'none':
            return True
        if not np.array_equal(self.bilinear(g, g), self.gram):
            return False
        if self.kind == 'quadratic':
            return bool(np.array_equal(self.quadratic(g.T), np.diagonal(self.quad)))
        return True

    def is_nondegenerate(self) -> bool:
        return linalg.rank(self.field, self.gram) == self.n

    def restrict(self, B) -> 'FormSpec':
        """The form on the span of the columns of B, in that basis."""
        B = np.asarray(B, dtype=np.int64)
        gram = self.bilinear(B, B)
        quad = None
        if self.kind == 'quadratic':
            quad = np.triu(gram, 1)
            quad[np.arange(B.shape[1]), np.arange(B.shape[1])] = self.quadratic(B.T)
        sub = FormSpec(self.kind, self.field, gram, quad)
        if sub.is_orthogonal and sub.n % 2 == 0 and sub.n and sub.is_nondegenerate():
            sub.eps = witt_type(sub)
        return sub

    def perp(self, B) -> np.ndarray:
        """Basis (columns) of the orthogonal complement of the span of the columns of B."""
        B = np.asarray(B, dtype=np.int64)
        if B.shape[1] == 0:
            return linalg.identity(self.n)
        # B(b, v) = b^T G sigma(v) = 0 for all b  <=>  (b^T G) sigma(v) = 0
        W = linalg.nullspace(self.field, linalg.matmul(self.field, B.T, self.gram))
        return self.__sigma(W)

def standard_gram(kind: str, n: int, F: FieldSpec, eps: int = 0) -> FormSpec:
    """The fixed forms: symplectic [[0, I], [-I, 0]]; hermitian identity; orthogonal type + the hyperbolic
    [[0, I], [I, 0]] (plus one coordinate with Q = x^2 in odd dimension); type - has m-1 hyperbolic pairs followed by
    the anisotropic plane Q = x^2 - nu y^2 (odd q, nu the least non-square; Gram diag(2, -2nu)) or
    Q = x^2 + xy + mu y^2 (even q, mu the least element of absolute trace 1). Coordinates run
    e_1..e_m, f_1..f_m, then the extra coordinates."""
    one, minus = 1, int(F.neg(1))
    G = np.zeros((n, n), dtype=np.int64)
    if kind == 'none':
        return FormSpec(kind, F, linalg.identity(n))
    if kind == 'hermitian':
        return FormSpec(kind, F, linalg.identity(n))
    if kind == 'symplectic':
        if n % 2:
            raise FormError('symplectic forms need even dimension')
        m = n // 2
        G[np.arange(m), np.arange(m, n)] = one
        G[np.arange(m, n), np.arange(m)] = minus
        return FormSpec(kind, F, G)
    if F.p == 2 and n % 2:
        raise FormError('odd-dimensional orthogonal groups in characteristic 2 are not supported')
    if n % 2 == 0 and eps not in (1, -1):
        raise FormError('even-dimensional orthogonal forms need a type +1 or -1')
    half = n // 2 if n % 2 == 0 else (n - 1) // 2
    m = half if (n % 2 or eps == 1) else half - 1
    idx_e = list(range(m))
    idx_f = list(range(m, 2 * m))
    G[idx_e, idx_f] = one
    G[idx_f, idx_e] = one
    extra = list(range(2 * m, n))
    if F.p == 2:
        quad = np.triu(G, 1)
        if extra:
            a, b = extra
            mu = next(c for c in range(1, F.q) if int(F.trace_to_subfield(c, 1)) == 1)
            G[a, b] = G[b, a] = 1
            quad[a, b] = 1
            quad[a, a] = 1
            quad[b, b] = mu
        return FormSpec('quadratic', F, G, quad, eps if n % 2 == 0 else 0)
    if len(extra) == 1:
        G[extra[0], extra[0]] = 2
    elif extra:
        a, b = extra
        nu = F.nonsquare()
        G[a, a] = 2
        G[b, b] = int(F.mul(2, F.neg(nu)))
    return FormSpec('symmetric', F, G, None, eps if n % 2 == 0 else 0)

def symplectic_pairs(form: FormSpec) -> list:
    """Hyperbolic pairs (e, f) with B(e, f) = 1 spanning a nondegenerate alternating (char 2: polar) space."""
    F = form.field
    work = [linalg.identity(form.n)[:, i] for i in range(form.n)]
    pairs = []
    while work:
        e = work.pop(0)
        partner = next((i for i, w in enumerate(work) if form.bilinear(e, w) != 0), None)
        if partner is None:
            if np.any(e):
                raise FormError('form is degenerate')
            continue
        f = work.pop(partner)
        f = F.mul(f, int(F.inv(form.bilinear(e, f))))
        rest = []
        for w in work:
            w = F.add(w, F.mul(f, form.bilinear(w, e)))
            w = F.sub(w, F.mul(e, form.bilinear(w, f)))
            rest.append(w)
        work = [w for w in rest if np.any(w)]
        pairs.append((e, f))
    return pairs

def witt_type(form: FormSpec) -> int:
    """+1 or -1 for a nondegenerate even-dimensional orthogonal form."""
    F = form.field
    if not form.is_orthogonal or form.n % 2:
        return 0
    if form.kind == 'symmetric':
        m = form.n // 2
        d = linalg.det(F, form.gram)
        if d == 0:
            raise FormError('form is degenerate')
        disc = d if m % 2 == 0 else int(F.neg(d))
        return 1 if F.is_square(disc) else -1
    arf = 0
    for e, f in symplectic_pairs(form):
        arf = int(F.add(arf, F.mul(form.quadratic(e), form.quadratic(f))))
    return 1 if int(F.trace_to_subfield(arf, 1)) == 0 else -1

def isometric_basis(space: FormSpec, target: FormSpec, rng=None, batches: int = 64) -> np.ndarray:
    """Columns b_1..b_n in `space` with B(b_i, b_j) = target.gram[i, j] (and Q(b_i) = Q_target(e_i)).

    Vectors are drawn one at a time, uniformly among the independent vectors extending the partial basis, so for
    space == target the result is a uniformly random isometry. Raises FormError when the forms are not isometric."""
    F = space.field
    rng = rng if rng is not None else np.random.default_rng(0)
    n = target.n
    if space.n != n or space.kind != target.kind:
        raise FormError('forms of different kinds or dimensions')
    hermitian = space.kind == 'hermitian'
    chosen = np.zeros((n, 0), dtype=np.int64)
    for i in range(n):
        if i:
            A = linalg.matmul(F, chosen.T, space.gram)
            rhs = target.gram[:i, i]
            try:
                x0 = linalg.solve(F, A, rhs)
            except FieldError:
                raise FormError(f'no vector extends the partial basis at position {i}')
            N = linalg.nullspace(F, A)
        else:
            x0 = np.zeros(n, dtype=np.int64)
            N = linalg.identity(n)
        found = None
        for _ in range(batches):
            C = rng.integers(0, F.q, size=(256, N.shape[1]))
            cand = F.add(x0[None, :], linalg.matmul(F, C, N.T)) if N.shape[1] else x0[None, :]
            if hermitian:
                cand = F.conj(cand)
            if space.kind == 'quadratic':
                ok = space.quadratic(cand) == int(target.quad[i, i])
            elif space.kind in ('symmetric', 'hermitian'):
                ok = space.self_values(cand) == int(target.gram[i, i])
            else:
                ok = np.ones(len(cand), dtype=bool)
            for v in cand[ok]:
                trial = np.hstack([chosen, v[:, None]])
                if linalg.rank(F, trial) == i + 1:
                    found = v
                    break
            if found is not None or N.shape[1] == 0:
                break
        if found is None:
            raise FormError(f'no vector extends the partial basis at position {i}')
        chosen = np.hstack([chosen, found[:, None]])
    return chosen

def reflection(form: FormSpec, v) -> np.ndarray:
    """Matrix of x -> x - (B(x, v) / Q(v)) v for an anisotropic v."""
    F = form.field
    v = np.asarray(v, dtype=np.int64)
    Qv = form.quadratic(v)
    if Qv == 0:
        raise FormError('reflection in a singular vector')
    Gv = linalg.matmul(F, form.gram.T, v[:, None])[:, 0]
    coef = F.mul(v[:, None], F.mul(Gv[None, :], int(F.inv(Qv))))
    return F.sub(linalg.identity(form.n), coef)

def _anisotropic_in(form: FormSpec, S) -> np.ndarray:
    """A vector of the span of the columns of S with Q != 0; the span must be nondegenerate."""
    F = form.field
    cols = np.asarray(S, dtype=np.int64).T
    vals = form.quadratic(cols)
    hit = np.nonzero(vals)[0]
    if len(hit):
        return cols[hit[0]]
    # all Q(b_i) = 0, so Q(b_i + b_j) = B(b_i, b_j), and some pair pairs nontrivially
    for i in range(len(cols)):
        for j in range(i + 1, len(cols)):
            u = F.add(cols[i], cols[j])
            if form.quadratic(u) != 0:
                return u
    raise FormError('totally singular subspace has no anisotropic vector')

def _fix_orthogonal_frame(form: FormSpec, g) -> list:
    F = form.field
    n = form.n
    h = np.asarray(g, dtype=np.int64)
    I = linalg.identity(n)
    E = np.zeros((n, 0), dtype=np.int64)
    vectors = []
    for _ in range(n):
        if np.array_equal(h, I):
            break
        e = _anisotropic_in(form, form.perp(E))
        he = linalg.matvec(F, h, e)
        if not np.array_equal(he, e):
            v = F.sub(he, e)
            if form.quadratic(v) != 0:
                steps = [v]
            else:
                # Q(he + e) = 4 Q(e); r_{he+e} sends he to -e and r_e sends -e back to e
                steps = [F.add(he, e), e]
            for u in steps:
                h = linalg.matmul(F, reflection(form, u), h)
                vectors.append(u)
            if not np.array_equal(linalg.matvec(F, h, e), e):
                raise FormError('matrix does not preserve the form')
        E = np.hstack([E, e[:, None]])
    if not np.array_equal(h, I):
        raise FormError('matrix does not preserve the form')
    return vectors

def reflection_factorization(form: FormSpec, g, rng=None, max_steps: int = None) -> list:
    """Anisotropic vectors v_1..v_r with g = r_{v_1} ... r_{v_r}.

    Odd characteristic: an orthogonal frame e_1, e_2, ... of anisotropic vectors is built one vector at a time, and
    each e_k is moved back to itself by at most two reflections inside e_1..e_{k-1}^perp, so r <= 2n and the
    result is deterministic. Characteristic 2: each step picks x with v = hx - x anisotropic and replaces h by
    r_v h; when the image of h - 1 is totally singular a reflection in a random anisotropic vector is peeled off
    first."""
    F = form.field
    if F.p != 2:
        return _fix_orthogonal_frame(form, g)
    rng = rng if rng is not None else np.random.default_rng(0)
    n = form.n
    h = np.asarray(g, dtype=np.int64)
    I = linalg.identity(n)
    vectors = []
    max_steps = max_steps or 4 * n + 8
    for _ in range(max_steps):
        if np.array_equal(h, I):
            return vectors
        D = F.sub(h, I)
        trial = np.vstack([I, rng.integers(0, F.q, size=(64, n))])
        V = linalg.matmul(F, trial, D.T)
        vals = form.quadratic(V)
        hit = np.nonzero(vals)[0]
        if len(hit):
            v = V[hit[0]]
        else:
            cand = rng.integers(0, F.q, size=(256, n))
            good = np.nonzero(form.quadratic(cand))[0]
            if not len(good):
                raise FormError('no anisotropic vector found')
            v = cand[good[0]]
        h = linalg.matmul(F, reflection(form, v), h)
        vectors.append(v)
    raise FormError('reflection factorization did not terminate')
