import numpy as np

from src.ff import FieldSpec, FieldError
from src.poly import Poly

def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)

def matmul(F: FieldSpec, A, B) -> np.ndarray:
    """Product of (batches of) matrices over F; leading dimensions broadcast."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if F.k == 1:
        return np.matmul(A, B) % F.p
    m = A.shape[-1]
    out = None
    for l in range(m):
        term = F.mul(A[..., :, l, None], B[..., None, l, :])
        out = term if out is None else F.add(out, term)
    return out

def matvec(F: FieldSpec, A, v) -> np.ndarray:
    return matmul(F, A, np.asarray(v, dtype=np.int64)[..., None])[..., 0]

def transpose(A) -> np.ndarray:
    return np.swapaxes(np.asarray(A), -1, -2)

def conj(F: FieldSpec, A) -> np.ndarray:
    return F.conj(np.asarray(A, dtype=np.int64))

def rref(F: FieldSpec, A):
    """Reduced row echelon form.

    Return
    - R (np.ndarray): the reduced matrix.
    - pivots (list): pivot column of each nonzero row."""
    R = np.array(A, dtype=np.int64, copy=True)
    if R.size == 0:
        return R, []
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = F.mul(R[r], int(F.inv(int(R[r, c]))))
        others = np.nonzero(R[:, c])[0]
        others = others[others != r]
        if len(others):
            R[others] = F.sub(R[others], F.mul(R[others, c][:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots

def rank(F: FieldSpec, A) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])

def nullspace(F: FieldSpec, A) -> np.ndarray:
    """Basis of {x : A x = 0} as the columns of the returned matrix."""
    A = np.asarray(A, dtype=np.int64)
    cols = A.shape[1]
    R, pivots = rref(F, A)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, fcol in enumerate(free):
        basis[fcol, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = F.neg(int(R[i, fcol]))
    return basis

def column_space(F: FieldSpec, A) -> np.ndarray:
    """Independent columns spanning the column space of A (a subset of A's columns)."""
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return A.reshape(A.shape[0], 0)
    _, pivots = rref(F, A)
    return A[:, pivots]

def det(F: FieldSpec, A) -> int:
    R = np.array(A, dtype=np.int64, copy=True)
    n = R.shape[0]
    result = 1
    for c in range(n):
        nz = np.nonzero(R[c:, c])[0]
        if len(nz) == 0:
            return 0
        i = c + int(nz[0])
        if i != c:
            R[[c, i]] = R[[i, c]]
            result = int(F.neg(result))
        piv = int(R[c, c])
        result = int(F.mul(result, piv))
        inv = int(F.inv(piv))
        below = np.nonzero(R[c + 1:, c])[0] + c + 1
        if len(below):
            factors = F.mul(R[below, c], inv)
            R[below] = F.sub(R[below], F.mul(factors[:, None], R[c][None, :]))
    return result

def inverse(F: FieldSpec, A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    R, pivots = rref(F, np.hstack([A, identity(n)]))
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise FieldError('matrix is singular')
    return R[:, n:]

def solve(F: FieldSpec, A, b) -> np.ndarray:
    """One solution x of A x = b; raises FieldError when inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    cols = A.shape[1]
    R, pivots = rref(F, np.hstack([A, b]))
    if cols in pivots:
        raise FieldError('inconsistent linear system')
    x = np.zeros(cols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, cols]
    return x

def charpoly(F: FieldSpec, A) -> Poly:
    """Characteristic polynomial det(xI - A) via reduction to Hessenberg form."""
    H = np.array(A, dtype=np.int64, copy=True)
    n = H.shape[0]
    for m in range(1, n - 1):
        nz = np.nonzero(H[m:, m - 1])[0]
        if len(nz) == 0:
            continue
        i = m + int(nz[0])
        if i != m:
            H[[i, m]] = H[[m, i]]
            H[:, [i, m]] = H[:, [m, i]]
        t = int(F.inv(int(H[m, m - 1])))
        for i in range(m + 1, n):
            u = int(F.mul(int(H[i, m - 1]), t))
            if u == 0:
                continue
            H[i] = F.sub(H[i], F.mul(u, H[m]))
            H[:, m] = F.add(H[:, m], F.mul(u, H[:, i]))
    x = Poly.x(F)
    polys = [Poly.const(F, 1)]
    for m in range(1, n + 1):
        pm = (x - Poly.const(F, int(H[m - 1, m - 1]))) * polys[m - 1]
        t = 1
        for i in range(1, m):
            t = int(F.mul(t, int(H[m - i, m - i - 1])))
            coef = int(F.mul(t, int(H[m - i - 1, m - 1])))
            pm = pm - polys[m - i - 1].scale(coef)
        polys.append(pm)
    return polys[n]

def poly_at_matrix(F: FieldSpec, f: Poly, A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for c in reversed(f.coeffs):
        out = matmul(F, out, A)
        out[np.arange(n), np.arange(n)] = F.add(out[np.arange(n), np.arange(n)], c)
    return out

def batch_det(F: FieldSpec, A) -> np.ndarray:
    """Determinants of a batch (B, n, n) by simultaneous Gaussian elimination."""
    A = np.array(A, dtype=np.int64, copy=True)
    B, n = A.shape[0], A.shape[1]
    idx = np.arange(B)
    result = np.ones(B, dtype=np.int64)
    for c in range(n):
        nz = A[:, c:, c] != 0
        piv = c + np.argmax(nz, axis=1)
        swap = piv != c
        if np.any(swap):
            top, other = A[idx, c].copy(), A[idx, piv].copy()
            A[idx, c], A[idx, piv] = other, top
            result[swap] = F.neg(result[swap])
        pv = A[:, c, c]
        result = F.mul(result, pv)
        inv = F.inv(np.where(pv == 0, 1, pv))
        factors = F.mul(A[:, c + 1:, c], inv[:, None])
        A[:, c + 1:, :] = F.sub(A[:, c + 1:, :], F.mul(factors[:, :, None], A[:, c, None, :]))
    return result

def kernel_dim(F: FieldSpec, A) -> int:
    A = np.asarray(A)
    return A.shape[1] - rank(F, A)

def order(F: FieldSpec, A, limit: int = 1 << 20) -> int:
    """Multiplicative order of an invertible matrix by repeated multiplication."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    I = identity(n)
    cur = A.copy()
    for k in range(1, limit + 1):
        if np.array_equal(cur, I):
            return k
        cur = matmul(F, cur, A)
    raise FieldError(f'matrix order exceeds {limit}')

def mat_pow(F: FieldSpec, A, e: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if e < 0:
        return mat_pow(F, inverse(F, A), -e)
    result = identity(A.shape[-1])
    base = A
    while e:
        if e & 1:
            result = matmul(F, result, base)
        base = matmul(F, base, base)
        e >>= 1
    return result

def block_diag(*blocks) -> np.ndarray:
    blocks = [np.atleast_2d(np.asarray(b, dtype=np.int64)) for b in blocks]
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=np.int64)
    i = 0
    for b in blocks:
        d = b.shape[0]
        out[i:i + d, i:i + d] = b
        i += d
    return out

def format_matrix(F: FieldSpec, A) -> str:
    """Matrix literal: semicolon-separated rows of field literals."""
    return ';'.join(' '.join(F.literal(int(c)) for c in row) for row in np.asarray(A))

def parse_matrix(text: str) -> tuple:
    """Inverse of format_matrix; returns (FieldSpec, matrix)."""
    from src.ff import parse_literal
    rows = [r.split() for r in text.strip().split(';') if r.strip()]
    elems = [[parse_literal(c) for c in row] for row in rows]
    if not elems or any(len(r) != len(elems) for r in elems):
        raise FieldError('matrix literal must be square')
    F = elems[0][0].spec
    if any(e.spec != F for r in elems for e in r):
        raise FieldError('mixed fields in matrix literal')
    return F, np.array([[e.code for e in r] for r in elems], dtype=np.int64)
