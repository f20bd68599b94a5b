"""Exact dense linear algebra over Z and over finite fields.

Matrices are 2-d numpy arrays with dtype=object.  Integer matrices hold
Python ints (arbitrary precision); matrices over a finite field hold
field elements (see fields.FFElement), with plain ints 0/1 tolerated as
universal zero/one.  Everything here is deterministic: no implicit
randomness, fixed pivot rules.
"""

from __future__ import annotations

import numpy as np


class IntegerRing:
    """The ring Z, used as the `base` tag for integer matrices."""

    is_field = False
    name = "Z"
    zero = 0
    one = 1

    def coerce(self, v):
        if isinstance(v, (int, np.integer)):
            return int(v)
        raise TypeError(f"not an integer: {v!r}")

    def __repr__(self):
        return "Z"


ZZ = IntegerRing()


# ---------------------------------------------------------------------------
# construction helpers

def mat(rows, ncols=None):
    """Build an object-dtype matrix from nested lists; ncols disambiguates 0-row shapes."""
    rows = list(rows)
    if not rows:
        return np.zeros((0, 0 if ncols is None else ncols), dtype=object)
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, r in enumerate(rows):
        assert len(r) == out.shape[1], "ragged rows"
        for j, v in enumerate(r):
            out[i, j] = v
    return out


def zeros(r, c):
    out = np.empty((r, c), dtype=object)
    out[...] = 0
    return out


def eye(n):
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def copy_mat(A):
    return A.copy()


def mat_eq(A, B) -> bool:
    if A.shape != B.shape:
        return False
    if A.size == 0:
        return True
    return bool(np.equal(A, B).all())


def is_zero_mat(A) -> bool:
    if A.size == 0:
        return True
    return bool(np.equal(A, 0).all())


def hstack(mats):
    mats = list(mats)
    assert mats
    r = mats[0].shape[0]
    assert all(m.shape[0] == r for m in mats)
    return np.concatenate(mats, axis=1) if mats else zeros(r, 0)


def vstack(mats):
    mats = list(mats)
    assert mats
    c = mats[0].shape[1]
    assert all(m.shape[1] == c for m in mats)
    return np.concatenate(mats, axis=0)


def block_diag(mats):
    mats = list(mats)
    r = sum(m.shape[0] for m in mats)
    c = sum(m.shape[1] for m in mats)
    out = zeros(r, c)
    i = j = 0
    for m in mats:
        out[i:i + m.shape[0], j:j + m.shape[1]] = m
        i += m.shape[0]
        j += m.shape[1]
    return out


def mmul(A, B, base=ZZ):
    """Exact matrix product.  Dispatches to a fast int64 path for prime fields."""
    assert A.shape[1] == B.shape[0], (A.shape, B.shape)
    if A.shape[0] == 0 or B.shape[1] == 0 or A.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    if base is not ZZ and base.is_field and base.k == 1:
        p = base.p
        C = (_residues(A, p) @ _residues(B, p)) % p
        return _from_residues(C, base)
    return np.dot(A, B)


def mmul_chain(*mats, base=ZZ):
    out = mats[0]
    for m in mats[1:]:
        out = mmul(out, m, base)
    return out


def mpow(A, k, base=ZZ):
    assert A.shape[0] == A.shape[1]
    out = eye(A.shape[0])
    for _ in range(k):
        out = mmul(out, A, base)
    return out


def kron(A, B):
    if A.size == 0 or B.size == 0:
        return zeros(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])
    return np.kron(A, B)


def scalar_mul(c, A):
    if A.size == 0:
        return A.copy()
    return c * A


# ---------------------------------------------------------------------------
# prime-field residue conversion

def _residues(A, p):
    out = np.empty(A.shape, dtype=np.int64)
    flat_in = A.ravel()
    flat_out = out.ravel()
    for i, v in enumerate(flat_in):
        flat_out[i] = int(v) % p
    return out


def _from_residues(M, field):
    elems = field.element_by_residue
    out = np.empty(M.shape, dtype=object)
    flat_in = M.ravel()
    flat_out = out.ravel()
    for i, v in enumerate(flat_in):
        flat_out[i] = elems[int(v)]
    return out


# ---------------------------------------------------------------------------
# elimination over a field

def _rref_mod_p(M, p):
    """Row-reduce int64 matrix mod p in place; returns (M, pivots, T) with T@orig=M."""
    m, n = M.shape
    T = np.eye(m, dtype=np.int64)
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        piv = -1
        for i in range(row, m):
            if M[i, col] % p:
                piv = i
                break
        if piv < 0:
            continue
        if piv != row:
            M[[row, piv]] = M[[piv, row]]
            T[[row, piv]] = T[[piv, row]]
        inv = pow(int(M[row, col]), p - 2, p)
        M[row] = (M[row] * inv) % p
        T[row] = (T[row] * inv) % p
        for i in range(m):
            if i != row and M[i, col]:
                f = int(M[i, col])
                M[i] = (M[i] - f * M[row]) % p
                T[i] = (T[i] - f * T[row]) % p
        pivots.append(col)
        row += 1
    return M, pivots, T


def _rref_generic(A, field):
    """Gauss-Jordan on object entries; used for non-prime fields."""
    m, n = A.shape
    M = A.copy()
    for idx in range(M.size):
        v = M.ravel()[idx]
        if isinstance(v, (int, np.integer)):
            M.ravel()[idx] = field.embed(int(v))
    T = np.empty((m, m), dtype=object)
    for i in range(m):
        for j in range(m):
            T[i, j] = field.one if i == j else field.zero
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        piv = -1
        for i in range(row, m):
            if M[i, col] != field.zero:
                piv = i
                break
        if piv < 0:
            continue
        if piv != row:
            M[[row, piv]] = M[[piv, row]]
            T[[row, piv]] = T[[piv, row]]
        inv = M[row, col].inv()
        M[row] = M[row] * inv
        T[row] = T[row] * inv
        for i in range(m):
            if i != row and M[i, col] != field.zero:
                f = M[i, col]
                M[i] = M[i] - f * M[row]
                T[i] = T[i] - f * T[row]
        pivots.append(col)
        row += 1
    return M, pivots, T


def rref(A, field):
    """Reduced row echelon form.  Returns (R, pivots, T) with T unimodular, T@A = R."""
    if field.k == 1:
        M, pivots, T = _rref_mod_p(_residues(A, field.p), field.p)
        return _from_residues(M, field), pivots, _from_residues(T, field)
    return _rref_generic(A, field)


def rank(A, field) -> int:
    if A.size == 0:
        return 0
    if field.k == 1:
        _, pivots, _ = _rref_mod_p(_residues(A, field.p), field.p)
        return len(pivots)
    _, pivots, _ = _rref_generic(A, field)
    return len(pivots)


def solve(A, B, field):
    """One solution X of A @ X = B over the field, or None.  Free variables are set to 0."""
    m, n = A.shape
    assert B.shape[0] == m
    if n == 0:
        if B.size and rank(B, field) > 0:
            return None
        return zeros(0, B.shape[1])
    R, pivots, _ = rref(hstack([A, B]), field)
    for col in pivots:
        if col >= n:
            return None
    X = zeros(n, B.shape[1])
    if field.k > 1:
        for idx in range(X.size):
            X.ravel()[idx] = field.zero
    for r, col in enumerate(pivots):
        for j in range(B.shape[1]):
            X[col, j] = R[r, n + j]
    return X


def nullspace(A, field):
    """Basis of the right kernel, as columns of the returned matrix."""
    m, n = A.shape
    if n == 0:
        return zeros(0, 0)
    if m == 0:
        return _field_eye(n, field)
    R, pivots, _ = rref(A, field)
    free = [j for j in range(n) if j not in pivots]
    K = zeros(n, len(free))
    if field.k > 1:
        for idx in range(K.size):
            K.ravel()[idx] = field.zero
    one = field.one
    for c, j in enumerate(free):
        K[j, c] = one
        for r, col in enumerate(pivots):
            K[col, c] = -R[r, j]
    return K


def _field_eye(n, field):
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = field.one if i == j else field.zero
    return out


def inv_field(A, field):
    n = A.shape[0]
    assert A.shape[1] == n
    X = solve(A, eye(n), field)
    if X is None or rank(A, field) < n:
        return None
    return X


def column_space_basis(A, field):
    """Columns of A forming a basis of the column space (pivot columns)."""
    if A.shape[1] == 0:
        return A.copy()
    _, pivots, _ = rref(A, field)
    return A[:, pivots].copy() if pivots else zeros(A.shape[0], 0)


# ---------------------------------------------------------------------------
# Smith normal form over Z

class SmithForm:
    """U @ A @ V = D with U, V unimodular and diagonal D, d_i | d_{i+1} >= 0."""

    def __init__(self, U, D, V, Uinv, Vinv):
        self.U = U
        self.D = D
        self.V = V
        self.Uinv = Uinv
        self.Vinv = Vinv

    @property
    def diagonal(self):
        return [int(self.D[i, i]) for i in range(min(self.D.shape))]

    def nonunit_invariants(self):
        return [d for d in self.diagonal if d != 1]


def _find_pivot(D, t):
    # smallest absolute nonzero entry; ties broken row-major
    best = None
    m, n = D.shape
    for i in range(t, m):
        for j in range(t, n):
            v = D[i, j]
            if v != 0 and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
    return best


def smith_normal_form(A) -> SmithForm:
    """Deterministic SNF with tracked transforms (pivot = min |entry|, row-major ties)."""
    m, n = A.shape
    D = A.astype(object).copy()
    U, Ui = eye(m), eye(m)
    V, Vi = eye(n), eye(n)

    def row_add(i, j, c):  # row_i += c * row_j
        D[i, :] = D[i, :] + c * D[j, :]
        U[i, :] = U[i, :] + c * U[j, :]
        Ui[:, j] = Ui[:, j] - c * Ui[:, i]

    def col_add(j, i, c):  # col_j += c * col_i
        D[:, j] = D[:, j] + c * D[:, i]
        V[:, j] = V[:, j] + c * V[:, i]
        Vi[i, :] = Vi[i, :] - c * Vi[j, :]

    def row_swap(i, j):
        D[[i, j], :] = D[[j, i], :]
        U[[i, j], :] = U[[j, i], :]
        Ui[:, [i, j]] = Ui[:, [j, i]]

    def col_swap(i, j):
        D[:, [i, j]] = D[:, [j, i]]
        V[:, [i, j]] = V[:, [j, i]]
        Vi[[i, j], :] = Vi[[j, i], :]

    def row_neg(i):
        D[i, :] = -D[i, :]
        U[i, :] = -U[i, :]
        Ui[:, i] = -Ui[:, i]

    t = 0
    while True:
        piv = _find_pivot(D, t)
        if piv is None:
            break
        _, pi, pj = piv
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        if D[t, t] < 0:
            row_neg(t)
        dirty = False
        for i in range(t + 1, m):
            if D[i, t] != 0:
                q = D[i, t] // D[t, t]
                row_add(i, t, -q)
                if D[i, t] != 0:
                    dirty = True
        for j in range(t + 1, n):
            if D[t, j] != 0:
                q = D[t, j] // D[t, t]
                col_add(j, t, -q)
                if D[t, j] != 0:
                    dirty = True
        if dirty:
            continue
        # pivot must divide the remaining block for the divisibility chain
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if D[i, j] % D[t, t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_add(t, offender, 1)
            continue
        t += 1
    return SmithForm(U, D, V, Ui, Vi)


def int_rank(A) -> int:
    return sum(1 for d in smith_normal_form(A).diagonal if d != 0)


def bareiss_det(A) -> int:
    """Exact determinant of a square integer matrix (fraction-free elimination)."""
    n = A.shape[0]
    assert A.shape[1] == n
    if n == 0:
        return 1
    M = [[int(A[i, j]) for j in range(n)] for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def solve_int(A, B):
    """Integer solution X of A @ X = B, or None.  B may be a matrix."""
    m, n = A.shape
    assert B.shape[0] == m
    if n == 0:
        return None if not is_zero_mat(B) else zeros(0, B.shape[1])
    s = smith_normal_form(A)
    C = mmul(s.U, B)
    Y = zeros(n, B.shape[1])
    r = min(m, n)
    for j in range(B.shape[1]):
        for i in range(m):
            d = int(s.D[i, i]) if i < r else 0
            c = int(C[i, j])
            if d == 0:
                if c != 0:
                    return None
            else:
                if c % d != 0:
                    return None
                Y[i, j] = c // d
    return mmul(s.V, Y)


def nullspace_int(A):
    """Basis (columns) of the integer kernel of A; the kernel lattice is saturated."""
    m, n = A.shape
    if n == 0:
        return zeros(0, 0)
    if m == 0:
        return eye(n)
    s = smith_normal_form(A)
    r = min(m, n)
    zero_cols = [j for j in range(n) if j >= r or int(s.D[j, j]) == 0]
    return s.V[:, zero_cols].copy() if zero_cols else zeros(n, 0)


def column_lattice_basis(A):
    """Basis matrix for the lattice spanned by the columns of A."""
    s = smith_normal_form(A)
    cols = []
    r = min(A.shape)
    for i in range(r):
        d = int(s.D[i, i])
        if d != 0:
            cols.append(scalar_mul(d, s.Uinv[:, i:i + 1]))
    return hstack(cols) if cols else zeros(A.shape[0], 0)


def lattice_contains(L, B) -> bool:
    """Whether every column of B lies in the column lattice of L."""
    return solve_int(L, B) is not None


def lattice_equal(L1, L2) -> bool:
    return lattice_contains(L1, L2) and lattice_contains(L2, L1)
