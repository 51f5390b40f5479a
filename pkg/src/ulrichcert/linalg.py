"""Row reduction over F_p.

Two compiled kernels do all the heavy lifting:

* `sparse_reduce` reduces rows (CSR, columns sorted so that column 0 is the
  largest monomial) by a set of monic "reducer" rows with distinct leading
  columns, optionally recording the multipliers used.  This is the
  symbolic-preprocessing half of F4 and also the division algorithm.
* `dense_rref` is Gauss-Jordan on an int64 matrix with lazy reduction mod p
  (entries are only reduced when they are about to be used as pivots).
"""

import numpy as np
import numba

LAZY_LIMIT = 1 << 20  # primes below this can skip per-update reductions


@numba.njit(cache=True)
def _grow(a, need):
    if need <= a.shape[0]:
        return a
    cap = max(need, 2 * a.shape[0] + 16)
    b = np.empty(cap, a.dtype)
    b[: a.shape[0]] = a
    return b


@numba.njit(cache=True)
def sparse_reduce(ncols, red_ptr, red_col, red_val, piv, tr_ptr, tr_col, tr_val, p, want_quot):
    """Reduce each row of (tr_ptr, tr_col, tr_val) by the reducer rows.

    piv[c] is the index of the reducer whose leading column is c, or -1.
    Reducer rows are monic and store their leading entry first.
    Returns (out_ptr, out_col, out_val, q_row, q_red, q_val).
    """
    lazy = p < 1048576
    ntr = tr_ptr.shape[0] - 1
    acc = np.zeros(ncols, np.int64)
    out_ptr = np.zeros(ntr + 1, np.int64)
    out_col = np.empty(16, np.int64)
    out_val = np.empty(16, np.int64)
    q_row = np.empty(16, np.int64)
    q_red = np.empty(16, np.int64)
    q_val = np.empty(16, np.int64)
    nout = 0
    nq = 0
    for r in range(ntr):
        start = ncols
        for t in range(tr_ptr[r], tr_ptr[r + 1]):
            c = tr_col[t]
            acc[c] = (acc[c] + tr_val[t]) % p
            if c < start:
                start = c
        for c in range(start, ncols):
            a = acc[c]
            if a == 0:
                continue
            a = a % p
            acc[c] = 0
            if a == 0:
                continue
            k = piv[c]
            if k >= 0:
                if lazy:
                    for t in range(red_ptr[k] + 1, red_ptr[k + 1]):
                        acc[red_col[t]] -= a * red_val[t]
                else:
                    for t in range(red_ptr[k] + 1, red_ptr[k + 1]):
                        j = red_col[t]
                        acc[j] = (acc[j] - a * red_val[t]) % p
                if want_quot:
                    q_row = _grow(q_row, nq + 1)
                    q_red = _grow(q_red, nq + 1)
                    q_val = _grow(q_val, nq + 1)
                    q_row[nq] = r
                    q_red[nq] = k
                    q_val[nq] = a
                    nq += 1
            else:
                out_col = _grow(out_col, nout + 1)
                out_val = _grow(out_val, nout + 1)
                out_col[nout] = c
                out_val[nout] = a
                nout += 1
        out_ptr[r + 1] = nout
    return out_ptr, out_col[:nout], out_val[:nout], q_row[:nq], q_red[:nq], q_val[:nq]


@numba.njit(cache=True)
def _inv(a, p):
    r = 1
    b = a % p
    e = p - 2
    while e:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


@numba.njit(cache=True)
def dense_rref(A, p):
    """In-place reduced row echelon form mod p; returns (rank, pivot columns)."""
    n, m = A.shape
    lazy = p < 1048576
    r = 0
    pivs = np.empty(min(n, m), np.int64)
    nz = np.empty(m, np.int64)
    for c in range(m):
        if r == n:
            break
        piv = -1
        for i in range(r, n):
            v = A[i, c] % p
            A[i, c] = v
            if v != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, m):
                t = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = t
        inv = _inv(A[r, c], p)
        k = 0
        for j in range(c, m):
            v = A[r, j] % p
            if v != 0:
                v = v * inv % p
                nz[k] = j
                k += 1
            A[r, j] = v
        sparse = 4 * k < (m - c)
        for i in range(n):
            if i == r:
                continue
            f = A[i, c] % p
            if f == 0:
                A[i, c] = 0
                continue
            if lazy:
                if sparse:
                    for t in range(k):
                        j = nz[t]
                        A[i, j] -= f * A[r, j]
                else:
                    for j in range(c, m):
                        A[i, j] -= f * A[r, j]
            else:
                for t in range(k):
                    j = nz[t]
                    A[i, j] = (A[i, j] - f * A[r, j]) % p
            A[i, c] = 0
        pivs[r] = c
        r += 1
    for i in range(n):
        for j in range(m):
            A[i, j] = A[i, j] % p
    return r, pivs[:r]


def as_matrix(rows, ncols=None):
    A = np.array(rows, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(0 if A.size == 0 else 1, -1) if ncols is None else A.reshape(-1, ncols)
    if ncols is not None and A.size == 0:
        A = np.zeros((len(rows), ncols), dtype=np.int64)
    return A


def rref(A, p):
    """Return (R, pivots) with R the reduced row echelon form (rows beyond rank dropped)."""
    A = np.array(A, dtype=np.int64, copy=True) % p
    if A.ndim != 2 or A.shape[0] == 0 or A.shape[1] == 0:
        return A.reshape(0, A.shape[1] if A.ndim == 2 else 0), []
    r, pivs = dense_rref(A, p)
    return A[:r], [int(c) for c in pivs]


def rank(A, p):
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A, p):
    """Basis (rows) of the right kernel {x : A x = 0} as an int64 array."""
    A = np.asarray(A, dtype=np.int64)
    m = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(m, dtype=np.int64)
    R, pivs = rref(A, p)
    free = [j for j in range(m) if j not in set(pivs)]
    K = np.zeros((len(free), m), dtype=np.int64)
    for t, f in enumerate(free):
        K[t, f] = 1
        for i, c in enumerate(pivs):
            K[t, c] = (-R[i, f]) % p
    return K


def left_nullspace(A, p):
    """Basis (rows) of {y : y A = 0}."""
    return nullspace(np.asarray(A, dtype=np.int64).T, p)


def row_space(A, p):
    return rref(A, p)[0]


def solve_rows(A, B, p):
    """Find X with X A = B (rows of B in the row span of A); None if impossible."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    nA = A.shape[0]
    # reduce [A^T | B^T] as a column system: A^T x = b
    M = np.concatenate([A.T, B.T], axis=1) % p
    R, pivs = rref(M, p)
    if any(c >= nA for c in pivs):
        return None
    X = np.zeros((B.shape[0], nA), dtype=np.int64)
    for i, c in enumerate(pivs):
        X[:, c] = R[i, nA:]
    return X % p
