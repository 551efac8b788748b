"""Exact dense linear algebra over prime fields GF(p).

Matrices are numpy ``int64`` arrays holding canonical residues in ``[0, p)``.
Every basis returned here is canonical (reduced row echelon conventions,
first-nonzero pivoting in column order), so downstream bases are reproducible
bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# products of two residues must stay far below 2**63 when summed
MAX_PRIME = 1 << 24


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field GF(p)."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not is_prime(int(self.p)):
            raise ValueError(f"characteristic {self.p!r} is not prime")
        if self.p >= MAX_PRIME:
            raise ValueError(f"prime {self.p} exceeds the supported bound {MAX_PRIME}")

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)


def as_mat(m, p: int, shape=None) -> np.ndarray:
    a = np.asarray(m, dtype=np.int64)
    if shape is not None:
        a = a.reshape(shape)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    return a % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product mod p; chunks the inner dimension so int64 never overflows."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    inner = a.shape[-1]
    step = max(1, (1 << 62) // (p * p))
    if inner <= step:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, inner, step):
        out = (out + a[:, s:s + step] @ b[s:s + step]) % p
    return out


def kron(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Kronecker product; block (i, j) is ``a[i, j] * b``."""
    return np.kron(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % p


def _rref_inplace(a: np.ndarray, p: int, ncols: int) -> list[int]:
    rows = a.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i], c:] = a[[i, r], c:]
        piv = int(a[r, c])
        if piv != 1:
            a[r, c:] = a[r, c:] * pow(piv, p - 2, p) % p
        col = a[:, c]
        hit = np.flatnonzero(col)
        hit = hit[hit != r]
        if hit.size:
            a[np.ix_(hit, np.arange(c, a.shape[1]))] = (
                a[hit, c:] - np.outer(a[hit, c], a[r, c:])
            ) % p
        pivots.append(c)
        r += 1
    return pivots


def rref(m, p: int, ncols: int | None = None) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row echelon form.

    Only the first ``ncols`` columns are eligible as pivots (default: all);
    row operations still act on the full width, which is how augmented
    systems are solved.
    """
    a = np.array(m, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    if ncols is None:
        ncols = a.shape[1]
    pivots = _rref_inplace(a, p, ncols)
    return a, len(pivots), pivots


def rank(m, p: int) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    # eliminate along the shorter side
    if m.shape[0] > m.shape[1]:
        m = m.T
    return rref(m, p)[1]


def kernel_basis(m, p: int) -> np.ndarray:
    """Columns spanning ker(m): one per free variable, in increasing order."""
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    r, rk, piv = rref(m, p)
    free = [c for c in range(cols) if c not in set(piv)]
    k = np.zeros((cols, len(free)), dtype=np.int64)
    for t, f in enumerate(free):
        k[f, t] = 1
        for row, pc in enumerate(piv):
            k[pc, t] = (-r[row, f]) % p
    return k


def solve_many(a, b, p: int) -> np.ndarray | None:
    """Solve ``a @ x = b`` column by column; free variables are set to 0.

    Returns None if any column is inconsistent.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row mismatch: {a.shape[0]} vs {b.shape[0]}")
    n = a.shape[1]
    if b.shape[1] == 0:
        return np.zeros((n, 0), dtype=np.int64)
    aug = np.concatenate([a, b], axis=1)
    r, rk, piv = rref(aug, p, ncols=n)
    if np.any(r[rk:, n:]):
        return None
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    if rk:
        x[piv] = r[:rk, n:]
    return x


def solve(a, b, p: int) -> np.ndarray | None:
    """Particular solution of ``a @ x = b`` for a single column, or None."""
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    x = solve_many(a, b.reshape(-1, 1), p)
    return None if x is None else x[:, 0]


def inverse(m, p: int) -> np.ndarray:
    m = np.asarray(m, dtype=np.int64)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    x = solve_many(m, identity(n), p)
    if x is None:
        raise ValueError("matrix is singular")
    return x


def column_basis(m, p: int) -> np.ndarray:
    """The pivot columns of ``m``: a canonical basis of its column space."""
    m = np.asarray(m, dtype=np.int64)
    if m.shape[1] == 0:
        return m
    _, _, piv = rref(m, p)
    return m[:, piv] % p


def extend_columns(base, candidates, p: int) -> list[int]:
    """Indices of the candidate columns that greedily extend span(base)."""
    base = np.asarray(base, dtype=np.int64)
    candidates = np.asarray(candidates, dtype=np.int64)
    nb = base.shape[1]
    if candidates.shape[1] == 0:
        return []
    _, _, piv = rref(np.concatenate([base, candidates], axis=1), p)
    return [c - nb for c in piv if c >= nb]


def left_inverse(w, p: int) -> np.ndarray:
    """L with ``L @ w = I`` for ``w`` of full column rank."""
    w = np.asarray(w, dtype=np.int64)
    r = w.shape[1]
    if r == 0:
        return np.zeros((0, w.shape[0]), dtype=np.int64)
    _, rk, rows = rref(w.T, p)
    if rk != r:
        raise ValueError("matrix does not have full column rank")
    sel = np.zeros((r, w.shape[0]), dtype=np.int64)
    sel[np.arange(r), rows] = 1
    return matmul(inverse(w[rows], p), sel, p)
