"""Slow, independent reference computations used to cross-check the library.

Everything here is plain Python over lists; nothing is imported from injdim.
"""

from __future__ import annotations

import itertools


def naive_rref(rows, p):
    """Textbook Gauss-Jordan elimination on a list of lists."""
    a = [[x % p for x in r] for r in rows]
    if not a:
        return a, 0, []
    m, n = len(a), len(a[0])
    piv = []
    r = 0
    for c in range(n):
        sel = next((i for i in range(r, m) if a[i][c]), None)
        if sel is None:
            continue
        a[r], a[sel] = a[sel], a[r]
        inv = pow(a[r][c], p - 2, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
        if r == m:
            break
    return a, r, piv


def naive_rank(rows, p):
    return naive_rref(rows, p)[1]


def naive_kernel(rows, ncols, p):
    """Kernel basis as a list of vectors."""
    if not rows:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    red, rk, piv = naive_rref(rows, p)
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = (-red[i][f]) % p
        out.append(v)
    return out


def transpose(m):
    return [list(r) for r in zip(*m)] if m else []


def matvec(m, v, p):
    return [sum(a * b for a, b in zip(r, v)) % p for r in m]


def all_vectors(n, p):
    return itertools.product(range(p), repeat=n)


def brute_solve_exists(a, b, p):
    ncols = len(a[0]) if a else 0
    for x in all_vectors(ncols, p):
        if matvec(a, list(x), p) == [v % p for v in b]:
            return True
    return False


class NaiveAlgebra:
    """Structure constants as nested lists: mult[u][v][w]."""

    def __init__(self, p, mult, aug):
        self.p = p
        self.mult = mult
        self.aug = aug
        self.dim = len(mult)
        # radical basis from the augmentation kernel
        self.radical = naive_kernel([aug], self.dim, p)

    def left(self, u):
        """Matrix of v -> e_u v."""
        d = self.dim
        return [[self.mult[u][v][w] for v in range(d)] for w in range(d)]


def truncated_ci_naive(p, exps):
    """k[x]/(x_i^{a_i}) with the first variable most significant."""
    monos = list(itertools.product(*[range(a) for a in exps]))
    idx = {m: i for i, m in enumerate(monos)}
    d = len(monos)
    mult = [[[0] * d for _ in range(d)] for _ in range(d)]
    for u, mu in enumerate(monos):
        for v, mv in enumerate(monos):
            s = tuple(a + b for a, b in zip(mu, mv))
            if all(x < a for x, a in zip(s, exps)):
                mult[u][v][idx[s]] = 1
    aug = [1 if all(x == 0 for x in m) else 0 for m in monos]
    return NaiveAlgebra(p, mult, aug)


def _act(actions, r, p):
    n = len(actions[0])
    out = [[0] * n for _ in range(n)]
    for u, c in enumerate(r):
        if c:
            for i in range(n):
                for j in range(n):
                    out[i][j] = (out[i][j] + c * actions[u][i][j]) % p
    return out


def _restrict(actions, basis, p):
    """Actions on the invariant subspace spanned by ``basis`` (list of vectors)."""
    k = len(basis)
    cols = transpose(basis)  # n x k
    out = []
    for act in actions:
        imgs = [matvec(act, b, p) for b in basis]
        mat = []
        for img in imgs:
            aug = [row + [img[i]] for i, row in enumerate(cols)]
            red, rk, piv = naive_rref(aug, p)
            x = [0] * k
            for i, c in enumerate(piv):
                if c < k:
                    x[c] = red[i][k]
            mat.append(x)
        out.append(transpose(mat))
    return out


def brute_betti(alg: NaiveAlgebra, actions, depth):
    """Betti numbers by iterating minimal syzygies of explicit modules."""
    p, D = alg.p, alg.dim
    betti = []
    acts = actions
    for _ in range(depth + 1):
        n = len(acts[0]) if acts else 0
        if n == 0:
            betti.append(0)
            break
        radvecs = []
        for r in alg.radical:
            a = _act(acts, r, p)
            for j in range(n):
                radvecs.append([a[i][j] for i in range(n)])
        base_rank = naive_rank(radvecs, p) if radvecs else 0
        gens = []
        span = list(radvecs)
        rk = base_rank
        for j in range(n):
            e = [int(i == j) for i in range(n)]
            if naive_rank(span + [e], p) > rk:
                span.append(e)
                rk += 1
                gens.append(e)
        g = len(gens)
        betti.append(g)
        # cover R^g -> M: column (j, a) is e_a . gen_j
        cover_cols = []
        for gvec in gens:
            for a in range(D):
                cover_cols.append(matvec(acts[a], gvec, p))
        cover = transpose(cover_cols)
        ker = naive_kernel(cover, g * D, p)
        if not ker:
            betti.append(0)
            break
        free_acts = []
        for u in range(D):
            L = alg.left(u)
            big = [[0] * (g * D) for _ in range(g * D)]
            for b in range(g):
                for i in range(D):
                    for j in range(D):
                        big[b * D + i][b * D + j] = L[i][j]
            free_acts.append(big)
        acts = _restrict(free_acts, ker, p)
    return betti[: depth + 1]


def trivial_actions(alg: NaiveAlgebra):
    return [[[alg.aug[u] % alg.p]] for u in range(alg.dim)]


def brute_hom_dim(alg: NaiveAlgebra, acts_m, acts_n):
    """dim Hom_A(M, N) by solving f act_M = act_N f directly."""
    p = alg.p
    m = len(acts_m[0]) if acts_m and acts_m[0] else 0
    n = len(acts_n[0]) if acts_n and acts_n[0] else 0
    if m == 0 or n == 0:
        return 0
    rows = []
    # unknown f[i][j] at index i*m + j
    for u in range(alg.dim):
        for i in range(n):
            for j in range(m):
                row = [0] * (n * m)
                for k in range(m):
                    row[i * m + k] = (row[i * m + k] + acts_m[u][k][j]) % p
                for k in range(n):
                    row[k * m + j] = (row[k * m + j] - acts_n[u][i][k]) % p
                rows.append(row)
    return n * m - naive_rank(rows, p)
