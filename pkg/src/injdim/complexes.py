"""Bounded complexes of modules and bounded-above complexes of free modules.

Indexing is cohomological: d^n : X^n -> X^{n+1}.  Shifts follow
(Sigma X)^n = X^{n+1} with differential -d.  A chain map of degree s from P
to Q has components P^m -> Q^{m+s} and satisfies ``f d_P = (-1)^s d_Q f``,
i.e. it is an honest chain map P -> Sigma^s Q.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .algebra import Algebra, matrix_product, opposite
from .modules import (
    FreeMap,
    Module,
    direct_sum,
    dual_module,
    free_module,
    is_module_map,
    quotient,
    submodule,
    zero_module,
)


class ComplexError(ValueError):
    pass


@dataclass(eq=False)
class Complex:
    """A bounded complex of finite-dimensional modules.

    ``terms[i]`` sits in degree ``lo + i``; ``diffs[i]`` is the field matrix
    of d^{lo+i}.
    """

    algebra: Algebra
    lo: int
    terms: list[Module]
    diffs: list[np.ndarray]
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.diffs = [np.asarray(d, dtype=np.int64) % self.algebra.p for d in self.diffs]

    @property
    def hi(self) -> int:
        return self.lo + len(self.terms) - 1

    def term(self, n: int) -> Module:
        if self.lo <= n <= self.hi:
            return self.terms[n - self.lo]
        return zero_module(self.algebra)

    def dim(self, n: int) -> int:
        return self.term(n).dim if self.lo <= n <= self.hi else 0

    def diff(self, n: int) -> np.ndarray:
        if self.lo <= n < self.hi:
            return self.diffs[n - self.lo]
        return np.zeros((self.dim(n + 1), self.dim(n)), dtype=np.int64)

    @classmethod
    def from_module(cls, M: Module, degree: int = 0) -> "Complex":
        return cls(M.algebra, degree, [M], [])

    @property
    def is_module(self) -> bool:
        return len(self.terms) == 1 and self.lo == 0

    def resolution(self, depth: int):
        """Minimal free resolution reaching ``depth`` degrees below ``lo``."""
        if self.is_module:
            return self.terms[0].resolution(depth)
        from .resolution import resolve_complex

        res = self._cache.get("resolution")
        if res is None or (res.depth < depth and not res.complete):
            res = resolve_complex(self, depth)
            self._cache["resolution"] = res
        return res

    def dual(self) -> "Complex":
        """Termwise k-dual over the opposite algebra: (DX)^n = D(X^{-n})."""
        terms = [dual_module(M) for M in reversed(self.terms)]
        diffs = [d.T.copy() for d in reversed(self.diffs)]
        return Complex(opposite(self.algebra), -self.hi, terms, diffs)

    def __repr__(self):
        dims = [M.dim for M in self.terms]
        return f"Complex(lo={self.lo}, dims={dims})"


def check_complex(X: Complex) -> None:
    p = X.algebra.p
    if len(X.diffs) != max(0, len(X.terms) - 1):
        raise ComplexError("need one differential between consecutive terms")
    for n in range(X.lo, X.hi):
        d = X.diff(n)
        if d.shape != (X.dim(n + 1), X.dim(n)):
            raise ComplexError(f"d^{n} has shape {d.shape}, expected {(X.dim(n + 1), X.dim(n))}")
        if not is_module_map(d, X.term(n), X.term(n + 1)):
            raise ComplexError(f"d^{n} is not a module map")
        if n + 1 < X.hi and np.any(la.matmul(X.diff(n + 1), d, p)):
            raise ComplexError(f"d^{n + 1} d^{n} != 0")


def shift(X: Complex, n: int = 1) -> Complex:
    """Sigma^n X: (Sigma^n X)^j = X^{j+n}, differential multiplied by (-1)^n."""
    sign = -1 if n % 2 else 1
    return Complex(X.algebra, X.lo - n, list(X.terms), [(sign * d) % X.algebra.p for d in X.diffs])


def cohomology(X: Complex, n: int):
    """H^n(X) as a module, together with the cycle basis used for it."""
    p = X.algebra.p
    M = X.term(n)
    if M.dim == 0:
        return zero_module(X.algebra)
    Zb = la.kernel_basis(X.diff(n), p)
    Z = submodule(M, Zb)
    if Z.dim == 0:
        return Z
    B = la.column_basis(X.diff(n - 1), p)
    if B.shape[1] == 0:
        return Z
    coords = la.left_inverse(Zb, p) @ B % p
    return quotient(Z, coords).module


@dataclass(eq=False)
class ChainMap:
    """A degree-0 chain map of module complexes, components as field matrices."""

    source: Complex
    target: Complex
    components: dict[int, np.ndarray]

    def component(self, n: int) -> np.ndarray:
        c = self.components.get(n)
        if c is None:
            return np.zeros((self.target.dim(n), self.source.dim(n)), dtype=np.int64)
        return c


def is_chain_map(f: ChainMap) -> bool:
    p = f.source.algebra.p
    X, Y = f.source, f.target
    lo = min(X.lo, Y.lo) - 1
    hi = max(X.hi, Y.hi) + 1
    for n in range(lo, hi + 1):
        c = f.component(n)
        if c.shape != (Y.dim(n), X.dim(n)):
            return False
        if X.dim(n) and Y.dim(n) and not is_module_map(c, X.term(n), Y.term(n)):
            return False
        lhs = la.matmul(f.component(n + 1), X.diff(n), p)
        rhs = la.matmul(Y.diff(n), c, p)
        if not np.array_equal(lhs, rhs):
            return False
    return True


def cone(f: ChainMap) -> Complex:
    """cone(f)^n = X^{n+1} (+) Y^n with d(x, y) = (-d x, f x + d y)."""
    if not is_chain_map(f):
        raise ComplexError("not a chain map")
    X, Y = f.source, f.target
    p = X.algebra.p
    lo = min(X.lo - 1, Y.lo)
    hi = max(X.hi - 1, Y.hi)
    terms = [direct_sum(X.term(n + 1), Y.term(n)) for n in range(lo, hi + 1)]
    diffs = []
    for n in range(lo, hi):
        top = np.concatenate([-X.diff(n + 1), np.zeros((X.dim(n + 2), Y.dim(n)), dtype=np.int64)], axis=1)
        bot = np.concatenate([f.component(n + 1), Y.diff(n)], axis=1)
        diffs.append(np.concatenate([top, bot]) % p)
    return Complex(X.algebra, lo, terms, diffs)


# --- complexes of free modules ----------------------------------------------


@dataclass(eq=False)
class FreeComplex:
    """A complex of free modules R^{rank} in degrees lo..hi.

    ``exact_below`` records that the terms below ``lo`` are genuinely zero
    (a finished resolution); otherwise the complex is a truncation.
    ``coh_lo`` is a degree below which the untruncated complex is known to be
    acyclic.
    """

    algebra: Algebra
    lo: int
    ranks: list[int]
    diffs: list[FreeMap]
    exact_below: bool = False
    coh_lo: int | None = None

    @property
    def hi(self) -> int:
        return self.lo + len(self.ranks) - 1

    def rank(self, n: int) -> int:
        if self.lo <= n <= self.hi:
            return self.ranks[n - self.lo]
        return 0

    def diff(self, n: int) -> FreeMap:
        if self.lo <= n < self.hi:
            return self.diffs[n - self.lo]
        return FreeMap.zero(self.algebra, self.rank(n), self.rank(n + 1))

    def computed(self, n: int) -> bool:
        """Is the term in degree n known (not cut off by truncation)?"""
        return n >= self.lo or self.exact_below

    def to_complex(self) -> Complex:
        A = self.algebra
        return Complex(A, self.lo, [free_module(A, r) for r in self.ranks], [d.field() for d in self.diffs])

    def betti(self) -> dict[int, int]:
        return {n: self.rank(n) for n in range(self.lo, self.hi + 1)}

    def __repr__(self):
        return f"FreeComplex(lo={self.lo}, ranks={self.ranks})"


def check_free_complex(P: FreeComplex) -> None:
    for n in range(P.lo, P.hi):
        d = P.diff(n)
        if (d.target, d.source) != (P.rank(n + 1), P.rank(n)):
            raise ComplexError(f"d^{n} has the wrong shape")
        if n + 1 < P.hi and not P.diff(n + 1).compose(d).is_zero():
            raise ComplexError(f"d^{n + 1} d^{n} != 0")


@dataclass(eq=False)
class FreeChainMap:
    """Components P^m -> Q^{m+degree}; missing components are zero."""

    source: FreeComplex
    target: FreeComplex
    degree: int
    components: dict[int, FreeMap]
    label: str = ""

    def component(self, m: int) -> FreeMap:
        c = self.components.get(m)
        if c is None:
            return FreeMap.zero(self.source.algebra, self.source.rank(m), self.target.rank(m + self.degree))
        return c


def chain_map_defects(f: FreeChainMap) -> list[int]:
    """Degrees m where f d_P != (-1)^s d_Q f, among the computed squares."""
    P, Q, s = f.source, f.target, f.degree
    sign = -1 if s % 2 else 1
    bad = []
    for m in range(max(P.lo, Q.lo - s), P.hi):
        if m + 1 + s > Q.hi and m + s > Q.hi:
            continue
        lhs = f.component(m + 1).compose(P.diff(m))
        rhs = Q.diff(m + s).compose(f.component(m)).scale(sign)
        if lhs.entries.size and not np.array_equal(lhs.entries, rhs.entries):
            bad.append(m)
    return bad


def _block(A: Algebra, rows: list[int], cols: list[int], blocks: dict) -> FreeMap:
    ent = np.zeros((sum(rows), sum(cols), A.dim), dtype=np.int64)
    ro = np.cumsum([0] + rows)
    co = np.cumsum([0] + cols)
    for (i, j), fm in blocks.items():
        if fm is not None and fm.entries.size:
            ent[ro[i]:ro[i + 1], co[j]:co[j + 1]] = fm.entries
    return FreeMap(A, ent % A.p)


def cone_free(t: FreeChainMap) -> FreeComplex:
    """Mapping cone of t : P -> Sigma^s Q.

    cone^j = P^{j+1} (+) Q^{j+s}, d(a, b) = (-d a, t a + (-1)^s d b).
    """
    P, Q, s = t.source, t.target, t.degree
    A = P.algebra
    sign = -1 if s % 2 else 1
    lo = max(P.lo - 1, Q.lo - s)
    if P.exact_below and Q.exact_below:
        lo = min(P.lo - 1, Q.lo - s)
    hi = max(P.hi - 1, Q.hi - s)
    ranks = [P.rank(j + 1) + Q.rank(j + s) for j in range(lo, hi + 1)]
    diffs = []
    for j in range(lo, hi):
        rows = [P.rank(j + 2), Q.rank(j + 1 + s)]
        cols = [P.rank(j + 1), Q.rank(j + s)]
        diffs.append(
            _block(
                A,
                rows,
                cols,
                {
                    (0, 0): P.diff(j + 1).scale(-1),
                    (1, 0): t.component(j + 1),
                    (1, 1): Q.diff(j + s).scale(sign),
                },
            )
        )
    coh = None
    if P.coh_lo is not None and Q.coh_lo is not None:
        coh = min(P.coh_lo - 1, Q.coh_lo - s)
    return FreeComplex(A, lo, ranks, diffs, P.exact_below and Q.exact_below, coh)


def minimize(P: FreeComplex) -> FreeComplex:
    """Split off contractible summands R -u-> R with u a unit.

    Deterministic: the lowest degree first, then the first unit entry in
    row-major order.  The result is homotopy equivalent to P and every
    differential entry lies in the radical.
    """
    A = P.algebra
    p = A.p
    ents = {n: P.diff(n).entries.copy() for n in range(P.lo, P.hi)}
    ranks = {n: P.rank(n) for n in range(P.lo, P.hi + 1)}

    def unit_entry(n):
        e = ents[n]
        if e.size == 0:
            return None
        hit = np.argwhere(e @ A.augmentation % p)
        return None if hit.size == 0 else (int(hit[0][0]), int(hit[0][1]))

    for n in range(P.lo, P.hi):
        while True:
            found = unit_entry(n)
            if found is None:
                break
            I, J = found
            e = ents[n]
            uinv = A.inverse_of(e[I, J])
            rows = [i for i in range(e.shape[0]) if i != I]
            cols = [j for j in range(e.shape[1]) if j != J]
            # c_j = m_Ij u^-1 ; m'_ij = m_ij - c_j m_iJ
            c = matrix_product(A.mult, e[I, cols][:, None, :], uinv[None, None, :], p)[:, 0]
            corr = matrix_product(A.mult, c[:, None, :], e[rows, J][None, :, :], p).transpose(1, 0, 2)
            ents[n] = (e[np.ix_(rows, cols)] - corr) % p
            if n - 1 in ents:
                ents[n - 1] = np.delete(ents[n - 1], J, axis=0)
            if n + 1 in ents:
                ents[n + 1] = np.delete(ents[n + 1], I, axis=1)
            ranks[n] -= 1
            ranks[n + 1] -= 1
    lo, hi = P.lo, P.hi
    return FreeComplex(
        A,
        lo,
        [ranks[n] for n in range(lo, hi + 1)],
        [FreeMap(A, ents[n]) for n in range(lo, hi)],
        P.exact_below,
        P.coh_lo,
    )


def direct_sum_free(P: FreeComplex, Q: FreeComplex) -> FreeComplex:
    A = P.algebra
    lo = max(P.lo, Q.lo) if not (P.exact_below and Q.exact_below) else min(P.lo, Q.lo)
    hi = max(P.hi, Q.hi)
    ranks = [P.rank(n) + Q.rank(n) for n in range(lo, hi + 1)]
    diffs = [
        _block(A, [P.rank(n + 1), Q.rank(n + 1)], [P.rank(n), Q.rank(n)], {(0, 0): P.diff(n), (1, 1): Q.diff(n)})
        for n in range(lo, hi)
    ]
    coh = None if P.coh_lo is None or Q.coh_lo is None else min(P.coh_lo, Q.coh_lo)
    return FreeComplex(A, lo, ranks, diffs, P.exact_below and Q.exact_below, coh)


def free_shift(P: FreeComplex, n: int) -> FreeComplex:
    sign = -1 if n % 2 else 1
    coh = None if P.coh_lo is None else P.coh_lo - n
    return FreeComplex(P.algebra, P.lo - n, list(P.ranks), [d.scale(sign) for d in P.diffs], P.exact_below, coh)
