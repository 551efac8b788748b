"""Finite-dimensional left modules and maps of free modules.

A module of dimension n over an algebra A stores ``actions[u]``, the n x n
matrix by which the basis element e_u acts on column vectors.

The free module R^b has field coordinates laid out as b consecutive blocks of
``A.dim`` algebra coordinates.  A :class:`FreeMap` R^a -> R^b is a b x a array
of algebra elements: generator e_j goes to ``sum_i entries[i, j] e_i``, so
entries act by right multiplication and composition multiplies entries in the
opposite order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .algebra import Algebra, AlgebraError, matrix_product, opposite


class ModuleError(ValueError):
    """Action matrices that violate a module axiom."""


@dataclass(eq=False)
class Module:
    algebra: Algebra
    actions: np.ndarray  # (A.dim, n, n)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.actions.shape[1]

    @property
    def p(self) -> int:
        return self.algebra.p

    def act(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=np.int64)
        return np.einsum("u,uij->ij", r, self.actions) % self.p

    def resolution(self, depth: int):
        """Minimal free resolution computed through homological degree ``depth``.

        Cached on the module; a deeper cached resolution is reused.
        """
        from .resolution import resolve_complex
        from .complexes import Complex

        res = self._cache.get("resolution")
        if res is None or (res.depth < depth and not res.complete):
            res = resolve_complex(Complex.from_module(self), depth)
            self._cache["resolution"] = res
        return res

    def __repr__(self) -> str:
        return f"Module(dim={self.dim}, over {self.algebra!r})"


def check_module(M: Module) -> None:
    A = M.algebra
    p = A.p
    n = M.dim
    if M.actions.shape != (A.dim, n, n):
        raise ModuleError(f"expected {A.dim} matrices of size {n}x{n}")
    if not np.array_equal(M.act(A.unit), np.eye(n, dtype=np.int64)):
        raise ModuleError("unit does not act as the identity")
    if n == 0:
        return
    lhs = np.einsum("uij,vjk->uvik", M.actions, M.actions) % p
    rhs = np.einsum("uvw,wik->uvik", A.mult, M.actions) % p
    bad = np.argwhere(np.any(lhs != rhs, axis=(2, 3)))
    if bad.size:
        u, v = (int(t) for t in bad[0])
        raise ModuleError(f"relation violated: act({A.labels[u]})*act({A.labels[v]}) != act({A.labels[u]}*{A.labels[v]})")


def module_from_actions(A: Algebra, dim: int, actions, check: bool = True) -> Module:
    if dim == 0:
        return zero_module(A)
    acts = np.asarray(actions, dtype=np.int64)
    if acts.shape != (A.dim, dim, dim):
        raise ModuleError(f"need one {dim}x{dim} action matrix per basis element ({A.dim})")
    acts = acts % A.p
    M = Module(A, acts)
    if check:
        check_module(M)
    return M


def zero_module(A: Algebra) -> Module:
    return Module(A, np.zeros((A.dim, 0, 0), dtype=np.int64))


def free_module(A: Algebra, rank: int) -> Module:
    """R^rank with the regular action on each block."""
    if rank < 0:
        raise ValueError("rank must be >= 0")
    eye = np.eye(rank, dtype=np.int64)
    acts = np.stack([np.kron(eye, A.left[u]) for u in range(A.dim)]) if rank else np.zeros((A.dim, 0, 0), dtype=np.int64)
    return Module(A, acts)


def trivial_module(A: Algebra) -> Module:
    """The residue field k, on which the radical acts by zero."""
    return Module(A, A.augmentation.reshape(A.dim, 1, 1).copy())


def direct_sum(*mods: Module) -> Module:
    A = mods[0].algebra
    n = sum(m.dim for m in mods)
    acts = np.zeros((A.dim, n, n), dtype=np.int64)
    o = 0
    for m in mods:
        acts[:, o:o + m.dim, o:o + m.dim] = m.actions
        o += m.dim
    return Module(A, acts)


def submodule(V: Module, W: np.ndarray) -> Module:
    """The module on the columns of W (a basis of an invariant subspace)."""
    p = V.p
    W = np.asarray(W, dtype=np.int64)
    if W.shape[1] == 0:
        return zero_module(V.algebra)
    L = la.left_inverse(W, p)
    acts = (L @ V.actions % p) @ W % p
    return Module(V.algebra, acts)


@dataclass(frozen=True, eq=False)
class Quotient:
    module: Module
    projection: np.ndarray  # quotient dim x V.dim
    lift: np.ndarray  # V.dim x quotient dim, columns are standard vectors


def quotient(V: Module, W: np.ndarray) -> Quotient:
    """V / span(W) for an invariant subspace, with canonical coordinates.

    The quotient basis is the standard vectors of V at the non-pivot
    positions of the reduced basis of W.
    """
    p = V.p
    n = V.dim
    W = np.asarray(W, dtype=np.int64)
    if W.shape[1]:
        red, rk, piv = la.rref(W.T, p)
        red = red[:rk]
    else:
        red, piv = np.zeros((0, n), dtype=np.int64), []
    keep = [j for j in range(n) if j not in set(piv)]
    proj = np.eye(n, dtype=np.int64)[keep]
    if piv:
        sel = np.eye(n, dtype=np.int64)[piv]
        proj = (proj - red[:, keep].T @ sel) % p
    lift = np.eye(n, dtype=np.int64)[:, keep]
    acts = (proj @ V.actions % p) @ lift % p
    return Quotient(Module(V.algebra, acts), proj, lift)


def dual_module(M: Module) -> Module:
    """Hom_k(M, k) as a left module over the opposite algebra."""
    return Module(opposite(M.algebra), np.ascontiguousarray(M.actions.transpose(0, 2, 1)))


def radical_span(M: Module, W: np.ndarray) -> np.ndarray:
    """Columns spanning rad(A) * span(W) (not reduced)."""
    A = M.algebra
    rad_acts = np.einsum("ur,uij->rij", A.radical, M.actions) % A.p
    if W.shape[1] == 0 or rad_acts.shape[0] == 0:
        return np.zeros((M.dim, 0), dtype=np.int64)
    prods = (rad_acts @ W % A.p).transpose(1, 0, 2)
    return prods.reshape(M.dim, -1)


def generators_of(M: Module, W: np.ndarray, modulo: np.ndarray | None = None) -> np.ndarray:
    """Minimal generators of the submodule span(W), modulo span(modulo).

    rad*W (plus ``modulo``) is extended greedily by the columns of W; the
    columns that extend it are returned.
    """
    W = np.asarray(W, dtype=np.int64)
    base = radical_span(M, W)
    if modulo is not None and modulo.shape[1]:
        base = np.concatenate([np.asarray(modulo, dtype=np.int64), base], axis=1)
    idx = la.extend_columns(base, W, M.p)
    return W[:, idx]


def minimal_generators(M: Module) -> np.ndarray:
    """Lifted basis of M / rad M, as columns in the coordinates of M."""
    return generators_of(M, np.eye(M.dim, dtype=np.int64))


def cover_matrix(M: Module, gens: np.ndarray) -> np.ndarray:
    """Field matrix of R^g -> M sending e_j to the j-th generator."""
    A = M.algebra
    g = gens.shape[1]
    if g == 0:
        return np.zeros((M.dim, 0), dtype=np.int64)
    cols = np.tensordot(M.actions, gens, axes=([2], [0])).transpose(1, 2, 0) % A.p
    return cols.reshape(M.dim, g * A.dim)


def is_projective(M: Module) -> tuple[bool, int]:
    """Projectivity over a local algebra: the minimal cover is injective.

    Returns (projective, number of minimal generators); when projective the
    module is free of that rank.
    """
    g = minimal_generators(M).shape[1]
    # the minimal cover R^g -> M is onto; its kernel has dimension g*dim(A) - dim(M)
    return g * M.algebra.dim == M.dim, g


def hom_space(M: Module, N: Module) -> list[np.ndarray]:
    """Canonical basis of Hom_A(M, N) as N.dim x M.dim matrices."""
    if M.algebra is not N.algebra and not M.algebra.structure_equal(N.algebra):
        raise AlgebraError("modules over different algebras")
    p = M.p
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return []
    eye_m = np.eye(m, dtype=np.int64)
    eye_n = np.eye(n, dtype=np.int64)
    # column-major vec: vec(F A) = (A^T kron I) vec F, vec(B F) = (I kron B) vec F
    blocks = [
        (np.kron(M.actions[u].T, eye_n) - np.kron(eye_m, N.actions[u])) % p
        for u in range(M.algebra.dim)
    ]
    ker = la.kernel_basis(np.concatenate(blocks), p)
    return [ker[:, t].reshape((n, m), order="F") for t in range(ker.shape[1])]


def is_module_map(f: np.ndarray, M: Module, N: Module) -> bool:
    p = M.p
    lhs = np.einsum("ij,ujk->uik", f, M.actions) % p
    rhs = np.einsum("uij,jk->uik", N.actions, f) % p
    return bool(np.array_equal(lhs, rhs))


def tensor_diagonal(M: Module, N: Module) -> Module:
    """M (x)_k N with group elements acting diagonally."""
    A = M.algebra
    if A.group is None:
        raise AlgebraError("diagonal tensor products need a group algebra")
    acts = np.stack([np.kron(M.actions[u], N.actions[u]) % A.p for u in range(A.dim)])
    return Module(A, acts)


# --- maps of free modules ---------------------------------------------------


@dataclass(eq=False)
class FreeMap:
    """A homomorphism R^source -> R^target of free left modules."""

    algebra: Algebra
    entries: np.ndarray  # (target, source, A.dim)

    @property
    def source(self) -> int:
        return self.entries.shape[1]

    @property
    def target(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def zero(cls, A: Algebra, source: int, target: int) -> "FreeMap":
        return cls(A, np.zeros((target, source, A.dim), dtype=np.int64))

    @classmethod
    def identity(cls, A: Algebra, rank: int) -> "FreeMap":
        e = np.zeros((rank, rank, A.dim), dtype=np.int64)
        for i in range(rank):
            e[i, i] = A.unit
        return cls(A, e)

    @classmethod
    def from_images(cls, A: Algebra, images: np.ndarray, target: int) -> "FreeMap":
        """FreeMap whose j-th generator goes to the field vector images[:, j]."""
        a = images.shape[1]
        ent = np.asarray(images, dtype=np.int64).T.reshape(a, target, A.dim).transpose(1, 0, 2)
        return cls(A, np.ascontiguousarray(ent) % A.p)

    def field(self) -> np.ndarray:
        """The (target*dim) x (source*dim) matrix over GF(p)."""
        A = self.algebra
        b, a, d = self.entries.shape
        if a == 0 or b == 0:
            return np.zeros((b * d, a * d), dtype=np.int64)
        big = self.entries.reshape(b * a, d) @ A.right.reshape(d, d * d)
        big = big.reshape(b, a, d, d).transpose(0, 2, 1, 3).reshape(b * d, a * d)
        return big % A.p

    def images(self) -> np.ndarray:
        """Field vectors of the images of the generators (columns)."""
        b, a, d = self.entries.shape
        return self.entries.transpose(1, 0, 2).reshape(a, b * d).T.copy()

    def compose(self, inner: "FreeMap") -> "FreeMap":
        """self o inner."""
        A = self.algebra
        if inner.target != self.source:
            raise ValueError("maps are not composable")
        b = inner.source
        c = self.target
        if b == 0 or c == 0 or inner.target == 0:
            return FreeMap.zero(A, b, c)
        # (self o inner)(e_j) = sum_i inner[i, j] * self[l, i]
        out = matrix_product(A.mult.transpose(1, 0, 2), self.entries, inner.entries, A.p)
        return FreeMap(A, out)

    def __add__(self, other: "FreeMap") -> "FreeMap":
        return FreeMap(self.algebra, (self.entries + other.entries) % self.algebra.p)

    def scale(self, c: int) -> "FreeMap":
        return FreeMap(self.algebra, (self.entries * c) % self.algebra.p)

    def is_zero(self) -> bool:
        return not np.any(self.entries)

    def in_radical(self) -> bool:
        return not np.any(self.entries @ self.algebra.augmentation % self.algebra.p)

    def __eq__(self, other):
        return isinstance(other, FreeMap) and np.array_equal(self.entries, other.entries)


def freemap_cokernel(f: FreeMap) -> Quotient:
    return quotient(free_module(f.algebra, f.target), la.column_basis(f.field(), f.algebra.p))


def random_freemap(A: Algebra, a: int, b: int, rng: np.random.Generator, in_radical: bool = False) -> FreeMap:
    ent = rng.integers(0, A.p, size=(b, a, A.dim), dtype=np.int64)
    if in_radical:
        coeff = rng.integers(0, A.p, size=(b, a, A.radical.shape[1]), dtype=np.int64)
        ent = np.einsum("ur,bar->bau", A.radical, coeff) % A.p
    return FreeMap(A, ent)


def random_module(A: Algebra, a: int, b: int, seed: int, in_radical: bool = False) -> Module:
    """Cokernel of a seeded random map R^a -> R^b.

    ``in_radical`` draws entries from the radical, so the presentation is
    minimal and the cokernel has exactly b generators.
    """
    if a < 0 or b < 0:
        raise ValueError("a and b must be >= 0")
    rng = np.random.default_rng(seed)
    return freemap_cokernel(random_freemap(A, a, b, rng, in_radical)).module


def syzygy_module(M: Module, n: int = 1) -> Module:
    """Omega^n M: the image of the n-th differential of the minimal resolution."""
    if n == 0:
        return M
    res = M.resolution(n)
    P = res.complex
    if P.rank(-n + 1) == 0:
        return zero_module(M.algebra)
    V = free_module(M.algebra, P.rank(-n + 1))
    img = la.column_basis(P.diff(-n).field(), M.p)
    return submodule(V, img)
