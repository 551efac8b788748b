"""Hom complexes, Ext groups with canonical cocycle bases, lifting and Yoneda products.

For a free complex P and a bounded complex Y,

    Hom(P, Y)^n = prod_m Hom(P^m, Y^{m+n}),   D f = d_Y f - (-1)^n f d_P.

A component Hom(R^b, Y^j) is stored as the b images of the generators, one
block of ``dim Y^j`` coordinates per generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .complexes import Complex, FreeChainMap, FreeComplex
from .modules import FreeMap, Module


class LiftError(RuntimeError):
    """A lifting system had no solution (the inputs were not cocycles)."""


def precompose_matrix(T: FreeMap, Y: Module) -> np.ndarray:
    """Matrix of f -> f o T from Hom(R^T.target, Y) to Hom(R^T.source, Y)."""
    b, a, _ = T.entries.shape
    y = Y.dim
    if a == 0 or b == 0 or y == 0:
        return np.zeros((a * y, b * y), dtype=np.int64)
    blk = np.tensordot(T.entries, Y.actions, axes=([2], [0])).transpose(1, 2, 0, 3) % Y.p
    return blk.reshape(a * y, b * y)


class HomComplex:
    """Hom(P, Y) for a free complex P and a bounded complex Y."""

    def __init__(self, P: FreeComplex, Y: Complex, resolution=None):
        self.P = P
        self.Y = Y
        self.resolution = resolution
        self.algebra = P.algebra
        self.p = P.algebra.p
        self._layouts: dict[int, list[tuple[int, int, int]]] = {}
        self._diffs: dict[int, np.ndarray] = {}
        self._ext: dict[int, ExtGroup] = {}

    @classmethod
    def of_resolution(cls, res, Y: Complex | Module) -> "HomComplex":
        if isinstance(Y, Module):
            Y = Complex.from_module(Y)
        return cls(res.complex, Y, res)

    def layout(self, n: int) -> list[tuple[int, int, int]]:
        """(P-degree m, offset, size) of the components of C^n."""
        out = self._layouts.get(n)
        if out is None:
            out = []
            off = 0
            lo = max(self.P.lo, self.Y.lo - n)
            hi = min(self.P.hi, self.Y.hi - n)
            for m in range(lo, hi + 1):
                size = self.P.rank(m) * self.Y.dim(m + n)
                if size:
                    out.append((m, off, size))
                    off += size
            self._layouts[n] = out
        return out

    def dim(self, n: int) -> int:
        lay = self.layout(n)
        return 0 if not lay else lay[-1][1] + lay[-1][2]

    def offsets(self, n: int) -> dict[int, tuple[int, int]]:
        return {m: (o, s) for m, o, s in self.layout(n)}

    def valid(self, n: int) -> bool:
        """Is H^n computed correctly despite the truncation of P?"""
        return self.P.exact_below or self.Y.lo - n - 1 >= self.P.lo or self.Y.hi < self.Y.lo

    def valid_range(self) -> tuple[int, int]:
        """Degrees n where H^n can be nonzero and is computed correctly."""
        lo = self.Y.lo - self.P.hi
        hi = self.Y.hi - self.P.lo if self.P.exact_below else self.Y.lo - self.P.lo - 1
        return lo, hi

    def differential(self, n: int) -> np.ndarray:
        """D : C^n -> C^{n+1}."""
        out = self._diffs.get(n)
        if out is not None:
            return out
        p = self.p
        src = self.offsets(n)
        dst = self.offsets(n + 1)
        out = np.zeros((self.dim(n + 1), self.dim(n)), dtype=np.int64)
        sign = -1 if n % 2 else 1
        for m, (o1, s1) in dst.items():
            j = m + n + 1
            # d_Y o f_m
            if m in src:
                o0, s0 = src[m]
                dy = self.Y.diff(j - 1)
                b = self.P.rank(m)
                out[o1:o1 + s1, o0:o0 + s0] += np.kron(np.eye(b, dtype=np.int64), dy)
            # -(-1)^n f_{m+1} o d_P^m
            if m + 1 in src:
                o0, s0 = src[m + 1]
                pre = precompose_matrix(self.P.diff(m), self.Y.term(j))
                out[o1:o1 + s1, o0:o0 + s0] -= sign * pre
        out %= p
        self._diffs[n] = out
        return out

    def cohomology(self, n: int) -> "ExtGroup":
        g = self._ext.get(n)
        if g is None:
            if not self.valid(n):
                raise ValueError(f"H^{n} needs the free complex to reach degree {self.Y.lo - n - 1}")
            g = ExtGroup.build(self, n)
            self._ext[n] = g
        return g

    def ext_dims(self, lo: int, hi: int) -> list[int]:
        return [self.cohomology(n).dim for n in range(lo, hi + 1)]

    def precompose(self, t: FreeChainMap, source: "HomComplex", n: int) -> np.ndarray:
        """Matrix of f -> f o t from source^n = Hom(Q, Y)^n to self^{n+s}.

        ``t`` maps self.P to Sigma^s Q; both Hom complexes share Y.
        """
        s = t.degree
        src = source.offsets(n)
        out = np.zeros((self.dim(n + s), source.dim(n)), dtype=np.int64)
        for m, o1, s1 in self.layout(n + s):
            if m + s not in src:
                continue
            o0, s0 = src[m + s]
            out[o1:o1 + s1, o0:o0 + s0] = precompose_matrix(t.component(m), self.Y.term(m + s + n))
        return out % self.p


@dataclass(eq=False)
class ExtGroup:
    """H^n of a Hom complex with a canonical basis of cocycles."""

    hom: HomComplex
    degree: int
    basis: np.ndarray  # C^n x dim, cocycle columns
    _inv: np.ndarray = field(repr=False)  # left inverse of [B | basis]
    _nb: int = field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def build(cls, H: HomComplex, n: int) -> "ExtGroup":
        p = H.p
        cn = H.dim(n)
        if cn == 0:
            z = np.zeros((0, 0), dtype=np.int64)
            return cls(H, n, z, z, 0)
        Z = la.kernel_basis(H.differential(n), p)
        B = la.column_basis(H.differential(n - 1), p)
        chosen = la.extend_columns(B, Z, p)
        C = Z[:, chosen]
        W = np.concatenate([B, C], axis=1)
        return cls(H, n, C, la.left_inverse(W, p), B.shape[1])

    def coords(self, z: np.ndarray) -> np.ndarray:
        """Coordinates of cocycle column(s) modulo coboundaries."""
        z = np.asarray(z, dtype=np.int64)
        if z.ndim == 1:
            z = z.reshape(-1, 1)
        if self.dim == 0:
            return np.zeros((0, z.shape[1]), dtype=np.int64)
        return la.matmul(self._inv, z, self.hom.p)[self._nb:]

    def is_cocycle(self, z: np.ndarray) -> bool:
        D = self.hom.differential(self.degree)
        return not np.any(la.matmul(D, np.asarray(z).reshape(-1, 1), self.hom.p))

    def cocycle(self, coords) -> np.ndarray:
        c = np.asarray(coords, dtype=np.int64).reshape(-1)
        return la.matmul(self.basis, c.reshape(-1, 1), self.hom.p)[:, 0]

    def element(self, coords) -> "ExtClass":
        return ExtClass(self, np.asarray(coords, dtype=np.int64).reshape(-1) % self.hom.p)

    def basis_element(self, i: int) -> "ExtClass":
        c = np.zeros(self.dim, dtype=np.int64)
        c[i] = 1
        return ExtClass(self, c)


@dataclass(eq=False)
class ExtClass:
    group: ExtGroup
    coords: np.ndarray

    @property
    def degree(self) -> int:
        return self.group.degree

    @property
    def cocycle(self) -> np.ndarray:
        return self.group.cocycle(self.coords)

    def is_zero(self) -> bool:
        return not np.any(self.coords)


def _as_complex(X) -> Complex:
    return Complex.from_module(X) if isinstance(X, Module) else X


def ext_hom(M, N, depth: int) -> HomComplex:
    """Hom(P_M, N) with P_M the minimal resolution computed to ``depth``."""
    X = _as_complex(M)
    res = X.resolution(depth)
    return HomComplex(res.complex, _as_complex(N), res)


def ext_group(M, N, n: int, bound: int | None = None) -> ExtGroup:
    depth = max(n, bound or 0) + 1
    return ext_hom(M, N, depth).cohomology(n)


def ext_self_table(X, bound: int) -> list[int]:
    """dim Ext^n(X, X) for n = 0..bound."""
    H = ext_hom(X, X, bound + 1)
    return H.ext_dims(0, bound)


# --- lifting ----------------------------------------------------------------


def generator_images(res, degree: int = 0) -> np.ndarray:
    """Images of the free generators of P^degree under the augmentation."""
    A = res.algebra
    aug = res.augmentation.get(degree)
    b = res.complex.rank(degree)
    if aug is None or b == 0:
        return np.zeros((res.target.dim(degree), b), dtype=np.int64)
    return aug.reshape(aug.shape[0], b, A.dim) @ A.unit % A.p


def augmentation_cocycle(res) -> np.ndarray:
    """The augmentation P -> M as a 0-cocycle of Hom(P, M)."""
    return generator_images(res, 0).T.reshape(-1)


def lift_cocycle(H: HomComplex, z: np.ndarray, s: int, target, lo: int | None = None) -> FreeChainMap:
    """Lift a cocycle z of Hom(P, N)^s to a chain map P -> Sigma^s Q.

    ``target`` is a resolution Q -> N of a module.  Components are produced
    for P-degrees from -s down to ``lo`` (default: as far as both complexes
    are computed).  They satisfy t d_P = (-1)^s d_Q t.
    """
    P = H.P
    Q = target.complex
    A = P.algebra
    p = A.p
    D = A.dim
    if not target.target.is_module or not H.Y.is_module:
        raise ValueError("lifting is implemented for module targets")
    N = target.target.term(0)
    floor = P.lo if Q.exact_below else max(P.lo, Q.lo - s)
    if lo is None:
        lo = floor
    if lo < floor:
        raise ValueError(f"resolutions are too short to lift down to degree {lo}")
    sign = -1 if s % 2 else 1
    comps: dict[int, FreeMap] = {}
    top = -s
    if P.rank(top):
        off = H.offsets(s).get(top)
        b = P.rank(top)
        vals = np.zeros((N.dim, b), dtype=np.int64)
        if off is not None:
            o, sz = off
            vals = np.asarray(z[o:o + sz], dtype=np.int64).reshape(b, N.dim).T
        eps = target.augmentation.get(0, np.zeros((N.dim, 0), dtype=np.int64))
        q = la.solve_many(eps, vals, p)
        if q is None:
            raise LiftError(f"cannot lift through the augmentation in degree {top}")
        comps[top] = FreeMap.from_images(A, q, Q.rank(0))
    for m in range(top - 1, lo - 1, -1):
        b = P.rank(m)
        if b == 0:
            continue
        prev = comps.get(m + 1) or FreeMap.zero(A, P.rank(m + 1), Q.rank(m + 1 + s))
        rhs = prev.compose(P.diff(m)).images()
        if sign < 0:
            rhs = (-rhs) % p
        dq = Q.diff(m + s).field()
        q = la.solve_many(dq, rhs, p)
        if q is None:
            raise LiftError(f"lifting system in degree {m} is inconsistent")
        comps[m] = FreeMap.from_images(A, q, Q.rank(m + s))
    return FreeChainMap(P, Q, s, comps)


def yoneda(alpha: ExtClass, beta: ExtClass, out: ExtGroup | None = None) -> ExtClass:
    """The Yoneda product alpha * beta (alpha after beta).

    beta lives in Ext^n(M, N) = H^n Hom(P_M, N); alpha in Ext^m(N, L) computed
    on a resolution P_N of N.  ``out`` is the group Ext^{m+n}(M, L) on P_M.
    """
    Hb = beta.group.hom
    Ha = alpha.group.hom
    if Ha.resolution is None:
        raise ValueError("the left factor must be computed on a resolution")
    m, n = alpha.degree, beta.degree
    if out is None:
        out = HomComplex(Hb.P, Ha.Y, Hb.resolution).cohomology(m + n)
    if out.hom.P is not Hb.P:
        raise ValueError("output group must use the resolution of the right factor")
    F = lift_cocycle(Hb, beta.cocycle, n, Ha.resolution, lo=-(m + n))
    z = out.hom.precompose(F, Ha, m) @ alpha.cocycle % out.hom.p
    return out.element(out.coords(z)[:, 0])


def identity_class(H: HomComplex) -> ExtClass:
    """The class of the augmentation in Ext^0(M, M)."""
    if H.resolution is None:
        raise ValueError("needs a resolution")
    g = H.cohomology(0)
    return g.element(g.coords(augmentation_cocycle(H.resolution))[:, 0])
