"""Cohomology operators, Koszul objects and the torsion criteria.

Eisenbud operators: lift the differential of a free complex over
R = k[x]/(x_1^{a_1}, .., x_c^{a_c}) entrywise to k[x], square it and divide by
the relations, d~ d~ = sum_i x_i^{a_i} t~_i.  The reductions t_i are chain
maps P -> Sigma^2 P.

Hopf action (group algebras): a class alpha in Ext^n(k, k) acts on
Ext(M, M) through alpha (x) M on the resolution P_k (x) M of M.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .algebra import Algebra, AlgebraError, ambient, matrix_product
from .complexes import Complex, FreeChainMap, FreeComplex, chain_map_defects, cone_free
from .ext import (
    ExtClass,
    HomComplex,
    augmentation_cocycle,
    ext_hom,
    lift_cocycle,
)
from .modules import FreeMap, Module, tensor_diagonal, trivial_module
from .resolution import Resolution, good_truncation, projective_dimension


class OperatorError(RuntimeError):
    pass


# --- Eisenbud operators -----------------------------------------------------


def eisenbud_operators(P: FreeComplex, perturb: tuple[int, int, int, int] | None = None) -> list[FreeChainMap]:
    """The operators t_1..t_c on a complex of free modules over a CI algebra.

    ``perturb = (m, i, j, v)`` adds x_v^{a_v} to the lift of entry (i, j)
    of d^m; the induced action on Ext must not change.
    """
    A = P.algebra
    if A.ci is None:
        raise AlgebraError("Eisenbud operators need a complete-intersection presentation")
    amb = ambient(A)
    big = amb.big
    p = A.p
    c = A.ci.c
    lifted = {m: P.diff(m).entries @ amb.lift.T % p for m in range(P.lo, P.hi)}
    if perturb is not None:
        m, i, j, v = perturb
        if m in lifted and lifted[m].size:
            mono = [0] * c
            mono[v] = A.ci.exponents[v]
            idx = big.ci.monomials.index(tuple(mono))
            lifted[m] = lifted[m].copy()
            lifted[m][i, j, idx] = (lifted[m][i, j, idx] + 1) % p
    comps: list[dict[int, FreeMap]] = [{} for _ in range(c)]
    for m in range(P.lo, P.hi - 1):
        d0, d1 = lifted[m], lifted[m + 1]
        if d0.size == 0 or d1.size == 0:
            continue
        sq = matrix_product(big.mult, d1, d0, p)
        if np.any(sq @ amb.remainder.T % p):
            raise OperatorError(f"squared lift of d^{m} is not in the ideal")
        for i in range(c):
            ent = sq @ amb.quotient[i].T % p
            comps[i][m] = FreeMap(A, ent)
    return [FreeChainMap(P, P, 2, comps[i], label=f"chi{i + 1}") for i in range(c)]


# --- actions on Ext ---------------------------------------------------------


@dataclass(eq=False)
class OperatorAction:
    """Matrices Ext^n -> Ext^{n+degree} in the canonical bases."""

    label: str
    degree: int
    matrices: dict[int, np.ndarray]

    @property
    def degrees(self) -> list[int]:
        return sorted(self.matrices)

    def matrix(self, n: int) -> np.ndarray:
        return self.matrices[n]

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "degree": self.degree,
            "matrices": {str(n): self.matrices[n].tolist() for n in self.degrees},
        }


def operator_action(t: FreeChainMap, H: HomComplex, lo: int, hi: int, label: str | None = None) -> OperatorAction:
    """Action of t by precomposition on H^n for lo <= n and n + deg <= hi."""
    s = t.degree
    p = H.p
    mats = {}
    for n in range(lo, hi - s + 1):
        src = H.cohomology(n)
        dst = H.cohomology(n + s)
        if src.dim == 0 or dst.dim == 0:
            mats[n] = np.zeros((dst.dim, src.dim), dtype=np.int64)
            continue
        img = la.matmul(H.precompose(t, H, n), src.basis, p)
        mats[n] = dst.coords(img)
    return OperatorAction(label or t.label, s, mats)


def compose_actions(outer: OperatorAction, inner: OperatorAction, p: int) -> OperatorAction:
    """outer o inner on the degrees where both are known."""
    mats = {}
    for n, m in inner.matrices.items():
        o = outer.matrices.get(n + inner.degree)
        if o is not None:
            mats[n] = la.matmul(o, m, p)
    return OperatorAction(f"{outer.label}*{inner.label}", outer.degree + inner.degree, mats)


# --- Hopf action ------------------------------------------------------------


def _tensor_transport(A: Algebra, M: Module) -> np.ndarray:
    """Psi[u, l] = coordinates in R^n of e_u (x) m_l under R^n ~ R (x) M."""
    D, n, p = A.dim, M.dim, A.p
    phi = np.zeros((D * n, n * D), dtype=np.int64)
    for l in range(n):
        for a in range(D):
            phi[:, l * D + a] = np.kron(np.eye(D, dtype=np.int64)[a], M.actions[a][:, l])
    inv = la.inverse(phi % p, p)
    # inv[l'*D + w, u*n + l]
    return np.ascontiguousarray(inv.reshape(n, D, D, n).transpose(2, 3, 0, 1))


def _tensor_freemap(T: FreeMap, psi: np.ndarray) -> FreeMap:
    b, a, D = T.entries.shape
    n = psi.shape[1]
    A = T.algebra
    if a == 0 or b == 0 or n == 0:
        return FreeMap.zero(A, a * n, b * n)
    out = np.tensordot(T.entries, psi, axes=([2], [0])) % A.p  # i j l k w
    return FreeMap(A, np.ascontiguousarray(out.transpose(0, 3, 1, 2, 4)).reshape(b * n, a * n, D))


def tensor_resolution(res_k: Resolution, M: Module) -> tuple[Resolution, np.ndarray]:
    """P_k (x) M with the diagonal action, rewritten as a free resolution of M."""
    A = res_k.algebra
    if A.group is None:
        raise AlgebraError("the Hopf action needs a group algebra")
    p, D, n = A.p, A.dim, M.dim
    psi = _tensor_transport(A, M)
    P = res_k.complex
    G = FreeComplex(
        A,
        P.lo,
        [r * n for r in P.ranks],
        [_tensor_freemap(d, psi) for d in P.diffs],
        exact_below=P.exact_below,
        coh_lo=0,
    )
    b0 = P.rank(0)
    eps = res_k.augmentation[0]  # 1 x b0*D
    eps_t = la.kron(eps, np.eye(n, dtype=np.int64), p)  # n x (b0*D*n), tensor order (i, u, l)
    # free coordinates (i, l, a) -> tensor coordinates (i, u, l')
    phi = np.zeros((D * n, n * D), dtype=np.int64)
    for l in range(n):
        for a in range(D):
            phi[:, l * D + a] = np.kron(np.eye(D, dtype=np.int64)[a], M.actions[a][:, l])
    aug = la.matmul(eps_t, la.kron(np.eye(b0, dtype=np.int64), phi, p), p)
    res = Resolution(Complex.from_module(M), G, {0: aug}, res_k.depth, res_k.complete, minimal=False)
    return res, psi


@dataclass(eq=False)
class HopfContext:
    """Precomputed data for the Hopf action on Ext(M, M) up to a bound."""

    M: Module
    bound: int
    res_k: Resolution
    H_k: HomComplex
    res_M: Resolution
    H_M: HomComplex
    G: Resolution
    H_G: HomComplex
    psi: np.ndarray
    sigma: FreeChainMap
    pi: FreeChainMap

    @classmethod
    def build(cls, M: Module, bound: int, H_M: HomComplex | None = None) -> "HopfContext":
        A = M.algebra
        k = trivial_module(A)
        H_k = ext_hom(k, k, bound + 1)
        res_k = H_k.resolution
        if H_M is None:
            H_M = ext_hom(M, M, bound + 1)
        res_M = H_M.resolution
        G, psi = tensor_resolution(res_k, M)
        H_G = HomComplex(G.complex, Complex.from_module(M), G)
        lo = -bound
        sigma = lift_cocycle(H_M, augmentation_cocycle(res_M), 0, G, lo=max(lo, res_M.complex.lo))
        pi = lift_cocycle(H_G, augmentation_cocycle(G), 0, res_M, lo=max(lo, G.complex.lo))
        return cls(M, bound, res_k, H_k, res_M, H_M, G, H_G, psi, sigma, pi)

    def action(self, alpha: ExtClass, label: str = "eta") -> OperatorAction:
        s = alpha.degree
        A = self.M.algebra
        if A.p != 2 and s % 2:
            raise ValueError("odd-degree classes do not act centrally in odd characteristic")
        lift = lift_cocycle(self.H_k, alpha.cocycle, s, self.res_k, lo=max(-self.bound, self.res_k.complex.lo))
        comps = {m: _tensor_freemap(f, self.psi) for m, f in lift.components.items()}
        aG = FreeChainMap(self.G.complex, self.G.complex, s, comps, label)
        H_M, H_G, p = self.H_M, self.H_G, A.p
        mats = {}
        for n in range(0, self.bound - s + 1):
            src = H_M.cohomology(n)
            dst = H_M.cohomology(n + s)
            if src.dim == 0 or dst.dim == 0:
                mats[n] = np.zeros((dst.dim, src.dim), dtype=np.int64)
                continue
            v = la.matmul(H_G.precompose(self.pi, H_M, n), src.basis, p)
            w = la.matmul(H_G.precompose(aG, H_G, n), v, p)
            x = la.matmul(H_M.precompose(self.sigma, H_G, n + s), w, p)
            mats[n] = dst.coords(x)
        return OperatorAction(label, s, mats)


def hopf_action(alpha: ExtClass, M: Module, bound: int, context: HopfContext | None = None) -> OperatorAction:
    """eta_M(alpha) on Ext^n(M, M) for n = 0..bound - deg(alpha).

    ``alpha`` must be a class of Ext(k, k) computed on the minimal
    resolution of k (for instance from ``ext_hom(k, k, bound + 1)``).
    """
    if M.algebra.group is None:
        raise AlgebraError("the Hopf action needs a group algebra")
    ctx = context or HopfContext.build(M, bound)
    if alpha.group.hom.P is not ctx.H_k.P:
        # re-express alpha on the context's resolution of k (same canonical data)
        g = ctx.H_k.cohomology(alpha.degree)
        alpha = g.element(alpha.coords)
    return ctx.action(alpha)


def degree_two_classes(A: Algebra, bound: int) -> tuple[HomComplex, list[ExtClass]]:
    k = trivial_module(A)
    H = ext_hom(k, k, bound + 1)
    g = H.cohomology(2)
    return H, [g.basis_element(i) for i in range(g.dim)]


# --- Koszul objects ---------------------------------------------------------


def koszul_object(P: FreeComplex, ops: list[int] | None = None) -> FreeComplex:
    """Iterated cone P // (chi_i for i in ops), unminimized.

    The operators are recomputed on each intermediate cone.  The result is
    valid (agrees with the honest cone) in degrees above its ``lo``.
    """
    A = P.algebra
    if A.ci is None:
        raise AlgebraError("Koszul objects here use Eisenbud operators")
    if ops is None:
        ops = list(range(A.ci.c))
    K = P
    for i in ops:
        t = eisenbud_operators(K)[i]
        if chain_map_defects(t):
            raise OperatorError("operator is not a chain map")
        K = cone_free(t)
    return K


def koszul_of(X, ops: list[int] | None = None, depth: int | None = None) -> FreeComplex:
    """X // s for a module or bounded complex X, from its minimal resolution."""
    Xc = Complex.from_module(X) if isinstance(X, Module) else X
    r = Xc.algebra.ci.c if ops is None else len(ops)
    res = Xc.resolution(depth if depth is not None else 2 * r + 4)
    return koszul_object(res.complex, ops)


def koszul_pd(X, ops: list[int] | None = None, depth: int | None = None, bound: int = 12):
    return projective_dimension(koszul_of(X, ops, depth), bound)


@dataclass
class AnnihilationReport:
    ext_k_K: int | None  # least e with (s)^e = 0 on Ext(Y, X // s)
    ext_K_k: int | None  # least e with (s)^e = 0 on Ext(X // s, Y)
    cap: int

    @property
    def exponent(self) -> int | None:
        if self.ext_k_K is None or self.ext_K_k is None:
            return None
        return max(self.ext_k_K, self.ext_K_k)

    def to_json(self) -> dict:
        return {"ext_Y_K": self.ext_k_K, "ext_K_Y": self.ext_K_k, "exponent": self.exponent, "cap": self.cap}


def _least_exponent(actions: list[OperatorAction], dims: dict[int, int], p: int, cap: int) -> int | None:
    """Least e such that every degree-e monomial in the actions is zero on the known range."""
    if not any(dims.values()):
        return 0
    r = len(actions)
    for e in range(1, cap + 1):
        ok = True
        for mono in itertools.combinations_with_replacement(range(r), e):
            for n in sorted(dims):
                if not dims[n]:
                    continue
                cur = np.eye(dims[n], dtype=np.int64)
                deg = n
                known = True
                for i in mono:
                    mat = actions[i].matrices.get(deg)
                    if mat is None:
                        known = False
                        break
                    cur = la.matmul(mat, cur, p)
                    deg += actions[i].degree
                if known and np.any(cur):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return e
    return None


def annihilation_exponent(X, ops: list[int] | None = None, Y: Module | None = None, cap: int | None = None,
                          depth: int | None = None) -> AnnihilationReport:
    """Measured exponent e with (s)^e killing Ext(Y, X // s) and Ext(X // s, Y)."""
    Xc = Complex.from_module(X) if isinstance(X, Module) else X
    A = Xc.algebra
    if ops is None:
        ops = list(range(A.ci.c))
    r = len(ops)
    cap = 2 * r if cap is None else cap
    Y = trivial_module(A) if Y is None else Y
    Yc = Complex.from_module(Y)
    span = Xc.hi - Xc.lo
    depth = depth if depth is not None else 2 * r + 2 * cap + span + 6
    K = koszul_of(Xc, ops, depth)
    p = A.p

    # Ext(K, Y): operators on K, acting by precomposition
    H1 = HomComplex(K, Yc)
    lo1, hi1 = H1.valid_range()
    dims1 = {n: H1.cohomology(n).dim for n in range(lo1, hi1 + 1)}
    tK = eisenbud_operators(K)
    acts1 = [operator_action(tK[i], H1, lo1, hi1) for i in ops]
    e1 = _least_exponent(acts1, dims1, p, cap)

    # Ext(Y, K): resolution of Y against the good truncation of K
    m = K.coh_lo
    T = good_truncation(K.to_complex(), m)
    res_Y = Yc.resolution(K.hi - m + 2 * cap + 4)
    H2 = HomComplex(res_Y.complex, T, res_Y)
    lo2, hi2 = H2.valid_range()
    dims2 = {n: H2.cohomology(n).dim for n in range(lo2, hi2 + 1)}
    tY = eisenbud_operators(res_Y.complex)
    acts2 = [operator_action(tY[i], H2, lo2, hi2) for i in ops]
    e2 = _least_exponent(acts2, dims2, p, cap)
    return AnnihilationReport(e2, e1, cap)


# --- torsion criteria -------------------------------------------------------


@dataclass
class CriterionReport:
    d: int | None
    l: int | None
    bound: int
    window: int | None  # least n with Ext^j = 0 for n <= j <= n + d - 1
    ml: int | None  # least m with Ext^{ml} = 0
    nilpotency: dict[str, int | None] = field(default_factory=dict)
    status: str = "UNAVAILABLE"

    @property
    def certified(self) -> bool:
        return self.status == "CERTIFIED_TORSION"

    @property
    def fired(self) -> str:
        if self.window is not None:
            return f"WINDOW(n={self.window})"
        if self.ml is not None:
            return f"DEGREE_ML(m={self.ml})"
        return "NONE"

    @property
    def jointly_nilpotent(self) -> bool:
        return bool(self.nilpotency) and all(v is not None for v in self.nilpotency.values())

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "d": self.d,
            "l": self.l,
            "bound": self.bound,
            "window": self.window,
            "ml": self.ml,
            "fired": self.fired,
            "nilpotency": dict(self.nilpotency),
            "jointly_nilpotent": self.jointly_nilpotent,
        }


def first_window(table: list[int], d: int) -> int | None:
    for n in range(0, len(table) - d + 1):
        if all(table[j] == 0 for j in range(n, n + d)):
            return n
    return None


def first_ml(table: list[int], l: int) -> int | None:
    for m in range(0, (len(table) - 1) // l + 1):
        if table[m * l] == 0:
            return m
    return None


def nilpotency_index(action: OperatorAction, p: int) -> int | None:
    """Least e with action^e = 0 from every computed degree.

    Only exponents leaving at least one start degree in each residue class
    modulo the operator degree are tried.
    """
    s = action.degree
    degs = action.degrees
    if not degs:
        return None
    lo, hi = degs[0], degs[-1] + s
    e = 1
    while hi - lo - s * e >= s - 1:
        zero = True
        for n in range(lo, hi - s * e + 1):
            cur = None
            deg = n
            for _ in range(e):
                mat = action.matrices.get(deg)
                if mat is None:
                    cur = None
                    break
                cur = mat if cur is None else la.matmul(mat, cur, p)
                deg += s
            if cur is not None and np.any(cur):
                zero = False
                break
        if zero:
            return e
        e += 1
    return None


def torsion_verdict(table: list[int], actions: list[OperatorAction], degrees: list[int], p: int = 2) -> CriterionReport:
    """Apply both vanishing criteria; nilpotence is recorded as evidence only."""
    bound = len(table) - 1
    if not degrees:
        return CriterionReport(None, None, bound, None, None, {}, "UNAVAILABLE")
    d = max(degrees)
    l = math.lcm(*degrees)
    w = first_window(table, d)
    ml = first_ml(table, l)
    nil = {a.label: nilpotency_index(a, p) for a in actions}
    status = "CERTIFIED_TORSION" if (w is not None or ml is not None) else "NOT_CERTIFIED"
    return CriterionReport(d, l, bound, w, ml, nil, status)
