"""Minimal free resolutions of modules and bounded complexes, and pd verdicts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .complexes import Complex, FreeComplex, minimize
from .modules import (
    FreeMap,
    Module,
    cover_matrix,
    direct_sum,
    free_module,
    generators_of,
    is_projective,
    minimal_generators,
    submodule,
)


@dataclass(eq=False)
class Resolution:
    """A minimal quasi-isomorphism P -> X with P a complex of free modules.

    ``augmentation[m]`` is the field matrix P^m -> X^m.  The free complex
    reaches ``depth`` degrees below ``target.lo`` unless ``complete``.
    """

    target: Complex
    complex: FreeComplex
    augmentation: dict[int, np.ndarray]
    depth: int
    complete: bool
    minimal: bool = True

    @property
    def algebra(self):
        return self.target.algebra

    @property
    def betti(self) -> list[int]:
        """Ranks F_0, F_1, ... of a module resolution.

        A finished resolution ends with its first zero rank.
        """
        P = self.complex
        out = [P.rank(-n) for n in range(0, -P.lo + 1)]
        return out

    def betti_table(self) -> dict[int, int]:
        return self.complex.betti()


def syzygy_step(M: Module, cover: np.ndarray) -> FreeMap:
    """Minimal free cover of the kernel of ``cover`` (a field map R^b -> M).

    Returns the FreeMap R^g -> R^b sending generators to minimal generators
    of the kernel.
    """
    A = M.algebra
    p = A.p
    D = A.dim
    if cover.shape[0] != M.dim or cover.shape[1] % D:
        raise ValueError("cover has the wrong shape")
    b = cover.shape[1] // D
    V = free_module(A, b)
    img = la.rank(cover, p)
    if img != M.dim:
        raise ValueError("cover is not surjective")
    K = la.kernel_basis(cover, p)
    gens = generators_of(V, K)
    return FreeMap.from_images(A, gens, b)


def resolve_complex(X: Complex, max_deg: int) -> Resolution:
    """Minimal resolution of a bounded complex, built top-down.

    In degree n the new generators are minimal generators of the pairs
    (a, x) in P^{n+1} (+) X^n with d a = 0 and phi a = d x, taken modulo the
    pairs (0, d y).  This produces a minimal complex directly.
    """
    if max_deg < 0:
        raise ValueError("max_deg must be >= 0")
    A = X.algebra
    p = A.p
    D = A.dim
    ranks: dict[int, int] = {}
    diffs: dict[int, FreeMap] = {}
    aug: dict[int, np.ndarray] = {}
    complete = False
    bottom = X.lo - max_deg
    top = X.hi
    n = top
    for n in range(top, bottom - 1, -1):
        b1 = ranks.get(n + 1, 0)
        b2 = ranks.get(n + 2, 0)
        x0 = X.dim(n)
        x1 = X.dim(n + 1)
        dP = diffs[n + 1].field() if n + 1 in diffs else np.zeros((b2 * D, b1 * D), dtype=np.int64)
        phi1 = aug.get(n + 1, np.zeros((x1, b1 * D), dtype=np.int64))
        sys_ = np.block(
            [
                [dP, np.zeros((b2 * D, x0), dtype=np.int64)],
                [phi1, (-X.diff(n)) % p],
            ]
        )
        Z = la.kernel_basis(sys_, p)
        x_1 = X.dim(n - 1)
        B = np.concatenate([np.zeros((b1 * D, x_1), dtype=np.int64), X.diff(n - 1)], axis=0)
        V = direct_sum(free_module(A, b1), X.term(n))
        gens = generators_of(V, Z, modulo=B)
        r = gens.shape[1]
        ranks[n] = r
        diffs[n] = FreeMap.from_images(A, gens[: b1 * D], b1)
        aug[n] = cover_matrix(X.term(n), gens[b1 * D:])
        if r == 0 and n <= X.lo:
            complete = True
            break
    lo = n
    P = FreeComplex(
        A,
        lo,
        [ranks[m] for m in range(lo, top + 1)],
        [diffs[m] for m in range(lo, top)],
        exact_below=complete,
        coh_lo=X.lo,
    )
    return Resolution(X, P, aug, max_deg, complete)


def minimal_resolution(M: Module, max_deg: int) -> Resolution:
    return M.resolution(max_deg)


def is_minimal(P: FreeComplex) -> bool:
    return all(P.diff(n).in_radical() for n in range(P.lo, P.hi))


# --- projective dimension ---------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    """Finite(n), Infinite or AtLeast(b).

    ``exact`` is set when the verdict is a theorem about the target rather
    than a statement about the computed range.
    """

    kind: str  # "finite" | "infinite" | "at_least"
    value: int | None = None
    exact: bool = True

    @property
    def finite(self) -> bool:
        return self.kind == "finite"

    @property
    def infinite(self) -> bool:
        return self.kind == "infinite"

    def __str__(self) -> str:
        if self.kind == "finite":
            return f"Finite({self.value})"
        if self.kind == "infinite":
            return "Infinite"
        return f"AtLeast({self.value})"

    def to_json(self) -> dict:
        return {"kind": self.kind, "value": self.value, "exact": self.exact, "text": str(self)}


def Finite(n: int) -> Verdict:
    return Verdict("finite", n, True)


def Infinite() -> Verdict:
    return Verdict("infinite", None, True)


def AtLeast(b: int) -> Verdict:
    return Verdict("at_least", b, False)


def _top_degree(P: FreeComplex) -> int | None:
    nz = [n for n in range(P.lo, P.hi + 1) if P.rank(n)]
    return None if not nz else min(nz)


def _truncate_at_syzygy(P: FreeComplex, m: int) -> tuple[Module, FreeComplex, bool]:
    """Replace P^{<=m} by the image Z of d^m.

    Returns Z, and when Z is projective the bounded free complex
    Z -> P^{m+1} -> ... (with Z written as a free module).
    """
    A = P.algebra
    p = A.p
    V = free_module(A, P.rank(m + 1))
    img = la.column_basis(P.diff(m).field(), p)
    Z = submodule(V, img)
    proj, g = is_projective(Z)
    if not proj:
        return Z, P, False
    gens = minimal_generators(Z)
    images = la.matmul(img, gens, p)
    head = FreeMap.from_images(A, images, P.rank(m + 1))
    lo = m
    ranks = [g] + [P.rank(j) for j in range(m + 1, P.hi + 1)]
    diffs = [head] + [P.diff(j) for j in range(m + 1, P.hi)]
    return Z, FreeComplex(A, lo, ranks, diffs, exact_below=True, coh_lo=P.coh_lo), True


def pd_of_free_complex(P: FreeComplex, bound: int | None = None) -> Verdict:
    """Projective dimension of a complex of free modules with known coh_lo.

    The complex must extend at least one degree below ``coh_lo`` unless it is
    already finished.  pd is the negative of the lowest degree of a minimal
    bounded model; the zero object gets Finite(0).
    """
    A = P.algebra
    if P.exact_below:
        M = minimize(P)
        top = _top_degree(M)
        return Finite(0 if top is None else -top)
    if P.coh_lo is None or P.lo >= P.coh_lo:
        raise ValueError("complex does not reach below its cohomology range")
    m = P.lo
    Z, Y, proj = _truncate_at_syzygy(P, m)
    if proj:
        M = minimize(Y)
        top = _top_degree(M)
        return Finite(0 if top is None else -top)
    if A.self_injective:
        return Infinite()
    return AtLeast(bound if bound is not None else -P.lo)


def projective_dimension(target, bound: int = 12) -> Verdict:
    """pd of a module, a bounded complex, or a free complex with coh_lo."""
    if isinstance(target, FreeComplex):
        return pd_of_free_complex(target, bound)
    X = Complex.from_module(target) if isinstance(target, Module) else target
    res = X.resolution(max(bound, 1))
    P = res.complex
    if res.complete:
        top = _top_degree(P)
        return Finite(0 if top is None else -top)
    m = P.lo
    Z, _, proj = _truncate_at_syzygy(P, m)
    if proj:
        # the minimal resolution stops at degree m; rank P^{m-1} would be 0
        return Finite(-m)
    if X.algebra.self_injective:
        return Infinite()
    return AtLeast(bound)


def good_truncation(X: Complex, m: int) -> Complex:
    """tau_{>=m} X: 0 -> coker d^{m-1} -> X^{m+1} -> ..."""
    from .modules import quotient

    p = X.algebra.p
    if m <= X.lo:
        return X
    if m > X.hi:
        return Complex(X.algebra, m, [], [])
    img = la.column_basis(X.diff(m - 1), p)
    Q = quotient(X.term(m), img)
    terms = [Q.module] + [X.term(j) for j in range(m + 1, X.hi + 1)]
    diffs = []
    if m < X.hi:
        diffs.append(la.matmul(X.diff(m), Q.lift, p))
        diffs += [X.diff(j) for j in range(m + 1, X.hi)]
    return Complex(X.algebra, m, terms, diffs)


def free_good_truncation(P: FreeComplex, m: int) -> Complex:
    """tau_{>=m} of a free complex, as a bounded complex of modules."""
    return good_truncation(P.to_complex(), m)
