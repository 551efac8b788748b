"""Finite-dimensional augmented local algebras over GF(p).

An algebra is stored by structure constants: ``mult[u, v, w]`` is the
coefficient of basis vector ``w`` in ``e_u * e_v``.  Elements are coefficient
vectors of length ``dim``.

Complete-intersection presentations are restricted to pure powers,
``k[x_1..x_c]/(x_1^a_1, .., x_c^a_c)``.  Abelian p-group algebras carry such a
presentation through ``x_i = g_i - 1``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg as la
from .linalg import PrimeField

_VARS = "xyzw"


class AlgebraError(ValueError):
    """Structure constants that fail an algebra axiom."""


@dataclass(frozen=True)
class CIPresentation:
    exponents: tuple[int, ...]

    def __post_init__(self):
        if any(a < 2 for a in self.exponents):
            raise AlgebraError(f"exponents must be >= 2, got {list(self.exponents)}")

    @property
    def c(self) -> int:
        return len(self.exponents)

    @cached_property
    def monomials(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(a) for a in self.exponents)))


def monomial_label(e: tuple[int, ...]) -> str:
    names = _VARS if len(e) <= len(_VARS) else [f"x{i + 1}" for i in range(len(e))]
    parts = []
    for v, k in zip(names, e):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts) or "1"


@dataclass(eq=False)
class Algebra:
    """A validated finite-dimensional local augmented algebra."""

    p: int
    mult: np.ndarray
    unit: np.ndarray
    augmentation: np.ndarray
    labels: tuple[str, ...]
    ci: CIPresentation | None = None
    # coordinates in the CI monomial basis = to_ci @ coordinates in this basis
    to_ci: np.ndarray | None = None
    # for group algebras: the group element (exponent tuple) behind each basis vector
    group: tuple[tuple[int, ...], ...] | None = None
    factors: tuple[int, ...] | None = None
    name: str = ""
    commutative: bool = field(init=False)

    def __post_init__(self):
        self.commutative = bool(np.array_equal(self.mult, self.mult.transpose(1, 0, 2)))

    @property
    def dim(self) -> int:
        return self.mult.shape[0]

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    @cached_property
    def left(self) -> np.ndarray:
        """left[u] is the matrix of v -> e_u * v."""
        return np.ascontiguousarray(self.mult.transpose(0, 2, 1))

    @cached_property
    def right(self) -> np.ndarray:
        """right[u] is the matrix of v -> v * e_u."""
        return np.ascontiguousarray(self.mult.transpose(1, 2, 0))

    @cached_property
    def from_ci(self) -> np.ndarray | None:
        if self.ci is None:
            return None
        return la.inverse(self.to_ci, self.p)

    def basis_vector(self, u: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[u] = 1
        return v

    def mul(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        return np.einsum("u,v,uvw->w", x, y, self.mult) % self.p

    def aug(self, x) -> int:
        return int(np.dot(self.augmentation, np.asarray(x, dtype=np.int64)) % self.p)

    def inverse_of(self, x) -> np.ndarray:
        """Two-sided inverse of a unit (augmentation nonzero)."""
        x = np.asarray(x, dtype=np.int64) % self.p
        if self.aug(x) == 0:
            raise ZeroDivisionError("element lies in the radical")
        y = la.solve(right_mult_operator(self, x), self.unit, self.p)
        if y is None:
            raise ZeroDivisionError("element is not invertible")
        return y

    @cached_property
    def radical(self) -> np.ndarray:
        """Columns: canonical basis of ker(augmentation)."""
        return la.kernel_basis(self.augmentation.reshape(1, -1), self.p)

    @cached_property
    def self_injective(self) -> bool:
        from .modules import dual_module, free_module, is_projective

        regular_right = free_module(opposite(self), 1)
        return is_projective(dual_module(regular_right))[0]

    def structure_equal(self, other: "Algebra") -> bool:
        return (
            self.p == other.p
            and np.array_equal(self.mult, other.mult)
            and np.array_equal(self.unit, other.unit)
            and np.array_equal(self.augmentation, other.augmentation)
        )

    def __repr__(self) -> str:
        return f"Algebra({self.name or 'dim=%d' % self.dim}, p={self.p})"


def _check_axioms(p, mult, unit, aug) -> None:
    d = mult.shape[0]
    if mult.shape != (d, d, d) or unit.shape != (d,) or aug.shape != (d,):
        raise AlgebraError("inconsistent tensor dimensions")
    eye = np.eye(d, dtype=np.int64)
    lu = np.einsum("u,uvw->vw", unit, mult) % p
    ru = np.einsum("v,uvw->uw", unit, mult) % p
    if not (np.array_equal(lu, eye) and np.array_equal(ru, eye)):
        raise AlgebraError("non-unital: unit does not act as identity")
    # (e_u e_v) e_w vs e_u (e_v e_w)
    left = np.einsum("uvx,xwy->uvwy", mult, mult) % p
    right = np.einsum("vwx,uxy->uvwy", mult, mult) % p
    if not np.array_equal(left, right):
        raise AlgebraError("non-associative multiplication")
    if int(aug @ unit % p) != 1:
        raise AlgebraError("augmentation not multiplicative: aug(1) != 1")
    lhs = np.outer(aug, aug) % p
    rhs = np.einsum("uvw,w->uv", mult, aug) % p
    if not np.array_equal(lhs, rhs):
        raise AlgebraError("augmentation not multiplicative")
    rad = la.kernel_basis(aug.reshape(1, -1), p)
    power = rad
    for _ in range(d):
        if power.shape[1] == 0:
            return
        prods = np.einsum("ur,vs,uvw->wrs", rad, power, mult) % p
        power = la.column_basis(prods.reshape(d, -1), p)
    if power.shape[1]:
        raise AlgebraError("not local: augmentation ideal is not nilpotent")


def _find_unit(p, mult) -> np.ndarray | None:
    d = mult.shape[0]
    # unit u: sum_u u_u mult[u, v, :] = e_v and sum_u u_u mult[v, u, :] = e_v
    eqs = np.concatenate(
        [mult.transpose(1, 2, 0).reshape(d * d, d), mult.transpose(0, 2, 1).reshape(d * d, d)]
    )
    rhs = np.concatenate([np.eye(d, dtype=np.int64).reshape(-1)] * 2)
    return la.solve(eqs % p, rhs, p)


def from_structure_constants(p, mult, unit=None, augmentation=None, labels=None, name="") -> Algebra:
    """Validate structure constants and build an Algebra.

    ``unit=None`` asks for the unit to be solved for; a missing unit is
    reported as a non-unital algebra.
    """
    PrimeField(p)
    mult = np.asarray(mult, dtype=np.int64) % p
    if mult.ndim != 3:
        raise AlgebraError("inconsistent tensor dimensions")
    d = mult.shape[0]
    if unit is None:
        unit = _find_unit(p, mult)
        if unit is None:
            raise AlgebraError("non-unital: no two-sided unit exists")
    unit = np.asarray(unit, dtype=np.int64) % p
    if augmentation is None:
        raise AlgebraError("augmentation is required")
    aug = np.asarray(augmentation, dtype=np.int64) % p
    _check_axioms(p, mult, unit, aug)
    labels = tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(d))
    return Algebra(p, mult, unit, aug, labels, name=name)


def _ci_mult(p: int, exponents) -> np.ndarray:
    mons = list(itertools.product(*(range(a) for a in exponents)))
    index = {m: i for i, m in enumerate(mons)}
    d = len(mons)
    mult = np.zeros((d, d, d), dtype=np.int64)
    for i, a in enumerate(mons):
        for j, b in enumerate(mons):
            s = tuple(x + y for x, y in zip(a, b))
            if s in index:
                mult[i, j, index[s]] = 1
    return mult


def truncated_ci(p: int, exponents) -> Algebra:
    """k[x_1..x_c]/(x_1^a_1, .., x_c^a_c) in its monomial basis."""
    PrimeField(p)
    ci = CIPresentation(tuple(int(a) for a in exponents))
    d = math.prod(ci.exponents)
    mult = _ci_mult(p, ci.exponents)
    unit = np.zeros(d, dtype=np.int64)
    unit[0] = 1
    labels = tuple(monomial_label(m) for m in ci.monomials)
    return Algebra(p, mult, unit, unit.copy(), labels, ci=ci, to_ci=np.eye(d, dtype=np.int64), name=_ci_name(p, ci))


def _ci_name(p: int, ci: CIPresentation) -> str:
    if not ci.c:
        return f"F{p}"
    xs = [monomial_label(tuple(int(i == j) for j in range(ci.c))) for i in range(ci.c)]
    return f"F{p}[{','.join(xs)}]/({','.join(f'{x}^{a}' for x, a in zip(xs, ci.exponents))})"



def _is_power_of(n: int, p: int) -> bool:
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


def group_algebra(p: int, invariant_factors) -> Algebra:
    """k[G] for G = Z/n_1 x .. x Z/n_r, every n_i a power of p.

    The basis is the group elements; the CI presentation has exponents n_i
    via x_i = g_i - 1.
    """
    PrimeField(p)
    factors = tuple(int(n) for n in invariant_factors)
    for n in factors:
        if n < 2 or not _is_power_of(n, p):
            raise AlgebraError(f"factor {n} is not a power of {p}")
    elems = list(itertools.product(*(range(n) for n in factors)))
    index = {g: i for i, g in enumerate(elems)}
    d = len(elems)
    mult = np.zeros((d, d, d), dtype=np.int64)
    for i, g in enumerate(elems):
        for j, h in enumerate(elems):
            mult[i, j, index[tuple((a + b) % n for a, b, n in zip(g, h, factors))]] = 1
    unit = np.zeros(d, dtype=np.int64)
    unit[0] = 1
    aug = np.ones(d, dtype=np.int64)
    # column for monomial x^e: prod_i (g_i - 1)^{e_i} expanded in group elements
    from_ci = np.zeros((d, d), dtype=np.int64)
    for col, e in enumerate(elems):
        per_var = []
        for ei in e:
            per_var.append([(k, math.comb(ei, k) * (-1) ** (ei - k)) for k in range(ei + 1)])
        for combo in itertools.product(*per_var):
            g = tuple(k for k, _ in combo)
            coeff = math.prod(c for _, c in combo)
            from_ci[index[g], col] += coeff
    from_ci %= p
    to_ci = la.inverse(from_ci, p)
    labels = tuple(
        "*".join((f"g{i + 1}" if k == 1 else f"g{i + 1}^{k}") for i, k in enumerate(g) if k) or "1"
        for g in elems
    )
    name = f"F{p}[" + "x".join(f"Z/{n}" for n in factors) + "]" if factors else f"F{p}"
    ci = CIPresentation(factors) if factors else CIPresentation(())
    return Algebra(p, mult, unit, aug, labels, ci=ci, to_ci=to_ci, group=tuple(elems), factors=factors, name=name)


def matrix_product(mult: np.ndarray, X: np.ndarray, Y: np.ndarray, p: int) -> np.ndarray:
    """out[l, j] = sum_i X[l, i] * Y[i, j] for matrices of algebra elements.

    Elements are coefficient vectors in the last axis; products use ``mult``.
    """
    l, i, U = X.shape
    j = Y.shape[1]
    V, W = mult.shape[1], mult.shape[2]
    if l == 0 or j == 0 or i == 0:
        return np.zeros((l, j, W), dtype=np.int64)
    tmp = (X.reshape(l * i, U) @ mult.reshape(U, V * W) % p).reshape(l, i, V, W)
    out = np.tensordot(tmp, Y, axes=([1, 2], [0, 2])) % p
    return np.ascontiguousarray(out.transpose(0, 2, 1))


def right_mult_operator(A: Algebra, r) -> np.ndarray:
    """Matrix of v -> v * r in the basis of A."""
    r = np.asarray(r, dtype=np.int64)
    if r.shape != (A.dim,):
        raise ValueError(f"element has length {r.shape}, expected {A.dim}")
    return np.einsum("u,uij->ij", r, A.right) % A.p


def left_mult_operator(A: Algebra, r) -> np.ndarray:
    r = np.asarray(r, dtype=np.int64)
    if r.shape != (A.dim,):
        raise ValueError(f"element has length {r.shape}, expected {A.dim}")
    return np.einsum("u,uij->ij", r, A.left) % A.p


def radical_basis(A: Algebra) -> list[np.ndarray]:
    return [A.radical[:, i].copy() for i in range(A.radical.shape[1])]


def opposite(A: Algebra) -> Algebra:
    if A.commutative:
        return A
    return Algebra(
        A.p,
        np.ascontiguousarray(A.mult.transpose(1, 0, 2)),
        A.unit,
        A.augmentation,
        A.labels,
        name=f"{A.name}^op" if A.name else "",
    )


# --- bounded polynomials over the ambient polynomial ring -------------------


@dataclass(frozen=True, eq=False)
class BddPoly:
    """A polynomial in c variables with exponent i below ``2 * a_i``.

    ``coeffs`` is a dense array of shape ``(2a_1, .., 2a_c)``.
    """

    p: int
    exponents: tuple[int, ...]
    coeffs: np.ndarray

    @classmethod
    def zero(cls, p, exponents):
        return cls(p, tuple(exponents), np.zeros(tuple(2 * a for a in exponents), dtype=np.int64))

    @classmethod
    def from_terms(cls, p, exponents, terms: dict) -> "BddPoly":
        poly = cls.zero(p, exponents)
        for e, c in terms.items():
            if any(k >= 2 * a for k, a in zip(e, exponents)):
                raise ValueError(f"exponent {e} exceeds the bound {tuple(2 * a for a in exponents)}")
            poly.coeffs[tuple(e)] = (poly.coeffs[tuple(e)] + c) % p
        return poly

    def terms(self) -> dict[tuple[int, ...], int]:
        return {tuple(int(i) for i in idx): int(self.coeffs[idx]) for idx in zip(*np.nonzero(self.coeffs))}

    def __eq__(self, other):
        return isinstance(other, BddPoly) and self.exponents == other.exponents and np.array_equal(self.coeffs, other.coeffs)

    def __add__(self, other: "BddPoly") -> "BddPoly":
        return BddPoly(self.p, self.exponents, (self.coeffs + other.coeffs) % self.p)

    def __mul__(self, other: "BddPoly") -> "BddPoly":
        out = BddPoly.zero(self.p, self.exponents)
        shape = out.coeffs.shape
        for e, c in self.terms().items():
            for f, d in other.terms().items():
                s = tuple(x + y for x, y in zip(e, f))
                if any(k >= n for k, n in zip(s, shape)):
                    raise ValueError("product exceeds the exponent bound")
                out.coeffs[s] = (out.coeffs[s] + c * d) % self.p
        return out

    def __repr__(self):
        t = self.terms()
        if not t:
            return "0"
        return " + ".join(f"{c}*{monomial_label(e)}" for e, c in sorted(t.items()))


def _require_ci(A: Algebra) -> CIPresentation:
    if A.ci is None:
        raise AlgebraError("algebra has no complete-intersection presentation")
    return A.ci


def lift_to_poly(A: Algebra, r) -> BddPoly:
    """Canonical lift of r to the polynomial ring: every exponent below a_i."""
    ci = _require_ci(A)
    coords = la.matmul(A.to_ci, np.asarray(r, dtype=np.int64).reshape(-1, 1), A.p)[:, 0]
    return BddPoly.from_terms(A.p, ci.exponents, {m: int(c) for m, c in zip(ci.monomials, coords) if c})


def reduce_poly(A: Algebra, g: BddPoly) -> np.ndarray:
    """Image of g in A (monomials reaching some x_i^a_i vanish)."""
    ci = _require_ci(A)
    coords = np.array([g.coeffs[m] for m in ci.monomials], dtype=np.int64)
    return la.matmul(A.from_ci, coords.reshape(-1, 1), A.p)[:, 0]


def divide_by_ci(A: Algebra, g: BddPoly) -> list[BddPoly]:
    """Quotients q_i with g = sum_i x_i^a_i q_i.

    Each monomial goes to the least i with exponent e_i >= a_i.
    """
    ci = _require_ci(A)
    qs = [BddPoly.zero(A.p, ci.exponents) for _ in range(ci.c)]
    for e, c in g.terms().items():
        hit = [i for i, (k, a) in enumerate(zip(e, ci.exponents)) if k >= a]
        if not hit:
            raise AlgebraError(f"monomial {monomial_label(e)} is not in the ideal")
        i = hit[0]
        q = list(e)
        q[i] -= ci.exponents[i]
        qs[i].coeffs[tuple(q)] = (qs[i].coeffs[tuple(q)] + c) % A.p
    return qs


@dataclass(frozen=True, eq=False)
class Ambient:
    """Vectorised view of the polynomial lift used by the operator construction.

    Polynomials with exponents below ``2 a_i`` are coordinate vectors over the
    monomials of k[x]/(x_i^{2 a_i}); ``lift`` embeds A, ``quotient[i]`` maps a
    polynomial in the ideal to the reduction of its i-th quotient in A.
    """

    algebra: Algebra
    big: Algebra
    lift: np.ndarray  # big.dim x A.dim
    quotient: np.ndarray  # c x A.dim x big.dim
    remainder: np.ndarray  # A.dim x big.dim (monomials outside the ideal)


def ambient(A: Algebra) -> Ambient:
    cached = A.__dict__.get("_ambient")
    if cached is not None:
        return cached
    ci = _require_ci(A)
    big = truncated_ci(A.p, [2 * a for a in ci.exponents])
    big_index = {m: i for i, m in enumerate(big.ci.monomials)}
    small_index = {m: i for i, m in enumerate(ci.monomials)}
    embed = np.zeros((big.dim, A.dim), dtype=np.int64)
    for m, i in small_index.items():
        embed[big_index[m], i] = 1
    quotient = np.zeros((ci.c, A.dim, big.dim), dtype=np.int64)
    remainder = np.zeros((A.dim, big.dim), dtype=np.int64)
    for m, j in big_index.items():
        hit = [i for i, (k, a) in enumerate(zip(m, ci.exponents)) if k >= a]
        if not hit:
            remainder[small_index[m], j] = 1
            continue
        i = hit[0]
        q = list(m)
        q[i] -= ci.exponents[i]
        q = tuple(q)
        if q in small_index:
            quotient[i, small_index[q], j] = 1
    lift = la.matmul(embed, A.to_ci, A.p)
    quotient = np.einsum("ab,ibj->iaj", A.from_ci, quotient) % A.p
    remainder = la.matmul(A.from_ci, remainder, A.p)
    amb = Ambient(A, big, lift, quotient, remainder)
    A.__dict__["_ambient"] = amb
    return amb
