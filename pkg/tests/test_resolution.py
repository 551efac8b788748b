import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from injdim import linalg as la
from injdim.algebra import group_algebra, right_mult_operator, truncated_ci
from injdim.complexes import (
    ChainMap,
    Complex,
    check_complex,
    cohomology,
    cone,
    is_chain_map,
    shift,
)
from injdim.modules import direct_sum, free_module, random_module, syzygy_module, trivial_module
from injdim.resolution import (
    Finite,
    Infinite,
    is_minimal,
    minimal_resolution,
    projective_dimension,
    resolve_complex,
    syzygy_step,
)
from oracles import NaiveAlgebra, brute_betti

F2X = truncated_ci(2, [2])
F2XY = truncated_ci(2, [2, 2])


def naive(A):
    return NaiveAlgebra(A.p, A.mult.tolist(), A.augmentation.tolist())


def mult_complex(A, r, lo=-1):
    R = free_module(A, 1)
    return Complex(A, lo, [R, R], [right_mult_operator(A, r)])


def augmentation_commutes(res):
    """phi^{n+1} d_P^n = d_X^n phi^n wherever both sides are computed."""
    P, X, p = res.complex, res.target, res.algebra.p
    for n in range(P.lo, P.hi):
        lhs = la.matmul(res.augmentation.get(n + 1, np.zeros((X.dim(n + 1), P.rank(n + 1) * P.algebra.dim), dtype=np.int64)),
                        P.diff(n).field(), p)
        rhs = la.matmul(X.diff(n), res.augmentation[n], p) if X.dim(n) else np.zeros_like(lhs)
        if not np.array_equal(lhs, rhs):
            return False
    return True


class TestSyzygyStep:
    def test_free_has_zero_syzygy(self):
        R2 = free_module(F2XY, 2)
        assert syzygy_step(R2, np.eye(8, dtype=np.int64)).source == 0

    def test_residue_field_one_variable(self):
        k = trivial_module(F2X)
        d1 = syzygy_step(k, np.array([[1, 0]]))
        assert d1.source == 1 and d1.target == 1
        assert d1.entries.tolist() == [[[0, 1]]]

    def test_residue_field_two_variables(self):
        k = trivial_module(F2XY)
        assert syzygy_step(k, np.array([[1, 0, 0, 0]])).source == 2

    def test_rejects_non_surjective(self):
        with pytest.raises(ValueError):
            syzygy_step(trivial_module(F2X), np.zeros((1, 2), dtype=np.int64))


class TestMinimalResolution:
    def test_period_one(self):
        res = minimal_resolution(trivial_module(F2X), 10)
        assert res.betti == [1] * 11 and not res.complete

    def test_two_variables(self):
        res = minimal_resolution(trivial_module(F2XY), 10)
        assert res.betti == list(range(1, 12))

    def test_free(self):
        res = minimal_resolution(free_module(F2XY, 3), 5)
        assert res.betti == [3, 0] and res.complete

    @pytest.mark.parametrize("A", [F2X, F2XY, truncated_ci(3, [3]), group_algebra(2, [2, 2]), group_algebra(2, [4])], ids=str)
    def test_against_brute_force(self, A):
        mods = [trivial_module(A), syzygy_module(trivial_module(A), 1)]
        mods += [random_module(A, a, b, s, in_radical=s % 2 == 1) for s, (a, b) in enumerate([(1, 1), (2, 1), (2, 2), (3, 2)])]
        for M in mods:
            depth = 4
            res = minimal_resolution(M, depth)
            ref = brute_betti(naive(A), M.actions.tolist(), depth)
            got = res.betti[: len(ref)]
            assert got == ref[: len(got)], (M, got, ref)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**31), st.integers(0, 3), st.integers(1, 2))
    def test_chain_and_minimal(self, seed, a, b):
        M = random_module(F2XY, a, b, seed)
        res = minimal_resolution(M, 5)
        P = res.complex
        for n in range(P.lo, P.hi - 1):
            assert P.diff(n + 1).compose(P.diff(n)).is_zero()
        assert is_minimal(P) and augmentation_commutes(res)


class TestComplexes:
    def test_cone_of_identity_is_acyclic(self):
        X = mult_complex(F2XY, [0, 1, 1, 0])
        f = ChainMap(X, X, {n: np.eye(X.dim(n), dtype=np.int64) for n in (-1, 0)})
        C = cone(f)
        check_complex(C)
        assert all(cohomology(C, n).dim == 0 for n in range(C.lo, C.hi + 1))

    def test_cone_of_zero_is_direct_sum(self):
        X = Complex.from_module(trivial_module(F2X))
        Y = mult_complex(F2X, [0, 1])
        C = cone(ChainMap(X, Y, {}))
        for n in range(-2, 1):
            assert C.dim(n) == shift(X, 1).dim(n) + Y.dim(n)
            assert cohomology(C, n).dim == cohomology(shift(X, 1), n).dim + cohomology(Y, n).dim

    def test_multiplication_by_x(self):
        X = mult_complex(F2X, [0, 1])
        check_complex(X)
        assert cohomology(X, 0).dim == 1 and cohomology(X, -1).dim == 1

    def test_rejects_non_chain_map(self):
        X = mult_complex(F2X, [0, 1])
        bad = ChainMap(X, X, {0: np.eye(2, dtype=np.int64)})
        assert not is_chain_map(bad)
        with pytest.raises(ValueError):
            cone(bad)

    @pytest.mark.parametrize("seed", range(5))
    def test_cone_euler_characteristic(self, seed):
        # the long exact sequence forces chi(cone f) = chi(Y) - chi(X)
        A = F2XY
        M = random_module(A, 2, 2, seed, in_radical=True)
        res = minimal_resolution(M, 3)
        P = res.complex.to_complex()
        X = Complex.from_module(M)
        f = ChainMap(P, X, {0: res.augmentation[0]})
        assert is_chain_map(f)
        C = cone(f)

        def chi(Z):
            return sum((-1) ** n * cohomology(Z, n).dim for n in range(Z.lo, Z.hi + 1))

        assert chi(C) == chi(X) - chi(P)
        # the augmentation is a quasi-isomorphism away from the truncated bottom
        assert all(cohomology(C, n).dim == 0 for n in range(P.lo + 1, 1))


class TestResolveComplex:
    def test_module_matches_minimal_resolution(self):
        M = syzygy_module(trivial_module(F2XY), 1)
        X = Complex(F2XY, 0, [M], [])
        a = resolve_complex(X, 6)
        b = minimal_resolution(M, 6)
        assert a.betti == b.betti

    def test_acyclic_complex_resolves_to_zero(self):
        res = resolve_complex(mult_complex(F2XY, [1, 0, 0, 0]), 4)
        assert res.complete and sum(res.complex.ranks) == 0

    def test_free_minimal_complex_is_its_own_resolution(self):
        res = resolve_complex(mult_complex(F2X, [0, 1]), 8)
        P = res.complex
        assert res.complete
        assert {n: P.rank(n) for n in range(-3, 1)} == {-3: 0, -2: 0, -1: 1, 0: 1}

    def test_shifted_module(self):
        k = trivial_module(F2X)
        res = resolve_complex(Complex.from_module(k, 2), 4)
        assert [res.complex.rank(n) for n in range(-2, 3)] == [1, 1, 1, 1, 1]

    def test_two_term_complex_with_cohomology_in_two_degrees(self):
        k = trivial_module(F2XY)
        R = free_module(F2XY, 1)
        # R -> k augmentation in degrees -1, 0: cohomology is rad(R) in degree -1
        X = Complex(F2XY, -1, [R, k], [np.array([[1, 0, 0, 0]])])
        res = resolve_complex(X, 4)
        ref = minimal_resolution(syzygy_module(k, 1), 4).betti
        assert [res.complex.rank(-1 - n) for n in range(4)] == ref[:4]


class TestProjectiveDimension:
    def test_free(self):
        assert projective_dimension(free_module(F2XY, 2)) == Finite(0)

    def test_residue_field(self):
        v = projective_dimension(trivial_module(F2X))
        assert v == Infinite() and v.exact

    def test_perfect_complex(self):
        assert projective_dimension(mult_complex(F2X, [0, 1])) == Finite(1)

    def test_direct_sum_with_free(self):
        k = trivial_module(F2XY)
        assert projective_dimension(direct_sum(k, free_module(F2XY, 1))).infinite

    def test_shift(self):
        R = free_module(F2X, 1)
        assert projective_dimension(Complex.from_module(R, -3)) == Finite(3)
