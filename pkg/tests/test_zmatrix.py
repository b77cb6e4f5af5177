import itertools
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fppcert.errors import CompositionNotZero, NoSolution
from fppcert.zmatrix import (
    ColumnEchelonSolver,
    ZMatrix,
    hermite_normal_form,
    homology_of_pair,
    kernel_basis,
    lattice_column_basis,
    smith_normal_form,
    solve_integer_system,
)

small_matrices = st.integers(1, 4).flatmap(
    lambda n: st.integers(1, 4).flatmap(
        lambda m: st.lists(
            st.lists(st.integers(-9, 9), min_size=m, max_size=m),
            min_size=n, max_size=n,
        ).map(lambda rows: ZMatrix.from_rows(rows, cols=m))
    )
)


def det(M: ZMatrix) -> int:
    n = M.rows
    if n == 0:
        return 1
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = [False] * n
        for i in range(n):
            if seen[i]:
                continue
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        total += sign * _prod(M[i, perm[i]] for i in range(n))
    return total


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def minors_gcd(M: ZMatrix, k: int) -> int:
    g = 0
    for rows in itertools.combinations(range(M.rows), k):
        for cols in itertools.combinations(range(M.cols), k):
            sub = ZMatrix.from_rows(
                [[M[i, j] for j in cols] for i in rows], cols=k)
            g = gcd(g, det(sub))
    return abs(g)


class TestHermite:
    def test_identity(self):
        H, U = hermite_normal_form(ZMatrix.identity(3))
        assert H == ZMatrix.identity(3)
        assert U == ZMatrix.identity(3)

    def test_small_example(self):
        A = ZMatrix.from_rows([[2, 4], [6, 8]])
        H, U = hermite_normal_form(A)
        assert U @ A == H
        assert (H[0, 0], H[1, 1]) == (2, 4)
        assert H[1, 0] == 0

    def test_zero(self):
        A = ZMatrix.zero(2, 3)
        H, U = hermite_normal_form(A)
        assert H == A
        assert U == ZMatrix.identity(2)

    @given(small_matrices)
    @settings(max_examples=200)
    def test_hermite_contract(self, A):
        H, U = hermite_normal_form(A)
        assert U @ A == H
        assert abs(det(U)) == 1
        # row echelon shape with positive pivots, reduced above
        pivots = []
        for i in range(H.rows):
            row = H.entries[i]
            nz = [j for j, x in enumerate(row) if x]
            if not nz:
                continue
            j = nz[0]
            assert not pivots or j > pivots[-1][1]
            assert H[i, j] > 0
            for above in range(i):
                assert 0 <= H[above, j] < H[i, j]
            pivots.append((i, j))


class TestSmith:
    def test_example(self):
        snf = smith_normal_form(ZMatrix.from_rows([[2, 4], [6, 8]]))
        assert snf.diagonal() == [2, 4]
        assert snf.invariant_factors == (2, 4)

    def test_diagonal_input_gets_sorted_by_divisibility(self):
        snf = smith_normal_form(ZMatrix.from_rows([[6, 0], [0, 4]]))
        assert snf.diagonal() == [2, 12]

    def test_identity(self):
        snf = smith_normal_form(ZMatrix.identity(4))
        assert snf.diagonal() == [1, 1, 1, 1]
        assert snf.invariant_factors == ()
        assert snf.rank == 4

    @given(small_matrices)
    @settings(max_examples=200)
    def test_smith_contract(self, A):
        snf = smith_normal_form(A)
        assert snf.U @ A @ snf.V == snf.S
        assert abs(det(snf.U)) == 1
        assert abs(det(snf.V)) == 1
        diag = snf.diagonal()
        for i in range(len(diag) - 1):
            if diag[i + 1]:
                assert diag[i] != 0 and diag[i + 1] % diag[i] == 0
            assert diag[i] >= 0
        for i in range(snf.S.rows):
            for j in range(snf.S.cols):
                if i != j:
                    assert snf.S[i, j] == 0

    @given(small_matrices)
    @settings(max_examples=60)
    def test_diagonal_matches_minor_gcds(self, A):
        snf = smith_normal_form(A)
        diag = snf.diagonal()
        prod = 1
        for k in range(1, min(3, min(A.rows, A.cols)) + 1):
            prod *= diag[k - 1]
            assert abs(prod) == minors_gcd(A, k)


class TestSolve:
    def test_identity(self):
        assert solve_integer_system(ZMatrix.identity(3), [5, -2, 7]) == [5, -2, 7]

    def test_parity_obstruction(self):
        with pytest.raises(NoSolution):
            solve_integer_system(ZMatrix.from_rows([[2]]), [3])

    def test_bezout(self):
        x = solve_integer_system(ZMatrix.from_rows([[2, 3]]), [1])
        assert 2 * x[0] + 3 * x[1] == 1

    @given(small_matrices, st.data())
    @settings(max_examples=200)
    def test_solution_by_substitution(self, A, data):
        x = data.draw(st.lists(st.integers(-5, 5), min_size=A.cols, max_size=A.cols))
        b = A.mul_vec(x)
        sol = solve_integer_system(A, b)
        assert A.mul_vec(sol) == b


class TestKernel:
    def test_identity_has_trivial_kernel(self):
        K = kernel_basis(ZMatrix.identity(3))
        assert K.cols == 0

    def test_line(self):
        K = kernel_basis(ZMatrix.from_rows([[1, 1]]))
        assert K.cols == 1
        col = [K[0, 0], K[1, 0]]
        assert col in ([1, -1], [-1, 1])

    def test_exponent_map_of_the_order_243_fixture(self):
        # exponent rows (3,0),(0,0),(-3,-3) viewed as a map Z^3 -> Z^2
        A = ZMatrix.from_rows([[3, 0, -3], [0, 0, -3]])
        assert kernel_basis(A).cols == 1

    @given(small_matrices)
    @settings(max_examples=200)
    def test_kernel_contract(self, A):
        K = kernel_basis(A)
        snf = smith_normal_form(A, transforms=False)
        assert K.cols == A.cols - snf.rank
        for j in range(K.cols):
            col = [K[i, j] for i in range(K.rows)]
            assert A.mul_vec(col) == [0] * A.rows

    @given(small_matrices, st.data())
    @settings(max_examples=100)
    def test_brute_force_kernel_vectors_lie_in_span(self, A, data):
        # any small kernel vector must be an integer combination of the basis
        v = data.draw(st.lists(st.integers(-3, 3), min_size=A.cols, max_size=A.cols))
        if A.mul_vec(v) != [0] * A.rows:
            return
        K = kernel_basis(A)
        if all(x == 0 for x in v):
            return
        solver = ColumnEchelonSolver(K.columns_sparse(), K.rows, transform=False)
        solver.solve_coefficients(v)  # raises NoSolution if not in the span


class TestLatticeBasis:
    def test_redundant_columns_collapse(self):
        cols = [{0: 2}, {0: 4}, {0: 3}]
        basis = lattice_column_basis(cols, 1)
        assert basis == [{0: 1}]

    def test_preserves_lattice(self):
        cols = [{0: 2, 1: 2}, {0: 4, 1: 0}]
        basis = lattice_column_basis(cols, 2)
        M = ZMatrix.from_columns_sparse(basis, 2)
        snf = smith_normal_form(M, transforms=False)
        orig = smith_normal_form(ZMatrix.from_columns_sparse(cols, 2), transforms=False)
        assert snf.invariant_factors == orig.invariant_factors
        assert snf.rank == orig.rank


class TestHomologyOfPair:
    def test_free_of_rank_two(self):
        h = homology_of_pair(ZMatrix.zero(2, 0), ZMatrix.zero(0, 2))
        assert h.free_rank == 2
        assert h.invariant_factors == ()

    def test_z_mod_3(self):
        h = homology_of_pair(ZMatrix.from_rows([[3]]), ZMatrix.zero(1, 1))
        assert h.free_rank == 0
        assert h.invariant_factors == (3,)

    def test_composition_check(self):
        with pytest.raises(CompositionNotZero):
            homology_of_pair(ZMatrix.identity(2), ZMatrix.identity(2))

    def test_coordinates_kill_boundaries(self):
        # Z^2 with relations (2,0) and (0,4): coordinates of relation images vanish
        d_hi = ZMatrix.from_rows([[2, 0], [0, 4]])
        h = homology_of_pair(d_hi, ZMatrix.zero(0, 2))
        assert h.invariant_factors == (2, 4)
        assert h.torsion_coordinates([2, 0]) == (0, 0)
        assert h.torsion_coordinates([0, 4]) == (0, 0)
        assert h.torsion_coordinates([2, 4]) == (0, 0)

    def test_generator_cycles_have_unit_coordinates(self):
        d_hi = ZMatrix.from_rows([[2, 0], [0, 4]])
        h = homology_of_pair(d_hi, ZMatrix.zero(0, 2))
        for i in range(2):
            z = h.torsion_generator_cycle(i)
            coords = h.torsion_coordinates(z)
            expected = tuple(1 if t == i else 0 for t in range(2))
            assert coords == expected

    def test_degree_one_reproduces_abelianization(self):
        # exponent matrix of the order-243 presentation transposed into a map
        d_hi = ZMatrix.from_rows([[3, 0, -3], [0, 0, -3]])
        h = homology_of_pair(d_hi, ZMatrix.zero(0, 2))
        assert h.invariant_factors == (3, 3)
        assert h.free_rank == 0
