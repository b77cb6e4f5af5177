"""Exact integer linear algebra.

Dense arbitrary-precision matrices with Hermite and Smith normal forms,
integer system solving, kernel lattice bases, and homology of pairs of
integer matrices.  A sparse column-echelon solver backs the larger
computations; everything is exact, nothing floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import CompositionNotZero, ConsistencyError, NoSolution

SparseCol = Dict[int, int]


@dataclass(frozen=True)
class ZMatrix:
    rows: int
    cols: int
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("inconsistent matrix dimensions")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "ZMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return ZMatrix(len(rows), cols, tuple(rows))

    @staticmethod
    def zero(rows: int, cols: int) -> "ZMatrix":
        return ZMatrix(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "ZMatrix":
        return ZMatrix(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def __getitem__(self, idx: Tuple[int, int]) -> int:
        i, j = idx
        return self.entries[i][j]

    def __matmul__(self, other: "ZMatrix") -> "ZMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = list(zip(*other.entries)) if other.entries else [()] * other.cols
        out = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in ot)
            for row in self.entries
        )
        if not out and self.rows == 0:
            out = ()
        return ZMatrix(self.rows, other.cols, out)

    def transpose(self) -> "ZMatrix":
        return ZMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.entries else tuple(() for _ in range(0)))

    def mul_vec(self, v: Sequence[int]) -> List[int]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum(a * b for a, b in zip(row, v)) for row in self.entries]

    def is_zero(self) -> bool:
        return all(all(x == 0 for x in row) for row in self.entries)

    def to_lists(self) -> List[List[int]]:
        return [list(r) for r in self.entries]

    def columns_sparse(self) -> List[SparseCol]:
        cols: List[SparseCol] = [dict() for _ in range(self.cols)]
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                if x:
                    cols[j][i] = x
        return cols

    @staticmethod
    def from_columns_sparse(cols: Sequence[SparseCol], rows: int) -> "ZMatrix":
        out = [[0] * len(cols) for _ in range(rows)]
        for j, col in enumerate(cols):
            for i, x in col.items():
                out[i][j] = x
        return ZMatrix.from_rows(out, cols=len(cols))


def _axpy_sparse(dst: SparseCol, src: SparseCol, q: int) -> None:
    """dst += q * src in place, dropping zeros."""
    for i, x in src.items():
        v = dst.get(i, 0) + q * x
        if v:
            dst[i] = v
        else:
            dst.pop(i, None)


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class ColumnEchelonSolver:
    """Column echelon form of an integer matrix by unimodular column operations.

    Gives the rank, a lattice basis of the kernel, and repeated exact solves
    of A x = b.  With ``transform=True`` the accumulated column transform is
    kept so particular solutions and the kernel basis are available.
    """

    def __init__(self, columns: Sequence[SparseCol], nrows: int, transform: bool = True):
        self.nrows = nrows
        self.ncols = len(columns)
        cols: List[SparseCol] = [dict(c) for c in columns]
        trans: Optional[List[SparseCol]] = (
            [{j: 1} for j in range(self.ncols)] if transform else None
        )
        active = list(range(self.ncols))
        pivots: List[Tuple[int, int]] = []  # (row, column index) in elimination order
        for row in range(nrows):
            while True:
                live = [c for c in active if row in cols[c]]
                if len(live) <= 1:
                    break
                c0 = min(live, key=lambda c: (abs(cols[c][row]), c))
                if cols[c0][row] < 0:
                    cols[c0] = {i: -x for i, x in cols[c0].items()}
                    if trans is not None:
                        trans[c0] = {i: -x for i, x in trans[c0].items()}
                p = cols[c0][row]
                for c in live:
                    if c == c0:
                        continue
                    q = cols[c][row] // p
                    if q:
                        _axpy_sparse(cols[c], cols[c0], -q)
                        if trans is not None:
                            _axpy_sparse(trans[c], trans[c0], -q)
            live = [c for c in active if row in cols[c]]
            if live:
                c0 = live[0]
                if cols[c0][row] < 0:
                    cols[c0] = {i: -x for i, x in cols[c0].items()}
                    if trans is not None:
                        trans[c0] = {i: -x for i, x in trans[c0].items()}
                pivots.append((row, c0))
                active.remove(c0)
        for c in active:
            if cols[c]:
                raise ConsistencyError("non-pivot column left nonzero after echelon pass")
        self._cols = cols
        self._trans = trans
        self.pivots = pivots
        self.rank = len(pivots)
        self._free = list(active)

    def kernel_columns(self) -> List[SparseCol]:
        """Lattice basis of the kernel, one sparse column per free column."""
        if self._trans is None:
            raise ValueError("solver built without transform")
        return [dict(self._trans[c]) for c in self._free]

    def solve_coefficients(self, b) -> List[int]:
        """Coefficients over the echelon pivot columns solving A x = b.

        ``b`` may be a dense sequence or a sparse dict.  Raises NoSolution
        when no integer solution exists.
        """
        if isinstance(b, dict):
            r: SparseCol = {i: x for i, x in b.items() if x}
        else:
            r = {i: x for i, x in enumerate(b) if x}
        y: List[int] = []
        for row, c in self.pivots:
            v = r.get(row, 0)
            if v == 0:
                y.append(0)
                continue
            p = self._cols[c][row]
            if v % p:
                raise NoSolution(f"divisibility failure at pivot row {row}")
            t = v // p
            y.append(t)
            _axpy_sparse(r, self._cols[c], -t)
        if r:
            raise NoSolution("residual nonzero outside pivot rows")
        return y

    def solve(self, b) -> SparseCol:
        """A particular integer solution of A x = b as a sparse vector."""
        if self._trans is None:
            raise ValueError("solver built without transform")
        y = self.solve_coefficients(b)
        x: SparseCol = {}
        for t, (_, c) in zip(y, self.pivots):
            if t:
                _axpy_sparse(x, self._trans[c], t)
        return x

    def transform_column(self, pivot_index: int) -> SparseCol:
        """Transform column belonging to the ``pivot_index``-th pivot."""
        if self._trans is None:
            raise ValueError("solver built without transform")
        return self._trans[self.pivots[pivot_index][1]]

    def echelon_column(self, pivot_index: int) -> SparseCol:
        """The ``pivot_index``-th echelonized pivot column itself.

        These columns span the same lattice as the input and are the basis
        in which ``solve_coefficients`` expresses its answers.
        """
        return dict(self._cols[self.pivots[pivot_index][1]])


def hermite_normal_form(A: ZMatrix) -> Tuple[ZMatrix, ZMatrix]:
    """Row-style Hermite normal form: returns (H, U) with U*A = H.

    Pivots are positive; entries above each pivot are reduced into [0, pivot).
    """
    n, m = A.rows, A.cols
    H = [list(r) for r in A.entries]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_axpy(i, k, q):
        H[i] = [a + q * b for a, b in zip(H[i], H[k])]
        U[i] = [a + q * b for a, b in zip(U[i], U[k])]

    pr = 0
    for c in range(m):
        while True:
            nz = [i for i in range(pr, n) if H[i][c]]
            if len(nz) <= 1:
                break
            i0 = min(nz, key=lambda i: (abs(H[i][c]), i))
            if H[i0][c] < 0:
                H[i0] = [-x for x in H[i0]]
                U[i0] = [-x for x in U[i0]]
            for i in nz:
                if i != i0:
                    q = H[i][c] // H[i0][c]
                    if q:
                        row_axpy(i, i0, -q)
        nz = [i for i in range(pr, n) if H[i][c]]
        if not nz:
            continue
        i0 = nz[0]
        H[pr], H[i0] = H[i0], H[pr]
        U[pr], U[i0] = U[i0], U[pr]
        if H[pr][c] < 0:
            H[pr] = [-x for x in H[pr]]
            U[pr] = [-x for x in U[pr]]
        for i in range(pr):
            q = H[i][c] // H[pr][c]
            if q:
                row_axpy(i, pr, -q)
        pr += 1
    return ZMatrix.from_rows(H, cols=m), ZMatrix.from_rows(U, cols=n)


@dataclass(frozen=True)
class SmithDecomposition:
    """U*A*V = S with unimodular U, V and S diagonal with d1 | d2 | ..."""

    S: ZMatrix
    U: Optional[ZMatrix]
    V: Optional[ZMatrix]
    rank: int
    invariant_factors: Tuple[int, ...]

    def diagonal(self) -> List[int]:
        k = min(self.S.rows, self.S.cols)
        return [self.S[i, i] for i in range(k)]


def smith_normal_form(A: ZMatrix, transforms: bool = True) -> SmithDecomposition:
    """Smith normal form with optional unimodular transforms.

    Pivot strategy: least-absolute-value entry of the trailing submatrix,
    Euclidean clearing of its row and column, then a divisibility fix-up
    folding any violating entry into the pivot row.
    """
    n, m = A.rows, A.cols
    M = [list(r) for r in A.entries]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if transforms else None
    V = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if transforms else None

    def swap_rows(i, k):
        M[i], M[k] = M[k], M[i]
        if U is not None:
            U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in M:
            row[j], row[k] = row[k], row[j]
        if V is not None:
            for row in V:
                row[j], row[k] = row[k], row[j]

    def negate_row(i):
        M[i] = [-x for x in M[i]]
        if U is not None:
            U[i] = [-x for x in U[i]]

    def row_axpy(i, k, q):
        M[i] = [a + q * b for a, b in zip(M[i], M[k])]
        if U is not None:
            U[i] = [a + q * b for a, b in zip(U[i], U[k])]

    def col_axpy(j, k, q):
        for row in M:
            row[j] += q * row[k]
        if V is not None:
            for row in V:
                row[j] += q * row[k]

    t = 0
    while t < min(n, m):
        # locate a least-absolute-value pivot in the trailing submatrix
        best = None
        for i in range(t, n):
            for j in range(t, m):
                x = M[i][j]
                if x and (best is None or abs(x) < abs(M[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        if M[t][t] < 0:
            negate_row(t)
        while True:
            i = next((i for i in range(t + 1, n) if M[i][t]), None)
            if i is not None:
                q = M[i][t] // M[t][t]
                row_axpy(i, t, -q)
                if M[i][t]:
                    swap_rows(t, i)
                continue
            j = next((j for j in range(t + 1, m) if M[t][j]), None)
            if j is not None:
                q = M[t][j] // M[t][t]
                col_axpy(j, t, -q)
                if M[t][j]:
                    swap_cols(t, j)
                continue
            # row and column clear; check the divisibility condition
            p = M[t][t]
            bad = None
            for i in range(t + 1, n):
                row = M[i]
                for j in range(t + 1, m):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_axpy(t, bad, 1)
        t += 1
    diag = [M[i][i] for i in range(min(n, m))]
    rank = sum(1 for d in diag if d)
    factors = tuple(d for d in diag if d > 1)
    return SmithDecomposition(
        S=ZMatrix.from_rows(M, cols=m),
        U=ZMatrix.from_rows(U, cols=n) if transforms else None,
        V=ZMatrix.from_rows(V, cols=m) if transforms else None,
        rank=rank,
        invariant_factors=factors,
    )


def solve_integer_system(A: ZMatrix, b: Sequence[int]) -> List[int]:
    """Solve A x = b over the integers via Smith data; raises NoSolution."""
    if len(b) != A.rows:
        raise ValueError("dimension mismatch")
    snf = smith_normal_form(A)
    c = snf.U.mul_vec(list(b))
    y = [0] * A.cols
    for i in range(A.rows):
        d = snf.S[i, i] if i < min(A.rows, A.cols) else 0
        if d:
            if c[i] % d:
                raise NoSolution("divisibility condition fails")
            y[i] = c[i] // d
        elif c[i]:
            raise NoSolution("right-hand side outside the column span")
    return snf.V.mul_vec(y)


def kernel_basis(A: ZMatrix) -> ZMatrix:
    """Columns form a lattice basis of the integer kernel of A."""
    solver = ColumnEchelonSolver(A.columns_sparse(), A.rows, transform=True)
    return ZMatrix.from_columns_sparse(solver.kernel_columns(), A.cols)


def lattice_column_basis(columns: Sequence[SparseCol], nrows: int) -> List[SparseCol]:
    """Echelon basis of the lattice spanned by sparse integer columns.

    Columns are inserted one at a time and reduced against the pivots found
    so far (xgcd combination when the pivot does not divide).  Suited to
    many sparse columns of moderate ambient dimension.
    """
    pivot_of_row: Dict[int, SparseCol] = {}
    for col in columns:
        col = dict(col)
        while col:
            row = min(col)
            v = col[row]
            piv = pivot_of_row.get(row)
            if piv is None:
                if v < 0:
                    col = {i: -x for i, x in col.items()}
                pivot_of_row[row] = col
                break
            p = piv[row]
            if v % p == 0:
                _axpy_sparse(col, piv, -(v // p))
            else:
                g, s, t = _xgcd(p, v)
                newpiv: SparseCol = {}
                _axpy_sparse(newpiv, piv, s)
                _axpy_sparse(newpiv, col, t)
                newcol: SparseCol = {}
                _axpy_sparse(newcol, col, p // g)
                _axpy_sparse(newcol, piv, -(v // g))
                pivot_of_row[row] = newpiv
                col = newcol
    return [pivot_of_row[r] for r in sorted(pivot_of_row)]


def _invert_unimodular(U: ZMatrix) -> ZMatrix:
    """Exact inverse of a unimodular integer matrix (fraction-free checks)."""
    from fractions import Fraction

    n = U.rows
    if n != U.cols:
        raise ValueError("not square")
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(U.entries)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            raise ValueError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    inv = []
    for i in range(n):
        row = []
        for j in range(n):
            x = M[i][n + j]
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
            row.append(int(x))
        inv.append(row)
    return ZMatrix.from_rows(inv, cols=n)


class FpAbelianGroup:
    """A finitely generated abelian group presented as ker/im in coordinates.

    ``invariant_factors`` are > 1 and in divisibility order; ``free_rank``
    counts the infinite cyclic summands.  When built with coordinates, maps
    ambient cycle vectors to canonical homology coordinates and hands out a
    cycle representative for each torsion generator.
    """

    def __init__(self, free_rank: int, invariant_factors: Tuple[int, ...],
                 ambient_dim: int, kernel_cols=None, kernel_solver=None,
                 diag=None, Umat=None, Uinv=None):
        self.free_rank = free_rank
        self.invariant_factors = tuple(invariant_factors)
        self.ambient_dim = ambient_dim
        self._kernel_cols = kernel_cols
        self._kernel_solver = kernel_solver
        self._diag = diag
        self._U = Umat
        self._Uinv = Uinv
        if diag is not None:
            self._torsion_pos = [i for i, d in enumerate(diag) if d > 1]
            self._free_pos = [i for i, d in enumerate(diag) if d == 0]
        else:
            self._torsion_pos = None
            self._free_pos = None

    @property
    def has_coordinates(self) -> bool:
        return self._diag is not None

    def coordinates(self, cycle: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Canonical coordinates of a cycle: (torsion residues, free parts).

        Torsion residue i lies in [0, d_i); raises NoSolution if the vector
        is not a cycle.
        """
        if not self.has_coordinates:
            raise ValueError("group was computed without coordinate data")
        c = self._kernel_solver.solve_coefficients(list(cycle))
        u = self._U.mul_vec(c)
        torsion = tuple(u[i] % self._diag[i] for i in self._torsion_pos)
        free = tuple(u[i] for i in self._free_pos)
        return torsion, free

    def torsion_coordinates(self, cycle: Sequence[int]) -> Tuple[int, ...]:
        return self.coordinates(cycle)[0]

    def torsion_generator_cycle(self, index: int) -> List[int]:
        """An ambient cycle representing the ``index``-th torsion generator."""
        if not self.has_coordinates:
            raise ValueError("group was computed without coordinate data")
        pos = self._torsion_pos[index]
        w = [self._Uinv[i, pos] for i in range(self._Uinv.rows)]
        out = [0] * self.ambient_dim
        for coeff, col in zip(w, self._kernel_cols):
            if coeff:
                for i, x in col.items():
                    out[i] += coeff * x
        return out

    def __repr__(self):
        return f"FpAbelianGroup(free_rank={self.free_rank}, invariant_factors={list(self.invariant_factors)})"


def homology_from_sparse(hi_cols: Sequence[SparseCol], lo_cols: Sequence[SparseCol],
                         mid_dim: int, low_dim: int,
                         coordinates: bool = True) -> FpAbelianGroup:
    """Homology ker(lo)/im(hi) for sparse column data.

    ``lo_cols`` are the images of the mid-degree basis vectors in the low
    degree; ``hi_cols`` live in the mid degree.  Checks lo o hi = 0.
    """
    if len(lo_cols) != mid_dim:
        raise ValueError("lo_cols must have one column per mid-degree basis vector")
    for col in hi_cols:
        image: SparseCol = {}
        for i, x in col.items():
            _axpy_sparse(image, lo_cols[i], x)
        if image:
            raise CompositionNotZero("boundary maps do not compose to zero")
    lo_solver = ColumnEchelonSolver(lo_cols, low_dim, transform=True)
    K = lo_solver.kernel_columns()
    k = len(K)
    if k == 0:
        return FpAbelianGroup(0, (), mid_dim) if not coordinates else FpAbelianGroup(
            0, (), mid_dim, kernel_cols=[], kernel_solver=None, diag=[],
            Umat=ZMatrix.identity(0), Uinv=ZMatrix.identity(0))
    k_solver = ColumnEchelonSolver(K, mid_dim, transform=False)
    # solve_coefficients works in the echelonized pivot basis; reconstruct
    # generator cycles in that same basis so the coordinate maps agree
    K = [k_solver.echelon_column(i) for i in range(k_solver.rank)]
    basis = lattice_column_basis(hi_cols, mid_dim)
    rel_cols = []
    for col in basis:
        rel_cols.append(k_solver.solve_coefficients(col))
    R = ZMatrix.from_rows([list(r) for r in zip(*rel_cols)] if rel_cols else [[] for _ in range(k)],
                          cols=len(rel_cols))
    snf = smith_normal_form(R, transforms=coordinates)
    diag = snf.diagonal() + [0] * (k - min(R.rows, R.cols))
    factors = tuple(d for d in diag if d > 1)
    free_rank = k - snf.rank
    if not coordinates:
        return FpAbelianGroup(free_rank, factors, mid_dim)
    return FpAbelianGroup(
        free_rank, factors, mid_dim,
        kernel_cols=K, kernel_solver=k_solver, diag=diag,
        Umat=snf.U, Uinv=_invert_unimodular(snf.U))


def homology_of_pair(d_hi: ZMatrix, d_lo: ZMatrix, coordinates: bool = True) -> FpAbelianGroup:
    """Homology of Z^m --d_hi--> Z^mid --d_lo--> Z^low at the middle term."""
    if d_lo.cols != d_hi.rows:
        raise ValueError("dimension mismatch between the two boundary maps")
    return homology_from_sparse(
        d_hi.columns_sparse(), d_lo.columns_sparse(), d_lo.cols, d_lo.rows,
        coordinates=coordinates)
