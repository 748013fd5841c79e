"""Integer matrix linear algebra.

Everything here is exact: arbitrary-precision integers, Smith normal form
with unimodular transforms, fraction-free determinants, saturated kernel
bases, and membership tests for column spans over Q and over Z.

Minor enumeration (`is_unimodular`, the gcd oracle for `minors_coprime`) is
a direct sweep over all d-subsets of columns; at desk scale (n up to ~16)
this is cheap and keeps the code obviously correct.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from . import qlinalg
from .errors import BadShape, MinorsNotCoprime, RankDeficient, TauPresent, ZeroColumn
from .scalars import ParamScalar


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise BadShape("ragged matrix")
        object.__setattr__(self, "entries", rows)

    @property
    def d(self):
        return len(self.entries)

    @property
    def n(self):
        return len(self.entries[0]) if self.entries else 0

    def row(self, i):
        return self.entries[i]

    def column(self, j):
        return tuple(row[j] for row in self.entries)

    def columns(self):
        return [self.column(j) for j in range(self.n)]

    def column_submatrix(self, indices):
        return IntMatrix(tuple(tuple(row[j] for j in indices)
                               for row in self.entries))

    def transpose(self):
        return IntMatrix(tuple(zip(*self.entries))) if self.entries else IntMatrix(())

    def to_lists(self):
        return [list(row) for row in self.entries]

    def __mul__(self, other):
        if isinstance(other, IntMatrix):
            ot = list(zip(*other.entries))
            return IntMatrix(tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in ot)
                for row in self.entries))
        return NotImplemented

    def matvec(self, v):
        return tuple(sum(a * int(x) for a, x in zip(row, v))
                     for row in self.entries)

    def rank(self):
        return qlinalg.rank(qlinalg.frac_matrix(self.entries))

    def __str__(self):
        return "\n".join(" ".join(f"{x:>4}" for x in row) for row in self.entries)


def det(matrix) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    a = [list(row) for row in (matrix.entries if isinstance(matrix, IntMatrix) else matrix)]
    k = len(a)
    if k == 0:
        return 1
    if any(len(row) != k for row in a):
        raise BadShape("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for t in range(k - 1):
        if a[t][t] == 0:
            swap = next((i for i in range(t + 1, k) if a[i][t] != 0), None)
            if swap is None:
                return 0
            a[t], a[swap] = a[swap], a[t]
            sign = -sign
        for i in range(t + 1, k):
            for j in range(t + 1, k):
                a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) // prev
            a[i][t] = 0
        prev = a[t][t]
    return sign * a[k - 1][k - 1]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def smith_normal_form(matrix):
    """U, D, V with U * M * V = D diagonal, d1 | d2 | ..., det U, V = +-1."""
    m = matrix if isinstance(matrix, IntMatrix) else IntMatrix(tuple(map(tuple, matrix)))
    a = [list(row) for row in m.entries]
    rows, cols = m.d, m.n
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(rows):
            a[r][i] -= q * a[r][j]
        for r in range(cols):
            v[r][i] -= q * v[r][j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(rows):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(cols):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    t = 0
    while t < min(rows, cols):
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    row_op(i, t, q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    col_op(j, t, q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                # pivot must divide the rest of the block
                stop = False
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if a[i][j] % a[t][t] != 0:
                            row_op(t, i, -1)
                            dirty = True
                            stop = True
                            break
                    if stop:
                        break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    return (IntMatrix(tuple(map(tuple, u))),
            IntMatrix(tuple(map(tuple, a))),
            IntMatrix(tuple(map(tuple, v))))


def snf_diagonal(matrix):
    _, d, _ = smith_normal_form(matrix)
    return [d.entries[i][i] for i in range(min(d.d, d.n))]


def kernel_basis(matrix) -> IntMatrix:
    """n x (n - rank) integer matrix B with A * B = 0, columns a saturated
    basis of ker(A : Z^n -> Z^d).

    Raises RankDeficient when the matrix has fewer than d independent rows.
    """
    m = matrix if isinstance(matrix, IntMatrix) else IntMatrix(tuple(map(tuple, matrix)))
    _, diag, v = smith_normal_form(m)
    r = sum(1 for i in range(min(diag.d, diag.n)) if diag.entries[i][i] != 0)
    if r < m.d:
        raise RankDeficient(f"rank {r} < row count {m.d}")
    cols = [v.column(j) for j in range(r, m.n)]
    return IntMatrix(tuple(zip(*cols))) if cols else IntMatrix(tuple(() for _ in range(m.n)))


# ---------------------------------------------------------------------------
# minors
# ---------------------------------------------------------------------------

def iter_maximal_minors(matrix):
    m = matrix if isinstance(matrix, IntMatrix) else IntMatrix(tuple(map(tuple, matrix)))
    for subset in combinations(range(m.n), m.d):
        yield subset, det(m.column_submatrix(subset))


def is_unimodular(matrix) -> bool:
    """Every maximal minor lies in {-1, 0, 1}."""
    return all(value in (-1, 0, 1) for _, value in iter_maximal_minors(matrix))


def minors_coprime(matrix) -> bool:
    """gcd over all maximal minors is 1 (SNF diagonal all ones)."""
    diag = snf_diagonal(matrix)
    m = matrix if isinstance(matrix, IntMatrix) else IntMatrix(tuple(map(tuple, matrix)))
    return len(diag) == m.d and all(x == 1 for x in diag)


def minors_gcd(matrix) -> int:
    g = 0
    for _, value in iter_maximal_minors(matrix):
        g = gcd(g, value)
        if g == 1:
            return 1
    return g


# ---------------------------------------------------------------------------
# integer and rational span membership
# ---------------------------------------------------------------------------

def solve_integer(matrix, b):
    """One integer solution of M z = b, or None.

    M is an integer matrix, b an integer vector.
    """
    m = matrix if isinstance(matrix, IntMatrix) else IntMatrix(tuple(map(tuple, matrix)))
    u, diag, v = smith_normal_form(m)
    ub = u.matvec(tuple(int(x) for x in b))
    w = [0] * m.n
    r = min(m.d, m.n)
    for i in range(m.d):
        di = diag.entries[i][i] if i < r else 0
        if di == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % di != 0:
                return None
            w[i] = ub[i] // di
    return list(v.matvec(w))


def lattice_point_in_coset(span_columns, target):
    """Integer vector z with target - z in the Q-span of the given columns.

    `span_columns` is a list of integer vectors in Z^d, `target` a rational
    vector.  Returns z (a list of ints) or None when the coset target + span
    misses the integer lattice.
    """
    d = len(target)
    if span_columns:
        cols = [[Fraction(x) for x in col] for col in span_columns]
        left = qlinalg.left_nullspace(qlinalg.transpose(cols))
    else:
        left = [[Fraction(i == j) for j in range(d)] for i in range(d)]
    if not left:
        return [0] * d
    u_rows = [qlinalg.clear_denominators(row) for row in left]
    ut = [sum(Fraction(r[j]) * Fraction(target[j]) for j in range(d))
          for r in u_rows]
    if any(x.denominator != 1 for x in ut):
        return None
    return solve_integer(IntMatrix(tuple(tuple(r) for r in u_rows)),
                         [int(x) for x in ut])


@dataclass(frozen=True)
class SpanMembership:
    in_q_span: bool
    q_coefficients: tuple | None
    in_z_span: bool | None
    z_coefficients: tuple | None


def in_lattice_image(matrix, v, subset, want_lattice=True) -> SpanMembership:
    """Membership of v in the Q-span and Z-span of columns {a_i : i in S}.

    v is a vector of ParamScalar (or rationals).  The Z-span test requires a
    tau-free v and raises TauPresent otherwise; pass want_lattice=False to
    skip it.
    """
    m = matrix if isinstance(matrix, IntMatrix) else IntMatrix(tuple(map(tuple, matrix)))
    v = [ParamScalar.of(x) for x in v]
    cols = [list(m.column(j)) for j in subset]
    mat = qlinalg.transpose(qlinalg.frac_matrix(cols)) if cols else []
    rat_sol = (qlinalg.solve(mat, [x.rat for x in v]) if cols
               else ([] if all(x.rat == 0 for x in v) else None))
    tau_sol = (qlinalg.solve(mat, [x.tau for x in v]) if cols
               else ([] if all(x.tau == 0 for x in v) else None))
    in_q = rat_sol is not None and tau_sol is not None
    q_coeffs = None
    if in_q:
        q_coeffs = tuple(ParamScalar(r, t) for r, t in zip(rat_sol, tau_sol))

    in_z = None
    z_coeffs = None
    if want_lattice:
        if any(x.tau != 0 for x in v):
            raise TauPresent("Z-span query on a vector with a tau-part")
        if any(x.rat.denominator != 1 for x in v):
            in_z = False
        else:
            sub = m.column_submatrix(subset) if subset else IntMatrix(
                tuple(() for _ in range(m.d)))
            sol = solve_integer(sub, [int(x.rat) for x in v])
            in_z = sol is not None
            z_coeffs = tuple(sol) if sol is not None else None
    return SpanMembership(in_q, q_coeffs, in_z, z_coeffs)


# ---------------------------------------------------------------------------
# primitive vectors and action-matrix validation
# ---------------------------------------------------------------------------

def primitive(vector):
    """Divide by the gcd and make the first nonzero entry positive."""
    ints = [int(x) for x in vector]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x != 0), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def validate_action_matrix(matrix) -> IntMatrix:
    """Accept a torus-action weight matrix: 1 <= d < n, no zero column,
    full row rank, maximal minors with gcd 1.
    """
    m = matrix if isinstance(matrix, IntMatrix) else IntMatrix(tuple(map(tuple, matrix)))
    if not (1 <= m.d < m.n):
        raise BadShape(f"need 1 <= d < n, got d={m.d}, n={m.n}")
    for j in range(m.n):
        if all(x == 0 for x in m.column(j)):
            raise ZeroColumn(f"column {j + 1} is zero")
    if m.rank() < m.d:
        raise RankDeficient("weight matrix is not of full row rank")
    if not minors_coprime(m):
        raise MinorsNotCoprime("maximal minors have a common factor")
    return m
