"""Dense exact linear algebra over Q (fractions.Fraction throughout)."""

from __future__ import annotations

from fractions import Fraction


def frac_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def identity(k):
    return [[Fraction(1 if i == j else 0) for j in range(k)] for i in range(k)]


def transpose(m):
    return [list(col) for col in zip(*m)] if m else []


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def matvec(m, v):
    return [dot(row, v) for row in m]


def matmul(a, b):
    bt = transpose(b)
    return [[dot(row, col) for col in bt] for row in a]


def rref(m):
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    m = [row[:] for row in m]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(m):
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def solve(m, b):
    """One solution of m x = b over Q, or None if inconsistent.

    Accepts an empty-column matrix (then b must be zero).
    """
    rows = len(m)
    cols = len(m[0]) if rows and m[0] else 0
    if cols == 0:
        return [] if all(x == 0 for x in b) else None
    aug = [list(map(Fraction, m[i])) + [Fraction(b[i])] for i in range(rows)]
    red, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = red[r][cols]
    return x


def nullspace(m):
    """Basis of the right kernel of m, as a list of vectors."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if cols == 0:
        return []
    if rows == 0:
        return [[Fraction(i == j) for i in range(cols)] for j in range(cols)]
    red, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -red[r][f]
        basis.append(v)
    return basis


def left_nullspace(m):
    return nullspace(transpose(m))


def in_span(m_columns, v):
    """Is v in the Q-span of the given column vectors?"""
    cols = transpose(m_columns) if m_columns else []
    if not m_columns:
        return all(x == 0 for x in v)
    return solve(cols, v) is not None


def lcm_denominators(values):
    out = 1
    for v in values:
        d = Fraction(v).denominator
        g = _gcd(out, d)
        out = out // g * d
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def clear_denominators(v):
    """Scale a rational vector to a primitive integer vector (gcd 1).

    Returns the zero integer vector unchanged.
    """
    scale = lcm_denominators(v)
    ints = [int(Fraction(x) * scale) for x in v]
    g = 0
    for x in ints:
        g = _gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return ints
