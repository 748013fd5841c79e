"""Exact rational linear feasibility with certificates.

Two engines, both over `fractions.Fraction`:

* Fourier-Motzkin elimination with witness back-substitution, used for
  systems in few variables (mixed strict / weak / equality rows);
* a primal simplex on standard form (min c.x, Ax = b, x >= 0) with Bland's
  rule, used everywhere else.  Phase one yields either a basic feasible
  point or a Farkas vector y with y.b > 0 and y^T A <= 0.

Every public answer carries a certificate (a feasible point, a nonnegative
combination, or a separating functional) and the certificate is re-verified
exactly before it is returned; a verification failure is a bug, not an
input error.
"""

from __future__ import annotations

from fractions import Fraction

from . import qlinalg

FM_MAX_VARS = 4

GT = ">"
GE = ">="
EQ = "=="


# ---------------------------------------------------------------------------
# Fourier-Motzkin
# ---------------------------------------------------------------------------

def _normalize_row(a, strict, b):
    # scale so the leading nonzero coefficient is +-1; enables dedup
    lead = next((x for x in a if x != 0), None)
    if lead is None:
        return (tuple(a), strict, b)
    s = abs(lead)
    return (tuple(x / s for x in a), strict, b / s)


def _int_gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def fm_feasible(rows, nvars):
    """Witness for a system of rows (a, strict, b) meaning a.x > b or
    a.x >= b; returns a rational vector or None.
    """
    rows = [(tuple(Fraction(x) for x in a), bool(strict), Fraction(b))
            for a, strict, b in rows]
    levels = []
    cur = rows
    for v in reversed(range(nvars)):
        involved = [r for r in cur if r[0][v] != 0]
        levels.append((v, involved))
        pos = [r for r in involved if r[0][v] > 0]
        neg = [r for r in involved if r[0][v] < 0]
        nxt = {}
        for r in cur:
            if r[0][v] == 0:
                nxt[_normalize_row(*r)] = None
        for ap, sp, bp in pos:
            for an, sn, bn in neg:
                mp = -an[v]
                mn = ap[v]
                a = tuple(mp * x + mn * y for x, y in zip(ap, an))
                nxt[_normalize_row(a, sp or sn, mp * bp + mn * bn)] = None
        cur = list(nxt)
    for a, strict, b in cur:
        if strict and not 0 > b:
            return None
        if not strict and not 0 >= b:
            return None
    x = [Fraction(0)] * nvars
    for v, involved in reversed(levels):
        lo = hi = None
        lo_strict = hi_strict = False
        for a, strict, b in involved:
            rest = b - sum(a[j] * x[j] for j in range(v))
            bound = rest / a[v]
            if a[v] > 0:
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_strict = bound, strict
            else:
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_strict = bound, strict
        if lo is None and hi is None:
            x[v] = Fraction(0)
        elif hi is None:
            x[v] = lo + 1
        elif lo is None:
            x[v] = hi - 1
        elif lo < hi:
            x[v] = (lo + hi) / 2
        else:
            assert lo == hi and not lo_strict and not hi_strict, \
                "back-substitution hit an empty interval"
            x[v] = lo
    return x


# ---------------------------------------------------------------------------
# simplex on standard form
# ---------------------------------------------------------------------------

class SimplexResult:
    def __init__(self, status, x=None, objective=None, farkas=None):
        self.status = status          # "optimal" | "infeasible" | "unbounded"
        self.x = x
        self.objective = objective
        self.farkas = farkas


def simplex_standard(a_rows, b, c=None):
    """min c.x subject to A x = b, x >= 0 (feasibility only when c is None).

    Returns a SimplexResult whose `x` is a basic feasible solution; when
    infeasible, `farkas` satisfies farkas . b > 0 and farkas^T A <= 0.
    """
    m = len(a_rows)
    n = len(a_rows[0]) if m else 0
    a = [[Fraction(x) for x in row] for row in a_rows]
    rhs = [Fraction(x) for x in b]
    sigma = [1] * m
    for i in range(m):
        if rhs[i] < 0:
            sigma[i] = -1
            rhs[i] = -rhs[i]
            a[i] = [-x for x in a[i]]

    width = n + m
    tab = [a[i] + [Fraction(j == i) for j in range(m)] + [rhs[i]]
           for i in range(m)]
    basis = [n + i for i in range(m)]

    def pivot(row, col):
        piv = tab[row][col]
        tab[row] = [x / piv for x in tab[row]]
        for i in range(len(tab)):
            if i != row and tab[i][col] != 0:
                f = tab[i][col]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[row])]
        if obj[col] != 0:
            f = obj[col]
            for j in range(width + 1):
                obj[j] -= f * tab[row][j]
        basis[row] = col

    def run(allowed):
        while True:
            enter = next((j for j in allowed if obj[j] < 0), None)
            if enter is None:
                return "optimal"
            best = None
            leave = None
            for i in range(len(tab)):
                if tab[i][enter] > 0:
                    ratio = tab[i][width] / tab[i][enter]
                    if best is None or ratio < best or \
                            (ratio == best and basis[i] < basis[leave]):
                        best = ratio
                        leave = i
            if leave is None:
                return "unbounded"
            pivot(leave, enter)

    # phase one: min sum of artificials
    obj = [Fraction(0)] * (width + 1)
    for j in range(width + 1):
        obj[j] = (Fraction(1) if n <= j < width else Fraction(0)) \
            - sum(tab[i][j] for i in range(m))
    status = run(range(width))
    assert status == "optimal", "phase one cannot be unbounded"
    if -obj[width] > 0:
        y = [Fraction(1) - obj[n + i] for i in range(m)]
        farkas = [y[i] * sigma[i] for i in range(m)]
        assert sum(f * Fraction(bi) for f, bi in zip(farkas, b)) > 0
        for j in range(n):
            assert sum(farkas[i] * Fraction(a_rows[i][j]) for i in range(m)) <= 0
        return SimplexResult("infeasible", farkas=farkas)

    # drive artificials out of the basis; drop redundant rows
    for row in reversed(range(len(tab))):
        if basis[row] >= n:
            col = next((j for j in range(n) if tab[row][j] != 0), None)
            if col is None:
                del tab[row]
                del basis[row]
            else:
                pivot(row, col)

    if c is not None:
        cost = [Fraction(x) for x in c]
        obj = [Fraction(0)] * (width + 1)
        for j in range(width + 1):
            base = cost[j] if j < n else Fraction(0)
            obj[j] = base - sum((cost[basis[i]] if basis[i] < n else Fraction(0))
                                * tab[i][j] for i in range(len(tab)))
        status = run(range(n))
        if status == "unbounded":
            return SimplexResult("unbounded")

    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = tab[i][width]
    assert all(xi >= 0 for xi in x)
    for i in range(m):
        assert sum(Fraction(a_rows[i][j]) * x[j] for j in range(n)) == Fraction(b[i])
    objective = None
    if c is not None:
        objective = sum(Fraction(c[j]) * x[j] for j in range(n))
    return SimplexResult("optimal", x=x, objective=objective)


# ---------------------------------------------------------------------------
# mixed systems (free variables, strict rows, equality rows)
# ---------------------------------------------------------------------------

def feasible_mixed(rows, nvars):
    """Witness for rows (a, rel, b) with rel in {">", ">=", "=="} over free
    rational variables, or None.  Routes small systems through
    Fourier-Motzkin, larger ones through the simplex.
    """
    expanded = []
    for a, rel, b in rows:
        a = tuple(Fraction(x) for x in a)
        b = Fraction(b)
        if rel == EQ:
            expanded.append((a, False, b))
            expanded.append((tuple(-x for x in a), False, -b))
        elif rel == GE:
            expanded.append((a, False, b))
        elif rel == GT:
            expanded.append((a, True, b))
        else:
            raise ValueError(f"bad relation {rel!r}")
    if nvars <= FM_MAX_VARS:
        return fm_feasible(expanded, nvars)
    return _mixed_by_simplex(expanded, nvars)


def _mixed_by_simplex(rows, nvars):
    # variables: x = u - w with u, w >= 0, one slack per inequality,
    # a gap variable t shared by all strict rows, capped by t <= 1.
    strict_present = any(s for _, s, _ in rows)
    ncols = 2 * nvars + len(rows) + (2 if strict_present else 0)
    t_col = 2 * nvars + len(rows) if strict_present else None
    a_rows = []
    b_vec = []
    for idx, (a, strict, b) in enumerate(rows):
        row = [Fraction(0)] * ncols
        for v in range(nvars):
            row[v] = a[v]
            row[nvars + v] = -a[v]
        row[2 * nvars + idx] = Fraction(-1)       # a.x - slack = b (+ t)
        if strict:
            row[t_col] = Fraction(-1)
        a_rows.append(row)
        b_vec.append(b)
    if strict_present:
        cap = [Fraction(0)] * ncols
        cap[t_col] = Fraction(1)
        cap[t_col + 1] = Fraction(1)
        a_rows.append(cap)
        b_vec.append(Fraction(1))
        cost = [Fraction(0)] * ncols
        cost[t_col] = Fraction(-1)
        res = simplex_standard(a_rows, b_vec, cost)
        if res.status != "optimal" or res.x[t_col] <= 0:
            return None
        return [res.x[v] - res.x[nvars + v] for v in range(nvars)]
    res = simplex_standard(a_rows, b_vec)
    if res.status != "optimal":
        return None
    return [res.x[v] - res.x[nvars + v] for v in range(nvars)]


def strict_refutation(strict_vecs, eq_vecs):
    """Multipliers certifying that no x has s.x > 0 for all strict rows and
    e.x = 0 for all equality rows: y >= 0, sum(y) = 1, mu free with
    sum y_i s_i + sum mu_k e_k = 0.  Returns (y, mu) or None.
    """
    d = len(strict_vecs[0]) if strict_vecs else (len(eq_vecs[0]) if eq_vecs else 0)
    ns, ne = len(strict_vecs), len(eq_vecs)
    ncols = ns + 2 * ne
    a_rows = []
    for coord in range(d):
        row = [Fraction(v[coord]) for v in strict_vecs]
        row += [Fraction(e[coord]) for e in eq_vecs]
        row += [-Fraction(e[coord]) for e in eq_vecs]
        a_rows.append(row)
    a_rows.append([Fraction(1)] * ns + [Fraction(0)] * (2 * ne))
    b = [Fraction(0)] * d + [Fraction(1)]
    res = simplex_standard(a_rows, b)
    if res.status != "optimal":
        return None
    y = res.x[:ns]
    mu = [res.x[ns + k] - res.x[ns + ne + k] for k in range(ne)]
    return y, mu


# ---------------------------------------------------------------------------
# cones
# ---------------------------------------------------------------------------

class ConeResult:
    def __init__(self, inside, coefficients=None, separator=None):
        self.inside = inside
        self.coefficients = coefficients    # nonnegative rationals, one per generator
        self.separator = separator          # integer lambda: <l,target> < 0, <l,g> >= 0


def in_cone(generators, target):
    """Is target a nonnegative rational combination of the generators?

    Returns a ConeResult carrying either the combination or an integer
    separating functional (Farkas witness).
    """
    target = [Fraction(x) for x in target]
    d = len(target)
    if not generators:
        if all(x == 0 for x in target):
            return ConeResult(True, coefficients=[])
        sep = [-x for x in qlinalg.clear_denominators(target)]
        return _checked_separator(generators, target, sep)
    a_rows = [[Fraction(g[coord]) for g in generators] for coord in range(d)]
    res = simplex_standard(a_rows, target)
    if res.status == "optimal":
        combo = res.x
        recon = [sum(Fraction(g[coord]) * combo[j]
                     for j, g in enumerate(generators)) for coord in range(d)]
        assert recon == target
        return ConeResult(True, coefficients=combo)
    sep = [-x for x in res.farkas]
    return _checked_separator(generators, target, qlinalg.clear_denominators(sep))


def _checked_separator(generators, target, sep):
    assert qlinalg.dot([Fraction(s) for s in sep], target) < 0
    for g in generators:
        assert qlinalg.dot([Fraction(s) for s in sep],
                           [Fraction(x) for x in g]) >= 0
    return ConeResult(False, separator=tuple(int(s) for s in sep))
