"""Comparability combinatorics for quantization parameters.

A covector with signs s is *attached* to a parameter vector chi when some
alpha with sum alpha_i a_i = chi has integer alpha_i >= 0 where s_i = +,
integer alpha_i < 0 where s_i = -, and non-integer alpha_i where s_i = 0.
The set of attached covectors governs the arrow pre-order between
parameters: chi -> chi' holds exactly when chi - chi' is integral and every
covector attached to chi' is attached to chi.

The attachment decision splits into independent pieces:

(a) the tau-part of chi must lie in the rational span of the zero-support
    columns (integer coordinates carry no tau);
(b) some integer vector v0 must satisfy chi - v0 in that span;
(c) the affine solution space over the zero support must avoid the integers
    coordinatewise, which fails only when a coordinate is constant with an
    integer value (generic points dodge the countably many bad hyperplanes
    on every non-constant coordinate; a tau-direction realizes this
    exactly);
(d) the signed integer part must exist.  After substituting away the sign
    conditions this is integer feasibility of a standard-form system whose
    matrix arises from A by column negation and duplication, so for
    unimodular A the feasible polyhedron has integral vertices and exact
    rational feasibility decides it.  Non-unimodular matrices instead get a
    bounded search and an honest inconclusive verdict.

For unimodular A the choice of v0 in (b) is immaterial: admissible base
points differ by integer combinations of the zero-support columns, which
shift the solution coordinates in (c) by integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from . import exactlp, qlinalg
from .covectors import Covector, as_covector, enumerate_covectors
from .errors import (BadShape, InternalInconsistency, NotInChamber,
                     NotUnimodular, PartialQSet, ValidationFailed)
from .gitfan import Chamber, chamber_of
from .lattice import (IntMatrix, is_unimodular, lattice_point_in_coset,
                      validate_action_matrix)
from .scalars import ParamScalar

ATTACHED = "attached"
NOT_ATTACHED = "not_attached"
INCONCLUSIVE = "inconclusive"

DEFAULT_RADIUS = 8

_unimodular = lru_cache(maxsize=None)(is_unimodular)


def as_character(values, d=None):
    chi = tuple(ParamScalar.of(v) for v in values)
    if d is not None and len(chi) != d:
        raise BadShape(f"parameter vector needs length {d}, got {len(chi)}")
    return chi


def character_sub(chi, other):
    return tuple(a - ParamScalar.of(b) for a, b in zip(chi, other))


def character_add(chi, other):
    return tuple(a + ParamScalar.of(b) for a, b in zip(chi, other))


def pr_vector(chi):
    return tuple(c.rat for c in chi)


def is_integral(chi) -> bool:
    return all(ParamScalar.of(c).is_integer for c in chi)


@dataclass(frozen=True)
class Attachment:
    status: str
    witness: tuple | None = None
    reason: str | None = None
    radius: int | None = None

    @property
    def attached(self):
        return self.status == ATTACHED


def validate_attachment_witness(matrix, signs, chi, alpha) -> bool:
    """Exact re-check of all three clauses plus the defining equation."""
    m = matrix if isinstance(matrix, IntMatrix) else IntMatrix(tuple(map(tuple, matrix)))
    alpha = tuple(ParamScalar.of(a) for a in alpha)
    chi = as_character(chi, m.d)
    for r in range(m.d):
        total = ParamScalar()
        for i in range(m.n):
            total = total + alpha[i] * m.entries[r][i]
        if total != chi[r]:
            return False
    for s, a in zip(signs, alpha):
        if s > 0 and not (a.is_integer and a.rat >= 0):
            return False
        if s < 0 and not (a.is_integer and a.rat < 0):
            return False
        if s == 0 and a.is_integer:
            return False
    return True


def _zero_support_data(m, signs):
    zset = [i for i, s in enumerate(signs) if s == 0]
    cols = [list(m.column(i)) for i in zset]
    mat = qlinalg.transpose(qlinalg.frac_matrix(cols)) if cols else \
        [[] for _ in range(m.d)]
    kernel = qlinalg.nullspace(mat) if cols else []
    const_idx = [t for t in range(len(zset))
                 if all(k[t] == 0 for k in kernel)]
    return zset, cols, mat, kernel, const_idx


def _solve_zero_part(mat, target):
    if mat and mat[0]:
        return qlinalg.solve(mat, target)
    return [] if all(Fraction(x) == 0 for x in target) else None


def _lift_blocked(rat_sol, tau_sol, const_idx):
    """Index of a zero-support coordinate pinned to an integer, or None."""
    for t in const_idx:
        if ParamScalar(rat_sol[t], tau_sol[t]).is_integer:
            return t
    return None


def _generic_zero_part(rat_sol, tau_sol, kernel):
    """Perturb the zero-support solution along the kernel so every
    non-constant coordinate acquires a nonzero tau-part."""
    width = len(rat_sol)
    nonconst = [t for t in range(width) if any(k[t] != 0 for k in kernel)]
    f = len(kernel)
    coef = [Fraction(0)] * f
    for c in range(1, width * f + 2):
        coef = [Fraction(c) ** (j + 1) for j in range(f)]
        if all(tau_sol[t] + sum(coef[j] * kernel[j][t] for j in range(f)) != 0
               for t in nonconst):
            break
    else:
        raise AssertionError("generic kernel direction sweep failed")
    return [ParamScalar(rat_sol[t],
                        tau_sol[t] + sum(coef[j] * kernel[j][t]
                                         for j in range(f)))
            for t in range(width)]


def _integer_signed_part(m, pos, neg, zset, v0):
    """Integers g_i >= 0 (i in pos), g_i <= -1 (i in neg), g_i free
    (i in zset) with sum g_i a_i = v0; None when none exist.

    Complete for unimodular A: the standard-form matrix below has all of
    its nonsingular maximal minors equal to +-1, so the feasible polyhedron
    has integral vertices and the simplex's basic solution is integral.
    """
    cols = []
    for i in pos:
        cols.append([Fraction(x) for x in m.column(i)])
    for i in neg:
        cols.append([Fraction(-x) for x in m.column(i)])
    for i in zset:
        cols.append([Fraction(x) for x in m.column(i)])
    for i in zset:
        cols.append([Fraction(-x) for x in m.column(i)])
    b = list(v0)
    for i in neg:
        for r in range(m.d):
            b[r] += m.column(i)[r]
    a_rows = [[cols[j][r] for j in range(len(cols))] for r in range(m.d)]
    res = exactlp.simplex_standard(a_rows, b)
    if res.status != "optimal":
        return None
    assert all(x.denominator == 1 for x in res.x), \
        "unimodular standard form must have an integral vertex"
    x = [int(v) for v in res.x]
    np, nn, nz = len(pos), len(neg), len(zset)
    gamma = {}
    for idx, i in enumerate(pos):
        gamma[i] = x[idx]
    for idx, i in enumerate(neg):
        gamma[i] = -x[np + idx] - 1
    gamma_z = [x[np + nn + t] - x[np + nn + nz + t] for t in range(nz)]
    return gamma, gamma_z


def decide_attached(matrix, covector, chi, radius=DEFAULT_RADIUS) -> Attachment:
    m = validate_action_matrix(matrix)
    cov = as_covector(m, covector)
    chi = as_character(chi, m.d)
    signs = cov.signs
    pos = [i for i, s in enumerate(signs) if s > 0]
    neg = [i for i, s in enumerate(signs) if s < 0]
    zset, zcols, mat, kernel, const_idx = _zero_support_data(m, signs)

    tau_sol = _solve_zero_part(mat, [c.tau for c in chi])
    if tau_sol is None:
        return Attachment(NOT_ATTACHED,
                          reason="tau-part outside the zero-support span")
    v0 = lattice_point_in_coset(zcols, [c.rat for c in chi])
    if v0 is None:
        return Attachment(NOT_ATTACHED,
                          reason="no integral base point in the coset")

    if _unimodular(m):
        rat_sol = _solve_zero_part(mat, [c.rat - v for c, v in zip(chi, v0)])
        assert rat_sol is not None
        blocked = _lift_blocked(rat_sol, tau_sol, const_idx)
        if blocked is not None:
            return Attachment(
                NOT_ATTACHED,
                reason=f"zero-support coordinate {zset[blocked] + 1} "
                       "is pinned to an integer")
        part = _integer_signed_part(m, pos, neg, zset, v0)
        if part is None:
            return Attachment(NOT_ATTACHED,
                              reason="no admissible signed integer part")
        gamma, gamma_z = part
        shifted = [rat_sol[t] + gamma_z[t] for t in range(len(zset))]
        alpha_z = _generic_zero_part(shifted, tau_sol, kernel)
        return Attachment(ATTACHED,
                          witness=_assemble(m, signs, chi, gamma, zset, alpha_z))

    # non-unimodular: rational relaxation as a sound negative screen,
    # then a bounded exhaustive search over the signed integer part
    relax_cols = [[Fraction(x) for x in m.column(i)] for i in pos]
    relax_cols += [[Fraction(-x) for x in m.column(i)] for i in neg]
    relax_cols += [[Fraction(x) for x in m.column(i)] for i in zset]
    relax_cols += [[Fraction(-x) for x in m.column(i)] for i in zset]
    b = [c.rat for c in chi]
    for i in neg:
        for r in range(m.d):
            b[r] += m.column(i)[r]
    a_rows = [[col[r] for col in relax_cols] for r in range(m.d)]
    if relax_cols:
        if exactlp.simplex_standard(a_rows, b).status != "optimal":
            return Attachment(NOT_ATTACHED,
                              reason="rational relaxation infeasible")
    elif any(x != 0 for x in b):
        return Attachment(NOT_ATTACHED,
                          reason="rational relaxation infeasible")

    ranges = [range(0, radius + 1) for _ in pos] + \
             [range(-radius, 0) for _ in neg]
    for combo in product(*ranges):
        gamma = dict(zip(pos + neg, combo))
        target = [chi[r].rat
                  - sum(gamma[i] * m.entries[r][i] for i in gamma)
                  for r in range(m.d)]
        rat_sol = _solve_zero_part(mat, target)
        if rat_sol is None:
            continue
        if _lift_blocked(rat_sol, tau_sol, const_idx) is not None:
            continue
        alpha_z = _generic_zero_part(rat_sol, tau_sol, kernel)
        return Attachment(ATTACHED,
                          witness=_assemble(m, signs, chi, gamma, zset, alpha_z))
    return Attachment(INCONCLUSIVE, radius=radius,
                      reason="relaxation feasible, no integer part within radius")


def _assemble(m, signs, chi, gamma, zset, alpha_z):
    alpha = [None] * m.n
    for i, g in gamma.items():
        alpha[i] = ParamScalar(Fraction(g))
    for t, i in enumerate(zset):
        alpha[i] = alpha_z[t]
    alpha = tuple(alpha)
    if not validate_attachment_witness(m, signs, chi, alpha):
        raise AssertionError("constructed witness failed validation")
    return alpha


# ---------------------------------------------------------------------------
# Q-sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QSet:
    covectors: frozenset        # attached sign vectors
    witnesses: tuple            # pairs (signs, alpha)
    partial: bool = False
    inconclusive: tuple = ()

    def witness_for(self, signs):
        for s, alpha in self.witnesses:
            if s == tuple(signs):
                return alpha
        return None

    def __contains__(self, signs):
        return tuple(signs) in self.covectors


def q_set(matrix, chi, radius=DEFAULT_RADIUS) -> QSet:
    m = validate_action_matrix(matrix)
    return _q_set_cached(m, as_character(chi, m.d), radius)


@lru_cache(maxsize=4096)
def _q_set_cached(m, chi, radius):
    attached = []
    inconclusive = []
    for cov in enumerate_covectors(m):
        res = decide_attached(m, cov, chi, radius)
        if res.status == ATTACHED:
            attached.append((cov.signs, res.witness))
        elif res.status == INCONCLUSIVE:
            inconclusive.append(cov.signs)
    return QSet(frozenset(s for s, _ in attached), tuple(attached),
                partial=bool(inconclusive), inconclusive=tuple(inconclusive))


def q_set_d1_closed_form(k, n, chi) -> QSet:
    """The one-dimensional closed form for k weight-+1 and n-k weight--1
    coordinates: only the zero class for non-integers and inside the window
    -k < chi < n-k; the positive class joins from n-k upward, the negative
    class from -k downward.

    The thresholds are forced by the attachment clauses: the positive class
    needs one strictly negative integer per weight--1 coordinate, giving
    chi >= n-k, and the negative class needs one per weight-+1 coordinate,
    giving chi <= -k.
    """
    if n < 2 or not 1 <= k <= n - 1:
        raise BadShape(f"need n > 1 and 1 <= k <= n-1, got k={k}, n={n}")
    chi = ParamScalar.of(chi) if not isinstance(chi, ParamScalar) else chi
    zero = (0,) * n
    plus = (1,) * k + (-1,) * (n - k)
    minus = tuple(-s for s in plus)
    covs = {zero}
    if chi.is_integer:
        c = int(chi.rat)
        if c >= n - k:
            covs.add(plus)
        elif c <= -k:
            covs.add(minus)
    return QSet(frozenset(covs), ())


# ---------------------------------------------------------------------------
# the arrow pre-order
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArrowResult:
    holds: bool
    difference_integral: bool
    q_subset: bool
    source_q: QSet
    target_q: QSet

    def __bool__(self):
        return self.holds


def chi_arrow(matrix, chi, chi2, radius=DEFAULT_RADIUS) -> ArrowResult:
    """Does chi shift onto chi2 (every covector attached to chi2 is attached
    to chi, and chi - chi2 is integral)?"""
    m = validate_action_matrix(matrix)
    if not _unimodular(m):
        raise NotUnimodular("the arrow criterion requires a unimodular matrix")
    chi = as_character(chi, m.d)
    chi2 = as_character(chi2, m.d)
    q1 = q_set(m, chi, radius)
    q2 = q_set(m, chi2, radius)
    if q1.partial or q2.partial:
        raise PartialQSet("attachment scan was inconclusive")
    diff_ok = is_integral(character_sub(chi, chi2))
    subset = q2.covectors <= q1.covectors
    return ArrowResult(diff_ok and subset, diff_ok, subset, q1, q2)


@dataclass(frozen=True)
class Maximality:
    status: str                 # "maximal" | "not_maximal" | "unknown_within"
    theta: tuple | None = None
    radius: int | None = None


def is_maximal(matrix, chi, radius=DEFAULT_RADIUS) -> Maximality:
    """chi is maximal when no integral shift strictly enlarges its Q-set.

    Exact for one-dimensional tori in the mixed-sign column case (via the
    closed form); otherwise a bounded refutation search that can only answer
    "not maximal" or "unknown within the radius".
    """
    m = validate_action_matrix(matrix)
    if not _unimodular(m):
        raise NotUnimodular("maximality requires a unimodular matrix")
    chi = as_character(chi, m.d)
    if m.d == 1:
        k = sum(1 for j in range(m.n) if m.entries[0][j] == 1)
        if 1 <= k <= m.n - 1:
            c0 = chi[0]
            if not c0.is_integer:
                return Maximality("maximal")
            c = int(c0.rat)
            if -k < c < m.n - k:
                return Maximality("not_maximal", theta=((m.n - k) - c,))
            return Maximality("maximal")
    base = q_set(m, chi, radius)
    for r in range(1, radius + 1):
        for theta in product(range(-r, r + 1), repeat=m.d):
            if max(abs(t) for t in theta) != r:
                continue
            shifted = q_set(m, character_add(chi, theta), radius)
            if base.covectors < shifted.covectors:
                return Maximality("not_maximal", theta=theta)
    return Maximality("unknown_within", radius=radius)


# ---------------------------------------------------------------------------
# the shifting cone
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShiftCone:
    generators: tuple           # integer vectors inside the open chamber
    n0: int
    n1: int
    delta: tuple                # the all-columns sum
    box_constant: Fraction

    def contains_zero(self):
        return True             # 0 enters by convention (empty combination)


def shifting_cone(matrix, chi, chamber: Chamber,
                  radius=DEFAULT_RADIUS, validation_multiples=(1, 2, 3)) -> ShiftCone:
    """Full-dimensional integral cone of shifts inside the chamber.

    Construction: N0 clears the denominators of the projected attachment
    witnesses, N1 >= N0 is enlarged until (N1/d) <mu_i, pr(chi)> exceeds
    every |<mu_i, a_j>| and the shifted witnesses have all nonzero integer
    entries of modulus > 1; generators are p(N1 pr(chi) + delta + A v) over
    the vertices v of a rational box [-c, c]^n kept inside the admissible
    slab.  Every generator u is post-validated through the arrow oracle:
    chi + q u must shift onto chi for q in validation_multiples, and a
    failure is a hard error.
    """
    m = validate_action_matrix(matrix)
    if not _unimodular(m):
        raise NotUnimodular("the shifting cone requires a unimodular matrix")
    chi = as_character(chi, m.d)
    prchi = pr_vector(chi)
    located = chamber_of(prchi, chamber.arrangement)
    if not isinstance(located, Chamber) or located.signs != chamber.signs:
        raise NotInChamber("pr(chi) does not lie in the open chamber")

    qres = q_set(m, chi, radius)
    if qres.partial:
        raise PartialQSet("attachment scan was inconclusive")

    denominators = [x.denominator for x in prchi]
    for _, alpha in qres.witnesses:
        denominators.extend(a.rat.denominator for a in alpha)
    n0 = 1
    for den in denominators:
        n0 = n0 * den // _gcd(n0, den)

    mus = chamber.facet_normals()
    pair_pr = [qlinalg.dot([Fraction(x) for x in mu], list(prchi)) for mu in mus]
    assert all(p > 0 for p in pair_pr)
    col_bound = [max(abs(sum(mu[r] * m.entries[r][j] for r in range(m.d)))
                     for j in range(m.n)) for mu in mus]
    need = max(Fraction(m.d) * cb / p for cb, p in zip(col_bound, pair_pr))
    p = max(1, int(need // n0) + 1)
    while True:
        n1 = p * n0
        if not all(Fraction(n1, m.d) * pp > cb
                   for pp, cb in zip(pair_pr, col_bound)):
            p += 1
            continue
        ok = True
        for signs, alpha in qres.witnesses:
            for s, a in zip(signs, alpha):
                if s != 0:
                    shifted = a.rat * (1 + n1)
                    if shifted != 0 and abs(shifted) <= 1:
                        ok = False
        if ok:
            break
        p += 1

    delta_vec = tuple(sum(m.entries[r][j] for j in range(m.n))
                      for r in range(m.d))
    base = [n1 * prchi[r] + delta_vec[r] for r in range(m.d)]
    assert all(x.denominator == 1 for x in base)
    slack = []
    for mu, cb in zip(mus, col_bound):
        r_i = qlinalg.dot([Fraction(x) for x in mu], base)
        assert r_i > 0
        l_i = sum(abs(sum(mu[r] * m.entries[r][j] for r in range(m.d)))
                  for j in range(m.n))
        slack.append(r_i / l_i)
    c = min(Fraction(1), min(slack)) / 2
    pbox = c.denominator

    generators = set()
    for corner in product((c, -c), repeat=m.n):
        image = [sum(m.entries[r][j] * corner[j] for j in range(m.n))
                 for r in range(m.d)]
        u = tuple(int(pbox * base[r] + pbox * image[r]) for r in range(m.d))
        generators.add(u)
    generators = tuple(sorted(generators))

    if qlinalg.rank([list(map(Fraction, u)) for u in generators]) != m.d:
        raise ValidationFailed("generators do not span a full-dimensional cone")
    for u in generators:
        if not chamber.contains(u):
            raise ValidationFailed("generator escapes the chamber",
                                   generator=u)
        for q in validation_multiples:
            shifted = character_add(chi, tuple(q * x for x in u))
            if not chi_arrow(m, shifted, chi, radius).holds:
                raise ValidationFailed(
                    "arrow validation failed", generator=u, multiple=q)
    return ShiftCone(generators, n0, n1, delta_vec, c)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)
