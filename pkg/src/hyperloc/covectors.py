"""Covectors of the oriented matroid realized by the columns of A.

A covector is a sign vector (sign<l, a_i>)_i for some integer functional l.
Enumeration walks the face lattice of the central arrangement {a_i ^ perp}
inside Q^d: for every intersection subspace (flat) we restrict the remaining
hyperplanes to it and enumerate the open regions of the induced arrangement
by incremental insertion, testing candidate sides with exact feasibility
checks.  Region counts are polynomial in n for fixed d, so this avoids the
3^n sweep over candidate sign vectors (which survives in the test-suite as
an oracle).

Every covector stores an integer witness functional, and every witness is
re-verified against its sign vector before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import exactlp, qlinalg
from .errors import BadShape, NotACovector
from .lattice import IntMatrix, validate_action_matrix

SIGN_CHARS = {1: "+", 0: "0", -1: "-"}
CHAR_SIGNS = {"+": 1, "0": 0, "-": -1}


def sign_string(signs) -> str:
    return "".join(SIGN_CHARS[int(s)] for s in signs)


def parse_sign_string(text) -> tuple:
    try:
        return tuple(CHAR_SIGNS[ch] for ch in text.strip())
    except KeyError as exc:
        raise BadShape(f"sign vectors use the characters + 0 -: {text!r}") from exc


@dataclass(frozen=True)
class Covector:
    signs: tuple          # entries in {-1, 0, 1}
    witness: tuple        # integer functional realizing the signs

    @property
    def sign_string(self):
        return sign_string(self.signs)

    def __iter__(self):
        return iter(self.signs)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _verify(matrix, signs, witness):
    lam = [Fraction(w) for w in witness]
    for i in range(matrix.n):
        pairing = qlinalg.dot(lam, [Fraction(x) for x in matrix.column(i)])
        if _sign(pairing) != signs[i]:
            return False
    return True


def open_regions(vectors, dim):
    """Open regions of the central arrangement {v ^ perp : v in vectors}.

    Returns a list of (signs, witness) where signs has one nonzero entry per
    vector and witness is a rational interior point.  dim = 0 or an empty
    vector list yields the single unconstrained region.
    """
    regions = [((), [Fraction(0)] * dim)]
    for idx, vec in enumerate(vectors):
        v = [Fraction(x) for x in vec]
        grown = []
        for signs, w in regions:
            here = _sign(qlinalg.dot(v, w))
            sides = [here] if here else []
            sides += [s for s in (1, -1) if s != here]
            for side in sides:
                if side == here:
                    grown.append((signs + (side,), w))
                    continue
                rows = [(tuple(s * x for x in vectors[j]), exactlp.GT, 0)
                        for j, s in enumerate(signs)]
                rows.append((tuple(side * x for x in vec), exactlp.GT, 0))
                point = exactlp.feasible_mixed(rows, dim)
                if point is not None:
                    grown.append((signs + (side,), point))
        regions = grown
    return regions


def _flats(matrix):
    """All intersection subspaces of {a_i ^ perp}, as (zero set, basis).

    The zero set of a flat L is {i : L inside a_i ^ perp}; the basis is a
    d x f rational matrix whose columns span L.
    """
    d = matrix.d
    cols = [[Fraction(x) for x in matrix.column(j)] for j in range(matrix.n)]

    def closure_of(basis):
        closed = frozenset(
            i for i in range(matrix.n)
            if all(qlinalg.dot(cols[i], bc) == 0 for bc in qlinalg.transpose(basis))
        ) if basis and basis[0] else frozenset(range(matrix.n))
        return closed

    full = qlinalg.identity(d)
    flats = {closure_of(full): full}
    queue = [closure_of(full)]
    while queue:
        closed = queue.pop()
        basis = flats[closed]
        f = len(basis[0]) if basis else 0
        if f == 0:
            continue
        for j in range(matrix.n):
            if j in closed:
                continue
            induced = [[qlinalg.dot(cols[j], bc)
                        for bc in qlinalg.transpose(basis)]]
            kernel = qlinalg.nullspace(induced)
            new_basis = qlinalg.matmul(basis, qlinalg.transpose(kernel)) \
                if kernel else [[] for _ in range(d)]
            key = closure_of(new_basis)
            if key not in flats:
                flats[key] = new_basis
                queue.append(key)
    return flats


def enumerate_covectors(matrix) -> list:
    """All covectors of the accepted matrix, each with an integer witness."""
    m = validate_action_matrix(matrix)
    return list(_enumerate_cached(m))


@lru_cache(maxsize=None)
def _enumerate_cached(m: IntMatrix):
    found = {}
    for closed, basis in _flats(m).items():
        f = len(basis[0]) if basis else 0
        outside = [i for i in range(m.n) if i not in closed]
        induced = []
        for i in outside:
            col = [Fraction(x) for x in m.column(i)]
            induced.append(tuple(qlinalg.dot(col, bc)
                                 for bc in qlinalg.transpose(basis)))
        for region_signs, w in open_regions(induced, f):
            lam_q = qlinalg.matvec(basis, w) if f else [Fraction(0)] * m.d
            lam = tuple(qlinalg.clear_denominators(lam_q))
            signs = [0] * m.n
            for pos, i in enumerate(outside):
                signs[i] = region_signs[pos]
            signs = tuple(signs)
            assert _verify(m, signs, lam), (signs, lam)
            found[signs] = Covector(signs, lam)
    return tuple(found[s] for s in sorted(found))


@dataclass(frozen=True)
class CovectorRefutation:
    """Nonnegative multipliers on the signed columns summing, together with
    free multipliers on the zero-sign columns, to the zero functional."""

    strict_multipliers: dict   # column index -> positive rational
    zero_multipliers: dict     # column index -> rational


def is_covector(matrix, signs):
    """Exact realizability test for a sign vector.

    Returns (True, Covector) or (False, CovectorRefutation).
    """
    m = matrix if isinstance(matrix, IntMatrix) else IntMatrix(tuple(map(tuple, matrix)))
    signs = tuple(int(s) for s in signs)
    if len(signs) != m.n or any(s not in (-1, 0, 1) for s in signs):
        raise BadShape("sign vector must lie in {-1,0,1}^n")
    rows = []
    for i, s in enumerate(signs):
        col = m.column(i)
        if s == 0:
            rows.append((col, exactlp.EQ, 0))
        else:
            rows.append((tuple(s * x for x in col), exactlp.GT, 0))
    point = exactlp.feasible_mixed(rows, m.d)
    if point is not None:
        lam = tuple(qlinalg.clear_denominators(point))
        if not _verify(m, signs, lam):
            # clearing denominators never changes signs; reaching here is a bug
            raise AssertionError("witness verification failed")
        return True, Covector(signs, lam)
    strict_idx = [i for i, s in enumerate(signs) if s != 0]
    zero_idx = [i for i, s in enumerate(signs) if s == 0]
    refutation = exactlp.strict_refutation(
        [tuple(signs[i] * x for x in m.column(i)) for i in strict_idx],
        [m.column(i) for i in zero_idx])
    assert refutation is not None, "infeasible strict system must have a refutation"
    y, mu = refutation
    combo = [Fraction(0)] * m.d
    for i, yi in zip(strict_idx, y):
        for r in range(m.d):
            combo[r] += yi * signs[i] * m.column(i)[r]
    for k, mk in zip(zero_idx, mu):
        for r in range(m.d):
            combo[r] += mk * m.column(k)[r]
    assert all(x == 0 for x in combo) and sum(y) == 1
    return False, CovectorRefutation(
        {i: yi for i, yi in zip(strict_idx, y) if yi != 0},
        {k: mk for k, mk in zip(zero_idx, mu) if mk != 0})


def as_covector(matrix, value) -> Covector:
    """Coerce a Covector, sign tuple, or sign string; raise NotACovector
    when the sign vector is not realizable."""
    if isinstance(value, Covector):
        m = matrix if isinstance(matrix, IntMatrix) else IntMatrix(tuple(map(tuple, matrix)))
        if not _verify(m, value.signs, value.witness):
            raise NotACovector(f"witness does not realize {value.sign_string}")
        return value
    signs = parse_sign_string(value) if isinstance(value, str) else tuple(int(s) for s in value)
    ok, result = is_covector(matrix, signs)
    if not ok:
        raise NotACovector(f"{sign_string(signs)} is not realizable",
                           refutation=result)
    return result
