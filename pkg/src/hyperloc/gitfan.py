"""Stability combinatorics for a torus acting with weight matrix A.

Walls are the hyperplanes spanned by rank-(d-1) column subsets; on the
coordinate space they carry cone supports, on the zero fiber of the moment
map they are full hyperplanes and the fan supports all of Q^d.  Chambers are
recorded extensionally as sign vectors against the wall normals, which makes
membership and equality O(#walls) and exact.

Semistability of a point of T*V is decided through its support: the point is
semistable for delta exactly when delta lies in the rational cone generated
by the weights of its nonzero coordinates (+a_i for x_i, -a_i for y_i).
A positive answer returns the nonnegative combination; a negative one
returns a destabilizing integer one-parameter subgroup, i.e. an exact Farkas
separator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from . import exactlp, qlinalg
from .covectors import open_regions
from .errors import BadShape
from .lattice import IntMatrix, primitive, validate_action_matrix

FAN_ON_V = "FanOnV"
FAN_ON_MOMENT_FIBER = "FanOnMomentFiber"


@dataclass(frozen=True)
class WallArrangement:
    matrix: IntMatrix
    source: str
    normals: tuple            # primitive integer normals, sign-normalized
    members: tuple            # per wall: columns lying inside the wall span

    @property
    def support_generators(self):
        """Generators of the fan support (all of Q^d on the moment fiber)."""
        if self.source == FAN_ON_V:
            return tuple(self.matrix.columns())
        return None


@dataclass(frozen=True)
class Chamber:
    arrangement: WallArrangement
    signs: tuple              # one of +-1 per wall normal
    witness: tuple            # rational point realizing the signs

    @property
    def sign_string(self):
        return "".join("+" if s > 0 else "-" for s in self.signs)

    def contains(self, point) -> bool:
        pairs = _pairings(self.arrangement, point)
        return all(_sign(p) == s for p, s in zip(pairs, self.signs))

    def facet_normals(self):
        """Integer functionals nonnegative on the closed chamber (one per
        wall; possibly redundant)."""
        return tuple(tuple(s * x for x in normal)
                     for s, normal in zip(self.signs, self.arrangement.normals))


@dataclass(frozen=True)
class OnWall:
    arrangement: WallArrangement
    indices: tuple            # walls whose pairing with the point vanishes

    @property
    def normals(self):
        return tuple(self.arrangement.normals[i] for i in self.indices)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _pairings(arrangement, point):
    pt = [Fraction(x) for x in point]
    return [qlinalg.dot([Fraction(v) for v in normal], pt)
            for normal in arrangement.normals]


def wall_hyperplanes(matrix, source=FAN_ON_MOMENT_FIBER) -> WallArrangement:
    m = validate_action_matrix(matrix)
    if source not in (FAN_ON_V, FAN_ON_MOMENT_FIBER):
        raise BadShape(f"unknown fan source {source!r}")
    return _walls_cached(m, source)


@lru_cache(maxsize=None)
def _walls_cached(m, source):
    cols = [[Fraction(x) for x in m.column(j)] for j in range(m.n)]
    normals = {}
    for subset in combinations(range(m.n), m.d - 1):
        span = [cols[j] for j in subset]
        if qlinalg.rank(span) != m.d - 1:
            continue
        left = qlinalg.left_nullspace(qlinalg.transpose(span)) if span else \
            qlinalg.identity(m.d)
        if len(left) != 1:
            continue
        normal = primitive(qlinalg.clear_denominators(left[0]))
        if normal not in normals:
            members = frozenset(
                i for i in range(m.n)
                if qlinalg.dot([Fraction(x) for x in normal], cols[i]) == 0)
            normals[normal] = members
    ordered = sorted(normals)
    return WallArrangement(m, source, tuple(ordered),
                           tuple(normals[v] for v in ordered))


def chamber_of(delta, arrangement):
    """Chamber containing delta, or OnWall with the vanishing pairings."""
    if len(delta) != arrangement.matrix.d:
        raise BadShape("stability parameter has the wrong length")
    pairs = _pairings(arrangement, delta)
    zero = tuple(i for i, p in enumerate(pairs) if p == 0)
    if zero:
        return OnWall(arrangement, zero)
    return Chamber(arrangement, tuple(_sign(p) for p in pairs),
                   tuple(Fraction(x) for x in delta))


def is_generic(delta, arrangement) -> bool:
    return isinstance(chamber_of(delta, arrangement), Chamber)


def enumerate_chambers(arrangement) -> list:
    """All open chambers, by sign-vector enumeration with witnesses."""
    d = arrangement.matrix.d
    out = []
    for signs, w in open_regions(arrangement.normals, d):
        out.append(Chamber(arrangement, signs, tuple(w)))
    return sorted(out, key=lambda c: c.signs)


def effective(matrix, delta):
    """Does delta lie in the cone spanned by the columns of A?

    Returns (bool, certificate): coefficients when inside, an integer
    separating functional when not.
    """
    m = validate_action_matrix(matrix)
    res = exactlp.in_cone(m.columns(), delta)
    return (True, res.coefficients) if res.inside else (False, res.separator)


@dataclass(frozen=True)
class Semistability:
    semistable: bool
    support: tuple              # labels ("x"|"y", index) of nonzero coordinates
    combination: tuple | None   # per supported weight, nonnegative rational
    destabilizer: tuple | None  # integer one-parameter subgroup


def semistable_point(matrix, x_coords, y_coords, delta) -> Semistability:
    m = validate_action_matrix(matrix)
    if len(x_coords) != m.n or len(y_coords) != m.n:
        raise BadShape("point of T*V needs n x-coordinates and n y-coordinates")
    support = []
    weights = []
    for i in range(m.n):
        if Fraction(x_coords[i]) != 0:
            support.append(("x", i))
            weights.append(m.column(i))
        if Fraction(y_coords[i]) != 0:
            support.append(("y", i))
            weights.append(tuple(-v for v in m.column(i)))
    res = exactlp.in_cone(weights, delta)
    if res.inside:
        return Semistability(True, tuple(support), tuple(res.coefficients), None)
    return Semistability(False, tuple(support), None, res.separator)


def extended_core_projection(x_coords, y_coords, subset):
    """Zero out x_i for i in the subset and y_i outside it."""
    n = len(x_coords)
    x_new = tuple(Fraction(0) if i in subset else Fraction(x_coords[i])
                  for i in range(n))
    y_new = tuple(Fraction(y_coords[i]) if i in subset else Fraction(0)
                  for i in range(n))
    return x_new, y_new


def fan_equality_check(matrix, deltas=None, trials=100, seed=0) -> dict:
    """Sample points of T*V and confirm that a point is semistable exactly
    when some extended-core projection along a subset of its y-support is.

    Returns a report with any counterexamples.
    """
    m = validate_action_matrix(matrix)
    if deltas is None:
        deltas = [tuple(Fraction(int(i == j)) for j in range(m.d))
                  for i in range(m.d)]
        deltas += [tuple(-x for x in dl) for dl in list(deltas)]
    rng = random.Random(seed)
    pool = [Fraction(0), Fraction(0), Fraction(1), Fraction(-1),
            Fraction(1, 2), Fraction(2)]
    counterexamples = []
    checked = 0
    for delta in deltas:
        for _ in range(trials):
            x = tuple(rng.choice(pool) for _ in range(m.n))
            y = tuple(rng.choice(pool) for _ in range(m.n))
            direct = semistable_point(m, x, y, delta).semistable
            y_support = [i for i in range(m.n) if y[i] != 0]
            via_core = False
            for r in range(len(y_support) + 1):
                for subset in combinations(y_support, r):
                    px, py = extended_core_projection(x, y, set(subset))
                    if semistable_point(m, px, py, delta).semistable:
                        via_core = True
                        break
                if via_core:
                    break
            checked += 1
            if direct != via_core:
                counterexamples.append(
                    {"delta": delta, "x": x, "y": y,
                     "direct": direct, "via_core": via_core})
    return {"checked": checked, "counterexamples": counterexamples}
