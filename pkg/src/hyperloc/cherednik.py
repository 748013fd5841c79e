"""The cyclic-group specialization: quiver matrix, parameter translation,
the bad-parameter hyperplane arrangement, lowest-weight module dimensions,
Dunkl-operator eigenvalues and the localization verdict.

Parameters are an m-tuple h = (h_0, ..., h_{m-1}) of rationals, indices mod
m (so h_m reads h_0).  The quantization parameter is the affine image
chi_i = h_i - h_0 + (i - m)/m for i in 1..m-1.  The arrangement of bad
parameters consists of the hyperplanes j + m(h_{i+j} - h_i) = 0 over
i in [1, m-1], j in [0, m-i]; the j = 0 equations read 0 = 0 identically
and are skipped (and reported) rather than taken literally.  Under the
affine parameter map this arrangement lands exactly on the stability walls
of the cyclic quiver matrix, and `localization_verdict` cross-checks the
two computations against each other on every call.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import gitfan
from .errors import BadM, BadShape, InternalInconsistency
from .lattice import IntMatrix, primitive
from .scalars import ParamScalar


@dataclass(frozen=True)
class CherednikParams:
    m: int
    h: tuple                  # rationals indexed 0..m-1

    def __post_init__(self):
        if self.m < 2:
            raise BadM(f"cyclic order must be at least 2, got {self.m}")
        h = tuple(Fraction(x) for x in self.h)
        if len(h) != self.m:
            raise BadShape(f"need {self.m} parameters, got {len(h)}")
        object.__setattr__(self, "h", h)

    def h_at(self, i):
        return self.h[i % self.m]


def cyclic_quiver_matrix(m) -> IntMatrix:
    """(m-1) x m weight matrix of the cyclic quiver torus: identity block
    with an all--1 last column."""
    if m < 2:
        raise BadM(f"cyclic order must be at least 2, got {m}")
    return IntMatrix(tuple(
        tuple(1 if j == i else (-1 if j == m - 1 else 0) for j in range(m))
        for i in range(m - 1)))


def chi_of_h(params: CherednikParams):
    """chi_i = h_i - h_0 + (i - m)/m for i in 1..m-1 (h_m read as h_0)."""
    m = params.m
    return tuple(ParamScalar(params.h[i] - params.h[0] + Fraction(i - m, m))
                 for i in range(1, m))


def arrangement_equations(params: CherednikParams):
    """All equations of the bad-parameter arrangement, split into the
    nondegenerate ones (as (i, j, value)) and the skipped degenerate pairs.
    """
    m = params.m
    nondegenerate = []
    skipped = []
    for i in range(1, m):
        for j in range(0, m - i + 1):
            if j % m == 0:
                skipped.append((i, j))
                continue
            value = Fraction(j) + m * (params.h_at(i + j) - params.h_at(i))
            nondegenerate.append((i, j, value))
    return nondegenerate, skipped


def in_arrangement_C(params: CherednikParams):
    """Whether some nondegenerate equation vanishes; returns
    (bool, satisfied (i, j) pairs, skipped (i, j) pairs)."""
    nondegenerate, skipped = arrangement_equations(params)
    satisfied = [(i, j) for i, j, value in nondegenerate if value == 0]
    return bool(satisfied), satisfied, skipped


def simple_dim(params: CherednikParams, i):
    """Smallest c >= 1 with c + m(h_{i+c} - h_i) = 0, else None (infinite).

    Exact without a search bound: h_{i+c} depends on c only mod m, so each
    residue j contributes at most the single candidate c = m(h_i - h_{i+j}),
    valid when it is a positive integer congruent to j.
    """
    m = params.m
    best = None
    for j in range(m):
        c = m * (params.h_at(i) - params.h_at(i + j))
        if c.denominator != 1:
            continue
        c = int(c)
        if c >= 1 and c % m == j % m and (best is None or c < best):
            best = c
    return best


@dataclass(frozen=True)
class DeltaModule:
    """Action data on the lowest-weight line over index i: entry r of
    y_coeffs is the scalar of y x^r e_i -> x^(r-1) e_i."""

    i: int
    truncation: int
    y_coeffs: tuple

    def first_zero(self):
        for r, value in enumerate(self.y_coeffs, start=1):
            if value == 0:
                return r
        return None


def delta_action(params: CherednikParams, i, truncation) -> DeltaModule:
    """Fill y-action coefficients r + m(h_{i+r} - h_i) for r in 1..T; the
    first zero is an independent brute-force oracle for simple_dim."""
    if truncation < 1:
        raise BadShape("truncation must be at least 1")
    m = params.m
    coeffs = tuple(Fraction(r) + m * (params.h_at(i + r) - params.h_at(i))
                   for r in range(1, truncation + 1))
    return DeltaModule(i % m, truncation, coeffs)


def dunkl_ym_eigenvalue(params: CherednikParams, r):
    """product over i in 1..m of (r - m + i + m h_i), with h_m read as h_0."""
    if r < 0:
        raise BadShape("exponent must be nonnegative")
    m = params.m
    out = Fraction(1)
    for i in range(1, m + 1):
        out *= Fraction(r - m + i) + m * params.h_at(i)
    return out


def radial_parts_identity_check(params: CherednikParams, r_values):
    """Compare m^m * prod_i (r/m + h_i + (i-m)/m) with the Dunkl eigenvalue
    product for every r in the range; returns (bool, failing r or None)."""
    m = params.m
    for r in r_values:
        lhs = Fraction(m) ** m
        for i in range(1, m + 1):
            lhs *= Fraction(r, m) + params.h_at(i) + Fraction(i - m, m)
        if lhs != dunkl_ym_eigenvalue(params, r):
            return False, r
    return True, None


def arrangement_image_walls(m):
    """Push each nondegenerate arrangement equation through the parameter
    map and return the resulting hyperplanes in chi-space as primitive
    normals (they are all linear).

    The equation j + m(h_{i+j} - h_i) = 0 has coefficient sum zero, so it
    descends along h_i - h_0 = chi_i - (i - m)/m to a linear equation in
    chi; the constant term always cancels.
    """
    if m < 2:
        raise BadM(f"cyclic order must be at least 2, got {m}")
    walls = set()
    for i in range(1, m):
        for j in range(1, m - i + 1):
            a = i + j
            # chi-coefficients of h_a - h_i + j/m, writing h_t - h_0 in chi
            coeffs = [Fraction(0)] * (m - 1)
            const = Fraction(j, m)
            for index, sign in ((a, 1), (i, -1)):
                t = index % m
                if t == 0:
                    continue
                coeffs[t - 1] += sign
                const += sign * Fraction(-(t - m), m)
            assert const == 0, "arrangement image is not linear"
            walls.add(primitive(
                [Fraction(x) * _lcm_den(coeffs) for x in coeffs]))
    return frozenset(walls)


def _lcm_den(values):
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


def localization_verdict(params: CherednikParams) -> dict:
    """Bad-parameter membership, wall membership of chi, and the combined
    equivalence verdict; the two sides are a theorem apart and disagreement
    raises InternalInconsistency."""
    chi = chi_of_h(params)
    in_c, satisfied, skipped = in_arrangement_C(params)
    matrix = cyclic_quiver_matrix(params.m)
    arrangement = gitfan.wall_hyperplanes(matrix)
    location = gitfan.chamber_of([c.rat for c in chi], arrangement)
    on_wall = isinstance(location, gitfan.OnWall)
    if on_wall != in_c:
        raise InternalInconsistency(
            "arrangement membership and wall membership disagree",
            h=params.h, chi=tuple(str(c) for c in chi))
    return {
        "m": params.m,
        "h": params.h,
        "chi": chi,
        "h_in_arrangement": in_c,
        "satisfied_equations": satisfied,
        "skipped_degenerate_equations": skipped,
        "chi_on_wall": on_wall,
        "walls_hit": list(location.normals) if on_wall else [],
        "equivalence_holds": not in_c,
    }
