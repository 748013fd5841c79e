"""Star-product calculus on polynomial symbols in x, xi and half powers of h.

Elements are finite sums c * h^(k/2) * x^alpha * xi^beta with rational c.
The product is

    a ∘ b = sum over multi-indices m of (h^|m| / m!) (d/dxi)^m a * (d/dx)^m b,

which is exact on polynomials (the sum is finite), associative and unital.
Sign conventions are fixed by {xi_i, x_j} = delta_ij for the classical
bracket and the resulting commutator [x_i, xi_i] = -h; the literature also
uses the opposite convention, so identities below are stated against this
one.

The h-filtration: an element lies in level m when every term has h-exponent
at least -m, and `symbol_part(a, m)` extracts the h^(-m) layer.  The weight
grading counts x and xi with weight one and h with weight two.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import qlinalg
from .errors import BadShape, NonSymbol, NotInFiltration, RankDeficient
from .lattice import IntMatrix, kernel_basis


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _falling(n, k):
    out = 1
    for i in range(k):
        out *= n - i
    return out


def _half(value) -> int:
    """Twice a half-integer exponent, validated."""
    q = Fraction(value)
    if q.denominator not in (1, 2):
        raise BadShape(f"h-exponents live in (1/2)Z, got {value}")
    return int(q * 2)


class WeylElement:
    """Immutable finite sum of terms keyed by (2*h-exponent, x-exps, xi-exps)."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars, terms=None):
        self.nvars = int(nvars)
        clean = {}
        for key, coeff in (terms or {}).items():
            k2, alpha, beta = key
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            alpha = tuple(int(v) for v in alpha)
            beta = tuple(int(v) for v in beta)
            if len(alpha) != self.nvars or len(beta) != self.nvars:
                raise BadShape("exponent vectors must have length nvars")
            if any(v < 0 for v in alpha + beta):
                raise BadShape("negative polynomial exponents")
            clean[(int(k2), alpha, beta)] = coeff
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def one(cls, nvars):
        zero = (0,) * nvars
        return cls(nvars, {(0, zero, zero): Fraction(1)})

    @classmethod
    def x(cls, i, nvars):
        alpha = tuple(int(j == i) for j in range(nvars))
        return cls(nvars, {(0, alpha, (0,) * nvars): Fraction(1)})

    @classmethod
    def xi(cls, i, nvars):
        beta = tuple(int(j == i) for j in range(nvars))
        return cls(nvars, {(0, (0,) * nvars, beta): Fraction(1)})

    @classmethod
    def hbar(cls, nvars, power=1):
        zero = (0,) * nvars
        return cls(nvars, {(_half(power), zero, zero): Fraction(1)})

    @classmethod
    def monomial(cls, nvars, coeff, hbar_power, alpha, beta):
        return cls(nvars, {(_half(hbar_power), tuple(alpha), tuple(beta)):
                           Fraction(coeff)})

    # -- views -------------------------------------------------------------

    def terms(self):
        """Sorted (h-exponent as Fraction, alpha, beta, coefficient)."""
        return [(Fraction(k2, 2), alpha, beta, self._terms[(k2, alpha, beta)])
                for k2, alpha, beta in sorted(self._terms)]

    def is_zero(self):
        return not self._terms

    def coefficient(self, hbar_power, alpha, beta):
        return self._terms.get((_half(hbar_power), tuple(alpha), tuple(beta)),
                               Fraction(0))

    def order(self):
        """Least filtration level containing the element; None for zero."""
        if not self._terms:
            return None
        return Fraction(-min(k2 for k2, _, _ in self._terms), 2)

    def is_symbol(self):
        return all(k2 == 0 for k2, _, _ in self._terms)

    # -- linear structure ----------------------------------------------------

    def _combine(self, other, sign):
        if self.nvars != other.nvars:
            raise BadShape("mixing different variable counts")
        terms = dict(self._terms)
        for key, coeff in other._terms.items():
            terms[key] = terms.get(key, Fraction(0)) + sign * coeff
        return WeylElement(self.nvars, terms)

    def __add__(self, other):
        return self._combine(other, Fraction(1))

    def __sub__(self, other):
        return self._combine(other, Fraction(-1))

    def __neg__(self):
        return WeylElement(self.nvars,
                           {k: -c for k, c in self._terms.items()})

    def scale(self, factor):
        factor = Fraction(factor)
        return WeylElement(self.nvars,
                           {k: factor * c for k, c in self._terms.items()})

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.nvars == other.nvars \
            and self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self._terms.items()))))

    def __str__(self):
        if not self._terms:
            return "0"
        bits = []
        for h, alpha, beta, coeff in self.terms():
            factors = []
            if coeff != 1 or (h == 0 and not any(alpha) and not any(beta)):
                factors.append(str(coeff))
            if h != 0:
                factors.append(f"h^{h}" if h != 1 else "h")
            for i, e in enumerate(alpha):
                if e:
                    factors.append(f"x{i + 1}" + (f"^{e}" if e > 1 else ""))
            for i, e in enumerate(beta):
                if e:
                    factors.append(f"xi{i + 1}" + (f"^{e}" if e > 1 else ""))
            bits.append("*".join(factors))
        return " + ".join(bits)

    __repr__ = __str__


def star(a: WeylElement, b: WeylElement) -> WeylElement:
    """The deformed product; bilinear, unital, associative, exact."""
    if a.nvars != b.nvars:
        raise BadShape("mixing different variable counts")
    n = a.nvars
    out = {}
    for (k2a, xa, sa), ca in a._terms.items():
        for (k2b, xb, sb), cb in b._terms.items():
            base = ca * cb
            for m in product(*(range(min(sa[i], xb[i]) + 1) for i in range(n))):
                coeff = base
                for i in range(n):
                    if m[i]:
                        coeff *= Fraction(
                            _falling(sa[i], m[i]) * _falling(xb[i], m[i]),
                            _factorial(m[i]))
                key = (k2a + k2b + 2 * sum(m),
                       tuple(xa[i] + xb[i] - m[i] for i in range(n)),
                       tuple(sa[i] + sb[i] - m[i] for i in range(n)))
                out[key] = out.get(key, Fraction(0)) + coeff
    return WeylElement(n, out)


def classical_product(a: WeylElement, b: WeylElement) -> WeylElement:
    """Plain commutative product of symbols (the m = 0 layer of star)."""
    if a.nvars != b.nvars:
        raise BadShape("mixing different variable counts")
    out = {}
    for (k2a, xa, sa), ca in a._terms.items():
        for (k2b, xb, sb), cb in b._terms.items():
            key = (k2a + k2b,
                   tuple(p + q for p, q in zip(xa, xb)),
                   tuple(p + q for p, q in zip(sa, sb)))
            out[key] = out.get(key, Fraction(0)) + ca * cb
    return WeylElement(a.nvars, out)


def commutator(a: WeylElement, b: WeylElement) -> WeylElement:
    return star(a, b) - star(b, a)


def _partial(a, i, with_respect_to_x):
    out = {}
    for (k2, alpha, beta), coeff in a._terms.items():
        exps = alpha if with_respect_to_x else beta
        if exps[i] == 0:
            continue
        new = list(exps)
        new[i] -= 1
        key = (k2, tuple(new), beta) if with_respect_to_x else (k2, alpha, tuple(new))
        out[key] = out.get(key, Fraction(0)) + coeff * exps[i]
    return WeylElement(a.nvars, out)


def poisson(f: WeylElement, g: WeylElement) -> WeylElement:
    """Symplectic bracket with {xi_i, x_j} = delta_ij on pure symbols."""
    if not f.is_symbol() or not g.is_symbol():
        raise NonSymbol("the bracket is defined on h-free symbols")
    n = f.nvars
    out = WeylElement.zero(n)
    for i in range(n):
        out = out + classical_product(_partial(f, i, False), _partial(g, i, True))
        out = out - classical_product(_partial(f, i, True), _partial(g, i, False))
    return out


def symbol_part(a: WeylElement, level) -> WeylElement:
    """The h^(-level) layer of an element of filtration level <= `level`."""
    k2 = -_half(level)
    if a.order() is not None and a.order() > Fraction(level):
        raise NotInFiltration(
            f"element of order {a.order()} is not in level {level}")
    return WeylElement(a.nvars, {key: c for key, c in a._terms.items()
                                 if key[0] == k2})


def quantized_moment_map(matrix, i) -> WeylElement:
    """Generator i of the torus action inside the deformed algebra:
    sum_j a_ij h^(-1) x_j xi_j."""
    m = matrix if isinstance(matrix, IntMatrix) else IntMatrix(tuple(map(tuple, matrix)))
    if not 0 <= i < m.d:
        raise BadShape(f"generator index out of range: {i}")
    terms = {}
    for j in range(m.n):
        if m.entries[i][j]:
            alpha = tuple(int(t == j) for t in range(m.n))
            terms[(-2, alpha, alpha)] = Fraction(m.entries[i][j])
    return WeylElement(m.n, terms)


def f_weight(a: WeylElement):
    """Common weight |alpha| + |beta| + 2 * h-exponent, or None when terms
    disagree; the zero element reports weight 0."""
    weights = {sum(alpha) + sum(beta) + k2
               for k2, alpha, beta in a._terms}
    if not weights:
        return 0
    if len(weights) > 1:
        return None
    return weights.pop()


def torus_weight(matrix, a: WeylElement):
    """Common torus weight A (alpha - beta) of all terms, or None."""
    m = matrix if isinstance(matrix, IntMatrix) else IntMatrix(tuple(map(tuple, matrix)))
    weights = {m.matvec(tuple(p - q for p, q in zip(alpha, beta)))
               for _, alpha, beta in a._terms}
    if len(weights) != 1:
        return None
    return weights.pop()


@dataclass(frozen=True)
class FlatnessCertificate:
    """Normal form certifying flatness of the classical moment map.

    After permuting coordinates so the leading d columns are independent and
    normalizing them to the identity by row operations, every generator
    reads x_i y_i - sum_j c_ij x_j y_j; the initial ideal under the
    lexicographic order is generated by the monomials x_i y_i, so the zero
    fiber is a complete intersection of dimension 2n - d and the reduction
    has dimension 2(n - d).
    """

    generators: tuple           # sum_i a_ji x_i xi_i, one per row
    rewritten: tuple            # x_i xi_i - sum c_ij x_j xi_j (permuted labels)
    permutation: tuple          # column order, leading block first
    row_ops: tuple              # rational U with U A[:, perm] = [I | C]
    c_table: tuple              # c_ij = -C_ij over the trailing columns
    initial_monomials: tuple    # coordinate indices i with leading term x_i xi_i
    dim_zero_fiber: int         # 2n - d
    dim_reduction: int          # 2(n - d)
    kernel: IntMatrix           # B with A B = 0, saturated columns
    kernel_zero_rows: tuple     # rows of B that vanish identically


def moment_ideal(matrix) -> FlatnessCertificate:
    m = matrix if isinstance(matrix, IntMatrix) else IntMatrix(tuple(map(tuple, matrix)))
    if m.rank() < m.d:
        raise RankDeficient("moment ideal needs a full row rank matrix")
    generators = []
    for i in range(m.d):
        terms = {}
        for j in range(m.n):
            if m.entries[i][j]:
                alpha = tuple(int(t == j) for t in range(m.n))
                terms[(0, alpha, alpha)] = Fraction(m.entries[i][j])
        generators.append(WeylElement(m.n, terms))

    chosen = []
    cols = []
    for j in range(m.n):
        candidate = cols + [[Fraction(x) for x in m.column(j)]]
        if qlinalg.rank(candidate) == len(candidate):
            chosen.append(j)
            cols = candidate
        if len(chosen) == m.d:
            break
    rest = [j for j in range(m.n) if j not in chosen]
    perm = tuple(chosen + rest)

    lead = [[Fraction(m.entries[r][j]) for j in chosen] for r in range(m.d)]
    u_rows = []
    for r in range(m.d):
        unit = [Fraction(int(t == r)) for t in range(m.d)]
        u_rows.append(qlinalg.solve(qlinalg.transpose(lead), unit))
    c_cols = [[sum(u_rows[r][t] * m.entries[t][j] for t in range(m.d))
               for j in rest] for r in range(m.d)]

    rewritten = []
    for r in range(m.d):
        terms = {}
        alpha = tuple(int(t == chosen[r]) for t in range(m.n))
        terms[(0, alpha, alpha)] = Fraction(1)
        for jpos, j in enumerate(rest):
            if c_cols[r][jpos]:
                alpha = tuple(int(t == j) for t in range(m.n))
                terms[(0, alpha, alpha)] = c_cols[r][jpos]
        rewritten.append(WeylElement(m.n, terms))

    kernel = kernel_basis(m)
    zero_rows = tuple(i for i in range(m.n)
                      if all(x == 0 for x in kernel.row(i)))
    return FlatnessCertificate(
        generators=tuple(generators),
        rewritten=tuple(rewritten),
        permutation=perm,
        row_ops=tuple(tuple(row) for row in u_rows),
        c_table=tuple(tuple(-c for c in row) for row in c_cols),
        initial_monomials=tuple(chosen),
        dim_zero_fiber=2 * m.n - m.d,
        dim_reduction=2 * (m.n - m.d),
        kernel=kernel,
        kernel_zero_rows=zero_rows)
