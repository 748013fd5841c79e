"""Exact scalars: reduced rationals and the two-dimensional algebra Q + Q*tau.

Rationals are `fractions.Fraction` (already stored reduced, positive
denominator).  A `ParamScalar` is rat + tau*T where T is a formal
transcendental direction; it models a generic complex parameter exactly,
since every condition we ever test is a finite system of Q-linear equations,
integrality tests and sign tests.  Products of two tau-terms never occur in
any such condition, so they are rejected rather than extending to Q[T].

The projection `pr` is the fixed Q-linear map picking out the rational part.

Text encoding used in JSON payloads and on the command line: "p/q" for
rationals and "p/q+r/sT" when a tau-part is present (T denotes tau).  Parsing
is exact; no floating point is accepted or produced.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, TauProductUnsupported

Rational = Fraction

_TERM_RE = re.compile(r"[+-]?[^+-]+")


def _parse_fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not an exact rational: {text!r}") from exc


@dataclass(frozen=True)
class ParamScalar:
    """Element rat + tau*T of Q + Q*tau."""

    rat: Fraction = Fraction(0)
    tau: Fraction = Fraction(0)

    @staticmethod
    def of(value) -> "ParamScalar":
        if isinstance(value, ParamScalar):
            return value
        return ParamScalar(Fraction(value))

    @staticmethod
    def parse(text: str) -> "ParamScalar":
        """Parse "p/q", "p/q+r/sT", "T", "-T", "2T", ...; exact only."""
        compact = text.strip().replace(" ", "")
        if not compact:
            raise ParseError("empty scalar")
        rat = Fraction(0)
        tau = Fraction(0)
        matched = "".join(_TERM_RE.findall(compact))
        if matched != compact:
            raise ParseError(f"malformed scalar: {text!r}")
        for term in _TERM_RE.findall(compact):
            if term.endswith(("T", "t")):
                body = term[:-1]
                if body in ("", "+"):
                    tau += 1
                elif body == "-":
                    tau -= 1
                else:
                    tau += _parse_fraction(body)
            else:
                rat += _parse_fraction(term)
        return ParamScalar(rat, tau)

    def __str__(self):
        if self.tau == 0:
            return str(self.rat)
        tau = f"{self.tau}T"
        if self.rat == 0:
            return tau
        sign = "+" if self.tau > 0 else ""
        return f"{self.rat}{sign}{tau}"

    # -- algebra ---------------------------------------------------------

    def __add__(self, other):
        other = ParamScalar.of(other)
        return ParamScalar(self.rat + other.rat, self.tau + other.tau)

    __radd__ = __add__

    def __neg__(self):
        return ParamScalar(-self.rat, -self.tau)

    def __sub__(self, other):
        return self + (-ParamScalar.of(other))

    def __rsub__(self, other):
        return ParamScalar.of(other) + (-self)

    def __mul__(self, other):
        other = ParamScalar.of(other)
        if self.tau != 0 and other.tau != 0:
            raise TauProductUnsupported(
                "product of two tau-terms is outside Q + Q*tau",
                left=self, right=other)
        return ParamScalar(self.rat * other.rat,
                           self.rat * other.tau + self.tau * other.rat)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero rational."""
        q = Fraction(other.rat if isinstance(other, ParamScalar) else other)
        if isinstance(other, ParamScalar) and other.tau != 0:
            raise TauProductUnsupported("division by a tau-term", divisor=other)
        if q == 0:
            raise ZeroDivisionError("division of ParamScalar by zero")
        return ParamScalar(self.rat / q, self.tau / q)

    def __bool__(self):
        return self.rat != 0 or self.tau != 0

    # -- predicates ------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.tau == 0

    @property
    def is_integer(self) -> bool:
        return self.tau == 0 and self.rat.denominator == 1


def pr(x) -> Fraction:
    """The fixed Q-linear projection onto the rational part."""
    return ParamScalar.of(x).rat


def scalar_vector(values) -> tuple:
    return tuple(ParamScalar.of(v) for v in values)


def parse_scalar_csv(text: str) -> tuple:
    return tuple(ParamScalar.parse(part) for part in text.split(","))


def parse_rational_csv(text: str) -> tuple:
    return tuple(_parse_fraction(part.strip()) for part in text.split(","))


def format_rational(q: Fraction) -> str:
    return str(q)
