"""Quaternion arithmetic over IEEE doubles.

Values are immutable; every operation routes through the constructor,
which rejects non-finite coordinates. Equality of values is deliberately
not defined (only tolerance-based comparison makes sense downstream);
use :func:`isclose`.

The two projections used by the tracing methods live here as well:
``proj_c`` drops the j and k parts, ``proj_s`` maps a quaternion to the
upper-half-plane complex representative of its congruence class.
"""

from __future__ import annotations

import math
import re

from .errors import NonFiniteError, ParseError, ZeroInverseError

__all__ = [
    "Quaternion",
    "quat",
    "from_complex",
    "mul",
    "conj",
    "trace",
    "norm",
    "inv",
    "proj_c",
    "proj_s",
    "congruent_distance",
    "distance",
    "isclose",
    "parse_quaternion",
    "format_quaternion",
]


class Quaternion:
    """A quaternion a1 + a2 i + a3 j + a4 k with float coordinates."""

    __slots__ = ("a1", "a2", "a3", "a4")

    def __init__(self, a1=0.0, a2=0.0, a3=0.0, a4=0.0):
        a1 = float(a1)
        a2 = float(a2)
        a3 = float(a3)
        a4 = float(a4)
        if not (math.isfinite(a1) and math.isfinite(a2)
                and math.isfinite(a3) and math.isfinite(a4)):
            raise NonFiniteError(
                f"non-finite quaternion coordinates ({a1}, {a2}, {a3}, {a4})")
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)
        object.__setattr__(self, "a3", a3)
        object.__setattr__(self, "a4", a4)

    def __setattr__(self, name, value):
        raise AttributeError("Quaternion is immutable")

    # -- conversions --------------------------------------------------

    @staticmethod
    def coerce(value) -> "Quaternion":
        """Promote a real or complex number; pass quaternions through."""
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, complex):
            return Quaternion(value.real, value.imag)
        if isinstance(value, (int, float)):
            return Quaternion(value)
        raise TypeError(f"cannot interpret {type(value).__name__} as quaternion")

    def as_tuple(self):
        return (self.a1, self.a2, self.a3, self.a4)

    def is_complex(self, tol=0.0) -> bool:
        return abs(self.a3) <= tol and abs(self.a4) <= tol

    def __repr__(self):
        return f"Quaternion({self.a1!r}, {self.a2!r}, {self.a3!r}, {self.a4!r})"

    def __str__(self):
        return format_quaternion(self)

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = Quaternion.coerce(other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return (self.a1 == other.a1 and self.a2 == other.a2
                and self.a3 == other.a3 and self.a4 == other.a4)

    def __hash__(self):
        return hash((self.a1, self.a2, self.a3, self.a4))

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        o = Quaternion.coerce(other)
        return Quaternion(self.a1 + o.a1, self.a2 + o.a2,
                          self.a3 + o.a3, self.a4 + o.a4)

    __radd__ = __add__

    def __sub__(self, other):
        o = Quaternion.coerce(other)
        return Quaternion(self.a1 - o.a1, self.a2 - o.a2,
                          self.a3 - o.a3, self.a4 - o.a4)

    def __rsub__(self, other):
        return Quaternion.coerce(other).__sub__(self)

    def __neg__(self):
        return Quaternion(-self.a1, -self.a2, -self.a3, -self.a4)

    def __mul__(self, other):
        p = self
        q = Quaternion.coerce(other)
        return Quaternion(
            p.a1 * q.a1 - p.a2 * q.a2 - p.a3 * q.a3 - p.a4 * q.a4,
            p.a1 * q.a2 + p.a2 * q.a1 + p.a3 * q.a4 - p.a4 * q.a3,
            p.a1 * q.a3 - p.a2 * q.a4 + p.a3 * q.a1 + p.a4 * q.a2,
            p.a1 * q.a4 + p.a2 * q.a3 - p.a3 * q.a2 + p.a4 * q.a1,
        )

    def __rmul__(self, other):
        return Quaternion.coerce(other).__mul__(self)

    # -- involutions and scalars --------------------------------------

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.a1, -self.a2, -self.a3, -self.a4)

    def norm_sq(self) -> float:
        return (self.a1 * self.a1 + self.a2 * self.a2
                + self.a3 * self.a3 + self.a4 * self.a4)

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def trace(self) -> float:
        return 2.0 * self.a1

    def imag_norm(self) -> float:
        return math.sqrt(self.a2 * self.a2 + self.a3 * self.a3
                         + self.a4 * self.a4)

    def inverse(self) -> "Quaternion":
        n = self.norm_sq()
        if n == 0.0:
            raise ZeroInverseError("inverse of zero quaternion")
        return Quaternion(self.a1 / n, -self.a2 / n, -self.a3 / n, -self.a4 / n)

    def similarity(self, w: "Quaternion") -> "Quaternion":
        """w * self * w^-1 (a representative move within the class)."""
        return w * self * w.inverse()


def quat(a1=0.0, a2=0.0, a3=0.0, a4=0.0) -> Quaternion:
    return Quaternion(a1, a2, a3, a4)


def from_complex(z) -> Quaternion:
    z = complex(z)
    return Quaternion(z.real, z.imag)


# Module-level operation names used throughout the package.

def mul(p, q) -> Quaternion:
    return Quaternion.coerce(p) * Quaternion.coerce(q)


def conj(q) -> Quaternion:
    return Quaternion.coerce(q).conjugate()


def trace(q) -> float:
    return Quaternion.coerce(q).trace()


def norm(q) -> float:
    return Quaternion.coerce(q).norm()


def inv(q) -> Quaternion:
    return Quaternion.coerce(q).inverse()


def proj_c(q) -> Quaternion:
    """Drop the j and k coordinates."""
    q = Quaternion.coerce(q)
    return Quaternion(q.a1, q.a2)


def proj_s(q) -> Quaternion:
    """Congruency projection: a1 + sqrt(a2^2+a3^2+a4^2) i.

    Always the non-negative square root, so the result is the unique
    complex representative of [q] with non-negative imaginary part.
    """
    q = Quaternion.coerce(q)
    return Quaternion(q.a1, q.imag_norm())


def congruent_distance(p, q) -> float:
    """Euclidean distance between the class representatives.

    Zero exactly when the two quaternions are congruent (same real part
    and same imaginary norm).
    """
    p = Quaternion.coerce(p)
    q = Quaternion.coerce(q)
    return math.hypot(p.a1 - q.a1, p.imag_norm() - q.imag_norm())


def distance(p, q) -> float:
    p = Quaternion.coerce(p)
    q = Quaternion.coerce(q)
    d1 = p.a1 - q.a1
    d2 = p.a2 - q.a2
    d3 = p.a3 - q.a3
    d4 = p.a4 - q.a4
    return math.sqrt(d1 * d1 + d2 * d2 + d3 * d3 + d4 * d4)


def isclose(p, q, tol=1e-12) -> bool:
    return distance(p, q) <= tol


# -- textual form ------------------------------------------------------
#
# "a1+a2i+a3j+a4k" with explicit signs, e.g. "-1.3+2.1i+0.17j-0.31k".
# Coordinates print via repr() so the form round-trips exactly.

_TERM_RE = re.compile(
    r"^(?P<coef>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[+-]?)(?P<unit>[ijk]?)$")


def format_quaternion(q) -> str:
    q = Quaternion.coerce(q)
    parts = [repr(q.a1)]
    for value, unit in ((q.a2, "i"), (q.a3, "j"), (q.a4, "k")):
        sign = "-" if (value < 0 or (value == 0 and math.copysign(1, value) < 0)) else "+"
        parts.append(f"{sign}{repr(abs(value))}{unit}")
    return "".join(parts)


def parse_quaternion(text: str) -> Quaternion:
    s = text.strip().replace(" ", "")
    if not s:
        raise ParseError("empty quaternion literal")
    # shield exponent signs, then split into signed terms
    shielded = (s.replace("e+", "e\x01").replace("e-", "e\x02")
                 .replace("E+", "E\x01").replace("E-", "E\x02"))
    raw_terms = re.findall(r"[+-]?[^+-]+", shielded)
    if "".join(raw_terms) != shielded:
        raise ParseError(f"malformed quaternion literal {text!r}")
    terms = [t.replace("\x01", "+").replace("\x02", "-") for t in raw_terms]
    coords = {"": 0.0, "i": 0.0, "j": 0.0, "k": 0.0}
    seen = set()
    for term in terms:
        m = _TERM_RE.match(term)
        if not m:
            raise ParseError(f"bad term {term!r} in {text!r}")
        coef, unit = m.group("coef"), m.group("unit")
        if coef in ("", "+", "-"):
            if not unit:
                raise ParseError(f"bad term {term!r} in {text!r}")
            value = -1.0 if coef == "-" else 1.0
        else:
            value = float(coef)
        if unit in seen:
            raise ParseError(f"duplicate {unit or 'real'} term in {text!r}")
        seen.add(unit)
        coords[unit] = value
    return Quaternion(coords[""], coords["i"], coords["j"], coords["k"])
