"""Monic quaternion quadratics P(x) = x^2 + b x + c.

Evaluation uses the left-coefficient convention: coefficients multiply
powers of the argument from the left. The conjugate polynomial and the
real companion quartic F(x) = P(x) conj(P)(x) provide the bridge to
complex root finding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CoincidentClassesError, ConjugationAssemblyError
from .quat import Quaternion, congruent_distance

__all__ = [
    "QuadraticPoly",
    "RealQuartic",
    "from_roots",
    "alternative_b",
    "char_poly",
    "taylor_remainder",
]


@dataclass(frozen=True)
class RealQuartic:
    """Monic real quartic x^4 + e3 x^3 + e2 x^2 + e1 x + e0."""

    e0: float
    e1: float
    e2: float
    e3: float

    @property
    def coeffs(self):
        """Low-to-high coefficients including the leading 1."""
        return (self.e0, self.e1, self.e2, self.e3, 1.0)

    def __call__(self, z):
        # Horner; works for float and complex arguments alike
        return (((z + self.e3) * z + self.e2) * z + self.e1) * z + self.e0

    def deriv(self, z):
        return ((4.0 * z + 3.0 * self.e3) * z + 2.0 * self.e2) * z + self.e1

    def max_coeff(self) -> float:
        return max(abs(self.e0), abs(self.e1), abs(self.e2), abs(self.e3), 1.0)


class QuadraticPoly:
    """Monic quadratic with quaternion coefficients b and c."""

    __slots__ = ("b", "c")

    def __init__(self, b, c):
        object.__setattr__(self, "b", Quaternion.coerce(b))
        object.__setattr__(self, "c", Quaternion.coerce(c))

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticPoly is immutable")

    def __repr__(self):
        return f"QuadraticPoly(b={self.b!s}, c={self.c!s})"

    def eval(self, q) -> Quaternion:
        q = Quaternion.coerce(q)
        return q * q + self.b * q + self.c

    def deriv1(self, q) -> Quaternion:
        q = Quaternion.coerce(q)
        return 2.0 * q + self.b

    def deriv2(self) -> Quaternion:
        return Quaternion(2.0)

    def conj_poly(self) -> "QuadraticPoly":
        return QuadraticPoly(self.b.conjugate(), self.c.conjugate())

    def companion_quartic(self) -> RealQuartic:
        """Coefficients of F(x) = P(x) conj(P)(x).

        Each coefficient is assembled as a quaternion product sum that
        must cancel to a real number; a residue above tolerance raises.
        """
        b, c = self.b, self.c
        bbar, cbar = b.conjugate(), c.conjugate()
        assemblies = (
            c * cbar,                     # x^0
            b * cbar + c * bbar,          # x^1
            c + cbar + b * bbar,          # x^2
            b + bbar,                     # x^3
        )
        reals = []
        for coef in assemblies:
            residue = math.sqrt(coef.a2 ** 2 + coef.a3 ** 2 + coef.a4 ** 2)
            if residue > 1e-8 * (1.0 + abs(coef.a1)):
                raise ConjugationAssemblyError(
                    f"imaginary residue {residue:g} in companion coefficient")
            reals.append(coef.a1)
        e0, e1, e2, e3 = reals
        return RealQuartic(e0, e1, e2, e3)


def from_roots(alpha, beta) -> QuadraticPoly:
    """Quadratic with prescribed roots from two distinct classes.

    gamma = (beta-alpha) beta (beta-alpha)^-1 is congruent to beta, and
    P(x) = (x-gamma)(x-alpha) = x^2 - (gamma+alpha) x + gamma alpha
    vanishes at alpha exactly and at beta through gamma's class.
    Swapping the arguments changes b and c.
    """
    alpha = Quaternion.coerce(alpha)
    beta = Quaternion.coerce(beta)
    if congruent_distance(alpha, beta) <= 1e-9:
        raise CoincidentClassesError(
            "prescribed roots share a congruence class")
    diff = beta - alpha
    gamma = diff * beta * diff.inverse()
    return QuadraticPoly(-(gamma + alpha), gamma * alpha)


def alternative_b(alpha, beta) -> Quaternion:
    """Cross-check form b = -(beta^2 - alpha^2)(beta - alpha)^-1.

    Follows from subtracting the two root equations; must agree with
    from_roots. Kept separate so tests can compare the two routes.
    """
    alpha = Quaternion.coerce(alpha)
    beta = Quaternion.coerce(beta)
    return -(beta * beta - alpha * alpha) * (beta - alpha).inverse()


def char_poly(q) -> tuple:
    """(t, nu2) with x^2 - t x + nu2 the characteristic polynomial of q.

    Discriminant t^2 - 4 nu2 is negative exactly for non-real q; its
    complex roots are the class representative and its conjugate.
    """
    q = Quaternion.coerce(q)
    return (q.trace(), q.norm_sq())


def taylor_remainder(P: QuadraticPoly, xi, q) -> Quaternion:
    """Degree-2 Taylor sum of P at q evaluated toward xi.

    Computed term by term with left coefficients:
    P(q) + P'(q)(xi-q) + (xi-q)^2.  When xi is a root of P this equals
    the commutator q xi - xi q.
    """
    xi = Quaternion.coerce(xi)
    q = Quaternion.coerce(q)
    step = xi - q
    return P.eval(q) + P.deriv1(q) * step + step * step
