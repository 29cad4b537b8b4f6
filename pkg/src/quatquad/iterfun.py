"""Fixed-point iterations for quaternion quadratics.

Three maps: left Newton q - P'(q)^-1 P(q), right Newton
q - P(q) P'(q)^-1 (distinct because multiplication does not commute),
and Halley q - P'^-1 P - P'^-1 D^-1 P P'^-1 P with D = P' - P P'^-1.
Orbits stop on a fixed point, a detected short cycle, a singular step,
or an iteration cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import SingularDerivativeError, SingularHalleyDeltaError
from .qpoly import QuadraticPoly
from .quat import Quaternion, congruent_distance, distance

__all__ = [
    "IterationMethod",
    "Termination",
    "Orbit",
    "TerminalKind",
    "TerminalClass",
    "step",
    "orbit",
    "detect_cycle",
    "classify_terminal",
    "canonical_cycle_key",
]

SINGULAR_TOL = 1e-13

# Relative return test for cycle detection. An orbit that lands back on
# a genuine p-cycle returns to within a small fraction of the cycle's
# own diameter; a spiral converging to (or leaving) a fixed point keeps
# the p-step return comparable to the local diameter, so the ratio test
# stays quiet there at any scale. An absolute return tolerance cannot
# do both jobs at once.
CYCLE_RETURN_FACTOR = 0.1
CYCLE_PERIODS = (2, 3, 4, 5)


class IterationMethod(Enum):
    LEFT_NEWTON = "left_newton"
    RIGHT_NEWTON = "right_newton"
    HALLEY = "halley"


class Termination(Enum):
    FIXED_POINT = "fixed-point"
    CYCLE = "cycle"
    CAP = "cap"
    SINGULAR_STEP = "singular-step"


@dataclass(frozen=True)
class Orbit:
    seed: Quaternion
    iterates: tuple
    termination: Termination
    period: int
    steps: int


class TerminalKind(Enum):
    ROOT = "root"
    CYCLE = "cycle"
    NONE = "none"


@dataclass(frozen=True)
class TerminalClass:
    kind: TerminalKind
    root_index: int
    cycle_key: tuple
    period: int
    steps: int


def step(method: IterationMethod, P: QuadraticPoly, q) -> Quaternion:
    """One application of the chosen iteration map.

    Raises SingularDerivativeError when |P'(q)| is below the threshold,
    and SingularHalleyDeltaError for a vanishing Halley denominator.
    For complex-valued inputs left and right Newton coincide with the
    classical Newton map.
    """
    q = Quaternion.coerce(q)
    dq = P.deriv1(q)
    if dq.norm() <= SINGULAR_TOL:
        raise SingularDerivativeError(f"|P'(q)| vanishes at {q!s}")
    pq = P.eval(q)
    pinv = dq.inverse()
    if method is IterationMethod.LEFT_NEWTON:
        return q - pinv * pq
    if method is IterationMethod.RIGHT_NEWTON:
        return q - pq * pinv
    delta = dq - pq * pinv
    if delta.norm() <= SINGULAR_TOL:
        raise SingularHalleyDeltaError(f"Halley denominator vanishes at {q!s}")
    npart = pinv * pq
    return (q - npart) - pinv * (delta.inverse() * (pq * npart))


def detect_cycle(iterates) -> int:
    """Period of a freshly closed 2..5-cycle, or 0.

    Checks whether the newest iterate returned to the orbit p steps
    back, measured relative to the diameter of the last p points.
    """
    n = len(iterates)
    for p in CYCLE_PERIODS:
        if n < p + 1:
            return 0
        ret = distance(iterates[-1], iterates[-1 - p])
        pts = iterates[-p:]
        diam = 0.0
        for a in range(p):
            for b in range(a + 1, p):
                d = distance(pts[a], pts[b])
                if d > diam:
                    diam = d
        if diam > 0.0 and ret <= CYCLE_RETURN_FACTOR * diam:
            return p
    return 0


def orbit(method: IterationMethod, P: QuadraticPoly, q0,
          stop_tol: float = 0.01, cap: int = 70,
          cycle_check: bool = True) -> Orbit:
    """Iterate from q0 until a terminal condition; record which.

    The fixed-point criterion ||q_new - q_prev|| <= stop_tol is checked
    before cycle detection, so a 1-cycle is never misread as a longer
    one. A singular step terminates the orbit rather than raising.
    """
    q0 = Quaternion.coerce(q0)
    iterates = [q0]
    termination = Termination.CAP
    period = 0
    for _ in range(cap):
        try:
            q_new = step(method, P, iterates[-1])
        except (SingularDerivativeError, SingularHalleyDeltaError):
            termination = Termination.SINGULAR_STEP
            break
        prev = iterates[-1]
        iterates.append(q_new)
        if distance(q_new, prev) <= stop_tol:
            termination = Termination.FIXED_POINT
            break
        if cycle_check:
            period = detect_cycle(iterates)
            if period:
                termination = Termination.CYCLE
                break
    return Orbit(q0, tuple(iterates), termination, period,
                 len(iterates) - 1)


def canonical_cycle_key(points, digits: int = 1) -> tuple:
    """Order-free fingerprint of a cycle.

    Components are rounded (negative zero normalized away) and the
    lexicographically smallest rotation is chosen, so any phase of the
    same cycle produces the same key.
    """
    rounded = [tuple(round(c, digits) + 0.0 for c in
                     Quaternion.coerce(q).as_tuple())
               for q in points]
    return min(tuple(rounded[i:] + rounded[:i]) for i in range(len(rounded)))


def classify_terminal(P: QuadraticPoly, orb: Orbit, roots) -> TerminalClass:
    """Basin identity of a finished orbit, for coloring.

    Fixed points map to the nearest root by congruence distance (ties
    broken by Euclidean distance, then lower index); cycles map to their
    canonical key; cap and singular terminations share a no-convergence
    class.
    """
    if orb.termination is Termination.FIXED_POINT and roots:
        terminal = orb.iterates[-1]
        best = min(
            range(len(roots)),
            key=lambda i: (congruent_distance(terminal, roots[i]),
                           distance(terminal, roots[i]), i))
        return TerminalClass(TerminalKind.ROOT, best, None, 0, orb.steps)
    if orb.termination is Termination.CYCLE:
        key = canonical_cycle_key(orb.iterates[-orb.period:])
        return TerminalClass(TerminalKind.CYCLE, None, key, orb.period,
                             orb.steps)
    return TerminalClass(TerminalKind.NONE, None, None, 0, orb.steps)
