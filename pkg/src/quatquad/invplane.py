"""Jacobian structure of the iteration maps at a root.

The 4x4 Jacobian of an iteration map, taken at a root by central
differences, drops rank: two eigenvalues (numerically) vanish. The two
remaining eigendirections span a plane that the map preserves to first
order; rendering on that plane is what exposes the interesting
dynamics. The eigensolver forms the characteristic polynomial and
reuses the quartic machinery, then extracts null spaces by Gaussian
elimination with partial pivoting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (PreconditionViolatedError, RankAmbiguousError,
                     SingularDerivativeError, SingularHalleyDeltaError,
                     SingularStencilError)
from .iterfun import IterationMethod, step
from .qpoly import QuadraticPoly, RealQuartic
from .quartic import solve_quartic
from .quat import Quaternion, distance

__all__ = [
    "Jacobian4",
    "EigenPair",
    "EigenDecomposition",
    "InvariantPlane",
    "jacobian",
    "eigen4",
    "invariant_plane",
    "principal_angles",
]


@dataclass(frozen=True)
class Jacobian4:
    """Row-major 4x4 matrix of partials d f_i / d q_j."""

    entries: tuple
    base_point: Quaternion
    method: IterationMethod

    def frobenius(self) -> float:
        return math.sqrt(sum(x * x for row in self.entries for x in row))


@dataclass(frozen=True)
class EigenPair:
    value: complex
    vector: tuple
    residual: float


@dataclass(frozen=True)
class EigenDecomposition:
    pairs: tuple
    defective: bool


@dataclass(frozen=True)
class InvariantPlane:
    root: Quaternion
    u: tuple
    v: tuple
    eigvals: tuple
    orientation_anchor: Quaternion

    def window_halfwidth(self) -> float:
        """Default render half-width: distance to the other root."""
        return distance(self.orientation_anchor, self.root)


def jacobian(method: IterationMethod, P: QuadraticPoly, q,
             h_fd: float = 1e-5) -> Jacobian4:
    """Central-difference Jacobian of one iteration step at q."""
    q = Quaternion.coerce(q)
    cols = []
    for axis in range(4):
        offs = [0.0, 0.0, 0.0, 0.0]
        offs[axis] = h_fd
        e = Quaternion(*offs)
        try:
            fp = step(method, P, q + e)
            fm = step(method, P, q - e)
        except (SingularDerivativeError, SingularHalleyDeltaError) as exc:
            raise SingularStencilError(
                f"singular step on stencil around {q!s}") from exc
        d = fp - fm
        cols.append((d.a1 / (2.0 * h_fd), d.a2 / (2.0 * h_fd),
                     d.a3 / (2.0 * h_fd), d.a4 / (2.0 * h_fd)))
    rows = tuple(tuple(cols[j][i] for j in range(4)) for i in range(4))
    return Jacobian4(rows, q, method)


def _char_poly(a) -> RealQuartic:
    """Characteristic polynomial of a real 4x4 by trace recursion."""
    def matmul(x, y):
        return [[sum(x[i][k] * y[k][j] for k in range(4)) for j in range(4)]
                for i in range(4)]

    def add_diag(x, t):
        return [[x[i][j] + (t if i == j else 0.0) for j in range(4)]
                for i in range(4)]

    def tr(x):
        return x[0][0] + x[1][1] + x[2][2] + x[3][3]

    m = [list(row) for row in a]
    c3 = -tr(m)
    m = matmul(a, add_diag(m, c3))
    c2 = -tr(m) / 2.0
    m = matmul(a, add_diag(m, c2))
    c1 = -tr(m) / 3.0
    m = matmul(a, add_diag(m, c1))
    c0 = -tr(m) / 4.0
    return RealQuartic(c0, c1, c2, c3)


def _null_vectors(a, lam, count, scale):
    """Null-space basis of (a - lam I) by elimination, best effort.

    Returns (vectors, clean): up to `count` unit vectors, and whether
    the echelon form showed exactly `count` negligible pivots.
    """
    m = [[complex(a[i][j]) - (lam if i == j else 0.0) for j in range(4)]
         for i in range(4)]
    tol = 1e-6 * (scale + abs(lam))
    perm = list(range(4))  # column order after free-column deferral
    pivots = []            # (row, col) of accepted pivots
    row = 0
    free_cols = []
    for col in range(4):
        best = max(range(row, 4), key=lambda r: abs(m[r][col]))
        if abs(m[best][col]) <= tol:
            free_cols.append(col)
            continue
        m[row], m[best] = m[best], m[row]
        piv = m[row][col]
        for r in range(row + 1, 4):
            f = m[r][col] / piv
            if f != 0:
                for cc in range(col, 4):
                    m[r][cc] -= f * m[row][cc]
        pivots.append((row, col))
        row += 1
    if not free_cols:
        # numerically full rank; treat the weakest trailing pivot as free
        weakest = min(pivots, key=lambda rc: abs(m[rc[0]][rc[1]]))
        free_cols = [weakest[1]]
        pivots = [rc for rc in pivots if rc != weakest]
        pivots = [rc for rc in pivots if rc[1] != weakest[1]]
    clean = len(free_cols) == count
    vectors = []
    for free in free_cols[:count]:
        vec = [0j, 0j, 0j, 0j]
        vec[free] = 1 + 0j
        for prow, pcol in reversed(pivots):
            if pcol == free:
                continue
            sgot = sum(m[prow][cc] * vec[cc] for cc in range(4) if cc != pcol)
            vec[pcol] = -sgot / m[prow][pcol]
        nrm = math.sqrt(sum(abs(x) * abs(x) for x in vec))
        if nrm == 0.0:
            continue
        vectors.append(tuple(x / nrm for x in vec))
    while vectors and len(vectors) < count:
        vectors.append(vectors[-1])
        clean = False
    return vectors, clean


def _phase_normalize(vec):
    """Rotate a complex vector so its largest component is real positive."""
    kmax = max(range(4), key=lambda k: abs(vec[k]))
    z = vec[kmax]
    if z == 0:
        return vec
    ph = z / abs(z)
    return tuple(x / ph for x in vec)


def eigen4(J: Jacobian4) -> EigenDecomposition:
    """All eigenpairs of the Jacobian, with per-pair residuals."""
    a = J.entries
    roots = solve_quartic(_char_poly(a)).roots
    scale = J.frobenius()
    groups = []
    for lam in roots:
        for g in groups:
            if abs(lam - g[0]) <= 1e-9 * (1.0 + abs(lam)):
                g[1] += 1
                break
        else:
            groups.append([lam, 1])
    pairs = []
    defective = False
    for lam, count in groups:
        vectors, clean = _null_vectors(a, lam, count, scale)
        if not clean:
            defective = True
        if not vectors:
            vectors = [(1 + 0j, 0j, 0j, 0j)] * count
            defective = True
        for vec in vectors:
            vec = _phase_normalize(vec)
            res = 0.0
            for i in range(4):
                acc = sum(a[i][j] * vec[j] for j in range(4)) - lam * vec[i]
                res += abs(acc) * abs(acc)
            pairs.append(EigenPair(lam, vec, math.sqrt(res)))
    pairs.sort(key=lambda p: (p.value.real, p.value.imag))
    return EigenDecomposition(tuple(pairs), defective)


def _dot4(x, y):
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3]


def _unit4(x):
    n = math.sqrt(_dot4(x, x))
    if n == 0.0:
        raise RankAmbiguousError("degenerate plane basis vector")
    return tuple(c / n for c in x)


def invariant_plane(method: IterationMethod, P: QuadraticPoly, root,
                    other_root) -> InvariantPlane:
    """Oriented locally invariant plane of the iteration map at a root.

    Basis: the two eigendirections of largest eigenvalue magnitude
    (real and imaginary parts when they form a complex pair),
    orthonormalized, then rotated in-plane so u points toward the
    projection of the other root and v completes a right-handed frame.
    """
    root = Quaternion.coerce(root)
    other = Quaternion.coerce(other_root)
    moved = step(method, P, root)
    if distance(moved, root) > 1e-6:
        raise PreconditionViolatedError(
            f"not a fixed point: step moves root by {distance(moved, root):g}")
    eig = eigen4(jacobian(method, P, root))
    by_mag = sorted(eig.pairs, key=lambda p: -abs(p.value))
    gap = abs(abs(by_mag[1].value) - abs(by_mag[2].value))
    if gap < 1e-3:
        raise RankAmbiguousError(
            f"eigenvalue magnitude gap {gap:g} below 1e-3; "
            "cannot separate the plane modes")
    lead, second = by_mag[0], by_mag[1]
    conj_pair = (abs(lead.value.imag) > 1e-9
                 and abs(lead.value - second.value.conjugate())
                 <= 1e-6 * (1.0 + abs(lead.value)))
    if conj_pair:
        vec = lead.vector if lead.value.imag > 0 else second.vector
        vec = _phase_normalize(vec)
        raw_u = tuple(x.real for x in vec)
        raw_v = tuple(x.imag for x in vec)
    else:
        raw_u = tuple(x.real for x in _phase_normalize(lead.vector))
        raw_v = tuple(x.real for x in _phase_normalize(second.vector))
    u1 = _unit4(raw_u)
    proj = _dot4(raw_v, u1)
    v_orth = tuple(raw_v[i] - proj * u1[i] for i in range(4))
    v1 = _unit4(v_orth)
    d = (other - root).as_tuple()
    px = _dot4(d, u1)
    py = _dot4(d, v1)
    sp = math.sqrt(px * px + py * py)
    if sp <= 1e-12:
        raise RankAmbiguousError(
            "orientation anchor projects to zero; cannot orient the plane")
    cu = px / sp
    su = py / sp
    u = tuple(cu * u1[i] + su * v1[i] for i in range(4))
    v = tuple(-su * u1[i] + cu * v1[i] for i in range(4))
    return InvariantPlane(root, u, v, (lead.value, second.value), other)


def principal_angles(p1: InvariantPlane, p2: InvariantPlane) -> tuple:
    """Angles between two planes via the 2x2 inner-product matrix."""
    m11 = _dot4(p1.u, p2.u)
    m12 = _dot4(p1.u, p2.v)
    m21 = _dot4(p1.v, p2.u)
    m22 = _dot4(p1.v, p2.v)
    t = m11 * m11 + m12 * m12 + m21 * m21 + m22 * m22
    det = m11 * m22 - m12 * m21
    disc = max(t * t - 4.0 * det * det, 0.0)
    s1 = math.sqrt(max((t + math.sqrt(disc)) / 2.0, 0.0))
    s2 = math.sqrt(max((t - math.sqrt(disc)) / 2.0, 0.0))
    clamp = lambda x: min(1.0, max(-1.0, x))
    return (math.acos(clamp(s1)), math.acos(clamp(s2)))
