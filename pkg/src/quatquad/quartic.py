"""Real quartic solving and quaternion root recovery.

The companion quartic of a quaternion quadratic has real coefficients,
so its complex roots arrive in conjugate pairs. Each pair (or real
root) is lifted back to a quaternion root of the original quadratic by
a similarity transform, with a certified residual bound available when
the quartic root is only approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import NonConvergenceError, PreconditionViolatedError, QuatQuadError
from .qpoly import QuadraticPoly, RealQuartic
from .quat import Quaternion, congruent_distance, distance, from_complex

__all__ = [
    "QuarticRoots",
    "RecoveredRoot",
    "CertifiedPair",
    "RootCase",
    "solve_quartic",
    "cluster_roots",
    "recover_roots",
    "certify",
]

_SWEEP_CAP = 400
_POLISH_STEPS = 3


class RootCase(Enum):
    """How a quaternion root was obtained from a quartic root."""

    SIMILARITY = "similarity"
    CONJUGATE_SIMILARITY = "conjugate-similarity"
    SPHERICAL_FAMILY = "spherical-family"
    REAL_ROOT = "real-root"


@dataclass(frozen=True)
class QuarticRoots:
    """All four complex roots with per-root residuals |F(root)|."""

    roots: tuple
    residuals: tuple


@dataclass(frozen=True)
class RecoveredRoot:
    value: Quaternion
    source_theta: complex
    case: RootCase
    residual: float

    @property
    def spherical(self) -> bool:
        return self.case is RootCase.SPHERICAL_FAMILY


@dataclass(frozen=True)
class CertifiedPair:
    """Both complex candidates kept when neither similarity is safe.

    Each of theta and its conjugate is an approximate root of the
    quadratic itself, with the same certified bound.
    """

    theta: complex
    theta_conj: complex
    bound: float
    residual_theta: float
    residual_conj: float


def solve_quartic(F: RealQuartic) -> QuarticRoots:
    """All roots of a monic real quartic by simultaneous iteration.

    Durand-Kerner from the standard (0.4+0.9i)^m starting points, then
    a short Newton polish on simple roots. Nearly-real roots are snapped
    to the axis when the real point still meets the residual contract,
    and non-real roots are symmetrized into exact conjugate pairs.
    Output is sorted by (real, imag) and is fully deterministic.
    """
    scale = F.max_coeff()
    tol_resid = 1e-9 * (1.0 + scale)

    base = 0.4 + 0.9j
    z = [base ** (m + 1) for m in range(4)]
    for _ in range(_SWEEP_CAP):
        moved = 0.0
        for m in range(4):
            denom = 1.0 + 0.0j
            for l in range(4):
                if l != m:
                    denom *= z[m] - z[l]
            if denom == 0:
                z[m] += 1e-12
                continue
            delta = F(z[m]) / denom
            z[m] -= delta
            moved = max(moved, abs(delta) / (1.0 + abs(z[m])))
        if moved < 1e-14:
            break

    # snap to the real axis when justified by the residual contract
    for m in range(4):
        if abs(z[m].imag) <= 1e-6 * (1.0 + abs(z[m])):
            candidate = complex(z[m].real, 0.0)
            if abs(F(candidate)) <= max(abs(F(z[m])), tol_resid):
                z[m] = candidate

    for m in range(4):
        for _ in range(_POLISH_STEPS):
            fz = F(z[m])
            if abs(fz) <= 1e-15 * (1.0 + scale):
                break
            dfz = F.deriv(z[m])
            if abs(dfz) <= 1e-7 * (1.0 + scale):
                break  # repeated root; Newton would amplify noise
            step = fz / dfz
            z[m] -= step
            if z[m].imag == 0.0:
                z[m] = complex(z[m].real, 0.0)

    z = _symmetrize_pairs(z)
    z = _sharpen_clusters(F, z)
    z.sort(key=lambda w: (w.real, w.imag))
    residuals = tuple(abs(F(w)) for w in z)
    worst = max(residuals)
    if worst > tol_resid:
        raise NonConvergenceError(
            f"quartic residual {worst:g} exceeds {tol_resid:g}; "
            f"roots={z!r} coefficients={F.coeffs!r}")
    return QuarticRoots(tuple(z), residuals)


def _sharpen_clusters(F, z):
    """Collapse root clusters onto their multiplicity-aware Newton limit.

    Plain iteration resolves an m-fold root only to ~eps^(1/m); the
    modified step theta -= m*F/F' restores quadratic convergence, after
    which every cluster member is set to the common polished value.
    """
    out = list(z)
    clusters = []
    # radius must cover plain-iteration splitting of an m-fold root,
    # which reaches ~eps^(1/m) (about 1e-4 for a quadruple root)
    for idx, w in enumerate(out):
        for members in clusters:
            rep = out[members[0]]
            if abs(w - rep) <= 3e-4 * (1.0 + abs(rep)):
                members.append(idx)
                break
        else:
            clusters.append([idx])
    tol_resid = 1e-9 * (1.0 + F.max_coeff())
    for members in clusters:
        m = len(members)
        if m < 2:
            continue
        mean = sum(out[idx] for idx in members) / m
        spread = max(abs(out[idx] - mean) for idx in members)
        theta = _polish_multiple(F, mean, m)
        ok = (abs(F(theta)) <= max(abs(F(mean)), tol_resid)
              and abs(theta - mean) <= max(4.0 * spread,
                                           1e-12 * (1.0 + abs(mean))))
        if not ok:
            continue  # distinct roots that merely sit close; keep them
        if abs(theta.imag) <= 1e-12 * (1.0 + abs(theta)):
            theta = complex(theta.real, 0.0)
        for idx in members:
            out[idx] = theta
    # collapsing may have broken exact conjugacy; restore it
    return _symmetrize_pairs(out)


def _polish_multiple(F, theta, m):
    """Newton-refine an m-fold root as a simple root of F^(m-1).

    Evaluating F near a multiple root resolves it only to a noise
    radius ~eps^(1/m); the (m-1)-th derivative crosses zero simply
    there and supports full-precision Newton.
    """
    e0, e1, e2, e3, _e4 = F.coeffs
    if m >= 4:
        return complex(-e3 / 4.0, 0.0)
    if m == 3:
        def g(x):
            return 2.0 * e2 + (6.0 * e3 + 12.0 * x) * x

        def dg(x):
            return 6.0 * e3 + 24.0 * x
    else:
        def g(x):
            return e1 + (2.0 * e2 + (3.0 * e3 + 4.0 * x) * x) * x

        def dg(x):
            return 2.0 * e2 + (6.0 * e3 + 12.0 * x) * x
    for _ in range(8):
        d = dg(theta)
        if d == 0:
            break
        step = g(theta) / d
        theta -= step
        if abs(step) <= 1e-16 * (1.0 + abs(theta)):
            break
    return theta


def _symmetrize_pairs(z):
    """Force non-real roots into exact conjugate pairs."""
    real = [w for w in z if w.imag == 0.0]
    rest = sorted((w for w in z if w.imag != 0.0),
                  key=lambda w: (w.real, w.imag))
    out = list(real)
    while rest:
        w = rest.pop(0)
        if not rest:
            out.append(w)  # unpaired; residual check will judge it
            break
        partner = min(range(len(rest)),
                      key=lambda idx: abs(w.conjugate() - rest[idx]))
        p = rest.pop(partner)
        mean = (w + p.conjugate()) / 2.0
        out.append(mean)
        out.append(mean.conjugate())
    return out


def cluster_roots(roots) -> list:
    """Merge numerically coincident roots; [(value, multiplicity)].

    Cluster radius 1e-7*(1+|theta|), members averaged. Needed because
    a quadratic with a lone root doubles its conjugate pair.
    """
    groups = []
    for theta in sorted(roots, key=lambda w: (w.real, w.imag)):
        for g in groups:
            rep = sum(g, 0.0 + 0.0j) / len(g)
            if abs(theta - rep) <= 1e-7 * (1.0 + abs(rep)):
                g.append(theta)
                break
        else:
            groups.append([theta])
    out = []
    for g in groups:
        mean = sum(g, 0.0 + 0.0j) / len(g)
        if all(w.imag == 0.0 for w in g):
            mean = complex(mean.real, 0.0)
        out.append((mean, len(g)))
    return out


def _conjugate_classes(clusters):
    """Group clusters into congruence classes of the complex plane.

    Real clusters stand alone; non-real ones are matched with their
    mirror cluster and represented by the upper half-plane member.
    """
    real = [(theta, mult) for theta, mult in clusters if theta.imag == 0.0]
    upper = [(theta, mult) for theta, mult in clusters if theta.imag > 0.0]
    lower = [(theta, mult) for theta, mult in clusters if theta.imag < 0.0]
    classes = [(theta, mult, True) for theta, mult in real]
    used = [False] * len(lower)
    for theta, mult in upper:
        best, best_d = None, None
        for idx, (lo, _lm) in enumerate(lower):
            if used[idx]:
                continue
            d = abs(theta.conjugate() - lo)
            if best is None or d < best_d:
                best, best_d = idx, d
        if best is not None and best_d <= 1e-7 * (1.0 + abs(theta)):
            used[best] = True
            mult += lower[best][1]
        classes.append((theta, mult, False))
    for idx, (lo, lm) in enumerate(lower):
        if not used[idx]:
            classes.append((lo.conjugate(), lm, False))
    classes.sort(key=lambda item: (item[0].real, item[0].imag))
    return classes


def recover_roots(P: QuadraticPoly, roots: QuarticRoots, eps=None) -> list:
    """Lift companion-quartic roots to quaternion roots of P.

    For a real theta the similarity transform is the identity, so it is
    returned directly. For a non-real class the conjugate-polynomial
    value at theta (then at its conjugate) drives the similarity; if
    both values vanish the whole congruence class consists of roots and
    one representative is reported, flagged as a spherical family.
    """
    if eps is None:
        eps = 1e-9 * (1.0 + P.b.norm() + P.c.norm())
    conj = P.conj_poly()
    found = []
    for theta, _mult, is_real in _conjugate_classes(cluster_roots(roots.roots)):
        if is_real:
            value = Quaternion(theta.real)
            found.append(RecoveredRoot(
                value, theta, RootCase.REAL_ROOT, P.eval(value).norm()))
            continue
        w = conj.eval(from_complex(theta))
        if w.norm() > eps:
            value = w * from_complex(theta) * w.inverse()
            case = RootCase.SIMILARITY
        else:
            w2 = conj.eval(from_complex(theta.conjugate()))
            if w2.norm() > eps:
                value = w2 * from_complex(theta.conjugate()) * w2.inverse()
                case = RootCase.CONJUGATE_SIMILARITY
            else:
                value = from_complex(theta)
                case = RootCase.SPHERICAL_FAMILY
        found.append(RecoveredRoot(value, theta, case, P.eval(value).norm()))

    unique = []
    for cand in found:
        duplicate = False
        for kept in unique:
            if (congruent_distance(cand.value, kept.value) < 1e-6
                    and distance(cand.value, kept.value) < 1e-6):
                duplicate = True
                break
        if not duplicate:
            unique.append(cand)
    return unique


def certify(P: QuadraticPoly, theta: complex, eps: float):
    """Certified residual bound for a lift of an approximate quartic root.

    Requires eps in (0,1) and |F(theta)| <= eps^2 for the companion
    quartic F. Returns a RecoveredRoot with |P(value)| < eps when a
    similarity is available, otherwise a CertifiedPair where theta and
    its conjugate each satisfy |P(.)| < sqrt(2)*eps.
    """
    if not 0.0 < eps < 1.0:
        raise PreconditionViolatedError(f"eps must lie in (0,1), got {eps!r}")
    F = P.companion_quartic()
    fval = abs(F(theta))
    if fval > eps * eps:
        raise PreconditionViolatedError(
            f"|F(theta)| = {fval:g} exceeds eps^2 = {eps * eps:g}")
    conj = P.conj_poly()

    w = conj.eval(from_complex(theta))
    if w.norm() > eps:
        value = w * from_complex(theta) * w.inverse()
        residual = P.eval(value).norm()
        _check_bound(residual, eps)
        return RecoveredRoot(value, theta, RootCase.SIMILARITY, residual)

    theta_c = theta.conjugate()
    w2 = conj.eval(from_complex(theta_c))
    if w2.norm() > eps:
        value = w2 * from_complex(theta_c) * w2.inverse()
        residual = P.eval(value).norm()
        _check_bound(residual, eps)
        return RecoveredRoot(value, theta, RootCase.CONJUGATE_SIMILARITY,
                             residual)

    bound = math.sqrt(2.0) * eps
    r1 = P.eval(from_complex(theta)).norm()
    r2 = P.eval(from_complex(theta_c)).norm()
    _check_bound(r1, bound)
    _check_bound(r2, bound)
    return CertifiedPair(theta, theta_c, bound, r1, r2)


def _check_bound(residual, bound):
    # the bound is guaranteed in exact arithmetic; a breach means a bug here
    if residual >= bound * (1.0 + 1e-9):
        raise QuatQuadError(
            f"certified residual {residual:g} exceeds bound {bound:g}")
