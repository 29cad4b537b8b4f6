"""Escape-time rendering of iteration basins.

A render job fixes a polynomial, an iteration method, and one of six
tracing modes: raw quaternion iteration from complex seeds, the two
projected variants (complex and congruency projection applied after
every step), raw iteration seeded on a locally invariant plane of a
root, classical complex Newton on the companion quartic, and the
hybrid quaternion/quartic scheme. Pixels are pure independent tasks;
row blocks may run in a process pool, but raster assembly is serial
and row-major so identical jobs give byte-identical images at any
worker count.
"""

from __future__ import annotations

import math
import zlib
from array import array
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum

from . import _kernels
from .errors import (QuatQuadError, SingularDerivativeError,
                     SingularHalleyDeltaError)
from .invplane import InvariantPlane, invariant_plane
from .iterfun import (IterationMethod, Orbit, Termination,
                      canonical_cycle_key, classify_terminal, detect_cycle,
                      step)
from .qpoly import QuadraticPoly
from .quartic import recover_roots, solve_quartic
from .quat import Quaternion, congruent_distance, distance, proj_c, proj_s

__all__ = [
    "Tracing",
    "HybridSchedule",
    "RenderJob",
    "PixelRecord",
    "CycleClass",
    "Raster",
    "PALETTES",
    "resolve_job",
    "seed_for_pixel",
    "composed_step",
    "trace_pixel",
    "hybrid_trace",
    "render",
    "encode_ppm",
    "encode_png",
    "metadata_text",
]


class Tracing(Enum):
    QUATERNION = "quaternion"
    COMPLEX_PROJECTION = "complex_projection"
    CONGRUENCY_PROJECTION = "congruency_projection"
    INVARIANT_PLANE = "invariant_plane"
    NEWTON_ON_F = "newton_on_f"
    HYBRID = "hybrid"


class HybridSchedule(Enum):
    LIFT_EVERY_STEP = "lift_every_step"
    TWO_P_ONE_F_NO_LIFT = "two_p_one_f_no_lift"


_TRACING_CODE = {
    Tracing.QUATERNION: 0,
    Tracing.COMPLEX_PROJECTION: 1,
    Tracing.CONGRUENCY_PROJECTION: 2,
    Tracing.INVARIANT_PLANE: 3,
    Tracing.NEWTON_ON_F: 4,
}

_METHOD_CODE = {
    IterationMethod.LEFT_NEWTON: 0,
    IterationMethod.RIGHT_NEWTON: 1,
    IterationMethod.HALLEY: 2,
}

NO_CONVERGENCE_CLASS = -1

_ROOT_COLORS = ((40, 90, 235), (40, 200, 90))
_CYCLE_COLORS = ((245, 140, 30), (160, 80, 220), (30, 200, 200),
                 (220, 60, 160))
_NO_CONVERGENCE_COLOR = (20, 20, 24)
_LIGHTNESS_DROP = 0.72

PALETTES = {
    "default": {
        "roots": _ROOT_COLORS,
        "cycles": _CYCLE_COLORS,
        "none": _NO_CONVERGENCE_COLOR,
    },
}


@dataclass(frozen=True)
class RenderJob:
    """Everything needed to reproduce one image.

    halfwidth None means "use the mode default": 2.3 for complex-seeded
    modes, the root-to-root distance for invariant-plane mode. The
    iteration method is ignored by the Newton-on-F and hybrid modes.
    """

    P: QuadraticPoly
    method: IterationMethod = IterationMethod.LEFT_NEWTON
    tracing: Tracing = Tracing.QUATERNION
    center: tuple = (0.0, 0.0)
    halfwidth: float = None
    resolution: int = 1024
    stop_tol: float = 0.01
    cap: int = 70
    cycle_check: bool = True
    plane_root: int = 0
    schedule: HybridSchedule = HybridSchedule.LIFT_EVERY_STEP
    eps_lift: float = 1e-6
    palette: str = "default"

    def __post_init__(self):
        if self.resolution < 1:
            raise ValueError("resolution must be at least 1")
        if self.halfwidth is not None and not self.halfwidth > 0.0:
            raise ValueError("window half-width must be positive")
        if self.palette not in PALETTES:
            raise ValueError(f"unknown palette {self.palette!r}")


@dataclass(frozen=True)
class PixelRecord:
    class_id: int
    steps: int
    terminal: tuple


@dataclass(frozen=True)
class CycleClass:
    class_id: int
    period: int
    points: tuple
    count: int

    def key(self):
        return canonical_cycle_key([Quaternion(*p) for p in self.points])


@dataclass
class Raster:
    width: int
    height: int
    class_ids: array
    steps: array
    terminals: array
    roots: tuple
    cycles: tuple

    def record(self, px: int, py: int) -> PixelRecord:
        i = py * self.width + px
        t = tuple(self.terminals[4 * i:4 * i + 4])
        return PixelRecord(self.class_ids[i], self.steps[i], t)

    def histogram(self) -> dict:
        counts = {}
        for cid in self.class_ids:
            counts[cid] = counts.get(cid, 0) + 1
        return counts


def _poly_roots(P: QuadraticPoly) -> tuple:
    found = recover_roots(P, solve_quartic(P.companion_quartic()))
    return tuple(r.value for r in found)


def resolve_job(job: RenderJob):
    """Fill mode-dependent defaults; returns (job, roots, plane)."""
    roots = _poly_roots(job.P)
    plane = None
    if job.tracing is Tracing.INVARIANT_PLANE:
        if not roots:
            raise QuatQuadError("no roots recovered; cannot build a plane")
        idx = job.plane_root
        if not 0 <= idx < len(roots):
            raise QuatQuadError(f"plane root index {idx} out of range")
        other = roots[(idx + 1) % len(roots)] if len(roots) > 1 else \
            roots[idx] + Quaternion(1.0)
        plane = invariant_plane(job.method, job.P, roots[idx], other)
        if job.halfwidth is None:
            job = replace(job, halfwidth=plane.window_halfwidth())
    elif job.halfwidth is None:
        job = replace(job, halfwidth=2.3)
    return job, roots, plane


def seed_for_pixel(job: RenderJob, px: int, py: int,
                   plane: InvariantPlane = None) -> Quaternion:
    """Initial iterate for a pixel; centers, y increasing upward."""
    if not (0 <= px < job.resolution and 0 <= py < job.resolution):
        raise ValueError("pixel out of range")
    if job.halfwidth is None or (job.tracing is Tracing.INVARIANT_PLANE
                                 and plane is None):
        job, _, plane = resolve_job(job)
    s = job.halfwidth
    h = (2.0 * s) / job.resolution
    cx, cy = job.center
    x = cx - s + (px + 0.5) * h
    y = cy + s - (py + 0.5) * h
    if job.tracing is Tracing.INVARIANT_PLANE:
        r = plane.root
        u = plane.u
        v = plane.v
        return Quaternion(r.a1 + x * u[0] + y * v[0],
                          r.a2 + x * u[1] + y * v[1],
                          r.a3 + x * u[2] + y * v[2],
                          r.a4 + x * u[3] + y * v[3])
    return Quaternion(x, y)


def _newton_on_f_step(F, z: complex) -> complex:
    fz = F(z)
    dz = F.deriv(z)
    if abs(dz) <= 1e-13:
        raise SingularDerivativeError("quartic derivative vanished")
    return z - fz / dz


def composed_step(method: IterationMethod, P: QuadraticPoly, q,
                  tracing: Tracing) -> Quaternion:
    """One application of the tracing-specific composed map."""
    q = Quaternion.coerce(q)
    if tracing is Tracing.NEWTON_ON_F:
        z = _newton_on_f_step(P.companion_quartic(),
                              complex(q.a1, q.a2))
        return Quaternion(z.real, z.imag)
    q_new = step(method, P, q)
    if tracing is Tracing.COMPLEX_PROJECTION:
        return proj_c(q_new)
    if tracing is Tracing.CONGRUENCY_PROJECTION:
        return proj_s(q_new)
    return q_new


def trace_pixel(job: RenderJob, seed, roots=None):
    """Reference single-seed tracer; returns (TerminalClass, Orbit).

    Runs the same state machine as the block kernels but on Quaternion
    values, then classifies against the polynomial's roots. The hybrid
    mode delegates to hybrid_trace.
    """
    seed = Quaternion.coerce(seed)
    if roots is None:
        roots = _poly_roots(job.P)
    if job.tracing is Tracing.HYBRID:
        rec = hybrid_trace(job.P, seed, job.schedule, job.eps_lift,
                           job.stop_tol, job.cap, job.cycle_check)
        orb = _record_to_orbit(seed, rec)
        return classify_terminal(job.P, orb, roots), orb
    iterates = [seed]
    termination = Termination.CAP
    period = 0
    for _ in range(job.cap):
        try:
            q_new = composed_step(job.method, job.P, iterates[-1],
                                  job.tracing)
        except (SingularDerivativeError, SingularHalleyDeltaError):
            termination = Termination.SINGULAR_STEP
            break
        prev = iterates[-1]
        iterates.append(q_new)
        if distance(q_new, prev) <= job.stop_tol:
            termination = Termination.FIXED_POINT
            break
        if job.cycle_check:
            period = detect_cycle(iterates)
            if period:
                termination = Termination.CYCLE
                break
    orb = Orbit(seed, tuple(iterates), termination, period,
                len(iterates) - 1)
    return classify_terminal(job.P, orb, roots), orb


_KIND_TO_TERMINATION = {
    0: Termination.FIXED_POINT,
    1: Termination.CYCLE,
    2: Termination.CAP,
    3: Termination.SINGULAR_STEP,
}


def _record_to_orbit(seed: Quaternion, rec) -> Orbit:
    kind, steps, t1, t2, t3, t4, period, cpts = rec
    terminal = Quaternion(t1, t2, t3, t4)
    if kind == 1 and cpts:
        tail = tuple(Quaternion(*cpts[4 * i:4 * i + 4])
                     for i in range(period))
    else:
        tail = (terminal,)
    its = (seed,) + tail if steps else (seed,)
    return Orbit(seed, its, _KIND_TO_TERMINATION[kind], period, steps)


def hybrid_trace(P: QuadraticPoly, seed, schedule: HybridSchedule,
                 eps: float = 1e-6, stop_tol: float = 0.01, cap: int = 70,
                 cycle_check: bool = True):
    """Mixed quaternion/quartic iteration from a complex seed.

    LIFT_EVERY_STEP: after each quaternion Newton step on P, project
    with the congruency projection; when both conjugate-polynomial
    values at the projected point are nonzero (above eps) lift the
    complex point back to a quaternion by similarity, otherwise stay
    complex. TWO_P_ONE_F_NO_LIFT: two Newton steps on P, project, then
    one complex Newton step on the companion quartic and remain on the
    quartic from then on; every micro-step counts toward the cap.

    Returns a raw record shaped like the kernel ones:
    (kind, steps, t1, t2, t3, t4, period, cycle_points).
    """
    q = Quaternion.coerce(seed)
    F = P.companion_quartic()
    conj = P.conj_poly()
    hist = [q]
    kind = 2
    steps = 0
    period = 0
    dropped = False
    phase = 0
    while steps < cap:
        try:
            if schedule is HybridSchedule.LIFT_EVERY_STEP:
                y = proj_s(step(IterationMethod.LEFT_NEWTON, P, q))
                wy = conj.eval(y)
                wc = conj.eval(y.conjugate())
                if wy.norm() > eps and wc.norm() > eps:
                    q_new = wy * y * wy.inverse()
                else:
                    q_new = y
            elif not dropped and phase < 2:
                q_new = step(IterationMethod.LEFT_NEWTON, P, q)
                phase += 1
            else:
                if not dropped:
                    q = proj_s(q)
                    dropped = True
                z = _newton_on_f_step(F, complex(q.a1, q.a2))
                q_new = Quaternion(z.real, z.imag)
        except (SingularDerivativeError, SingularHalleyDeltaError):
            kind = 3
            break
        prev = q
        q = q_new
        steps += 1
        hist.append(q)
        if len(hist) > 6:
            del hist[0]
        if distance(q, prev) <= stop_tol:
            kind = 0
            break
        if cycle_check:
            period = detect_cycle(hist)
            if period:
                kind = 1
                break
    cpts = ()
    if kind == 1:
        cpts = tuple(c for p in hist[-period:] for c in p.as_tuple())
    return (kind, steps, q.a1, q.a2, q.a3, q.a4, period, cpts)


def _trace_rows(payload):
    """Worker entry: trace rows [row0, row1) and return raw records."""
    (b, c, mcode, tcode, cx, cy, s, res, row0, row1, stop_tol, cap,
     cyc, proot, pu, pv, fcoefs, schedule_name, eps_lift) = payload
    if tcode == 5:
        P = QuadraticPoly(Quaternion(*b), Quaternion(*c))
        schedule = HybridSchedule(schedule_name)
        h = (2.0 * s) / res
        records = []
        for py in range(row0, row1):
            y = cy + s - (py + 0.5) * h
            for px in range(res):
                x = cx - s + (px + 0.5) * h
                records.append(hybrid_trace(P, Quaternion(x, y), schedule,
                                            eps_lift, stop_tol, cap,
                                            bool(cyc)))
        return records
    return _kernels.trace_block(b, c, mcode, tcode, cx, cy, s, res,
                                row0, row1, stop_tol, cap, cyc,
                                proot, pu, pv, fcoefs)


def _nearest_root(t1, t2, t3, t4, roots) -> int:
    q = Quaternion(t1, t2, t3, t4)
    return min(range(len(roots)),
               key=lambda i: (congruent_distance(q, roots[i]),
                              distance(q, roots[i]), i))


class _CycleBuckets:
    """Accumulates cycle pixels into classes.

    A record joins the first bucket with the same period whose centroid
    is within 1.0; its points are cyclically aligned to the bucket's
    running mean before being added, so the reported canonical points
    are phase-consistent means over all member orbits.
    """

    def __init__(self):
        self.buckets = []

    @staticmethod
    def _dist4(a, b):
        return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))

    def assign(self, period, cpts) -> int:
        pts = [tuple(cpts[4 * i:4 * i + 4]) for i in range(period)]
        cen = tuple(sum(p[k] for p in pts) / period for k in range(4))
        for bi, b in enumerate(self.buckets):
            if b["period"] != period:
                continue
            if self._dist4(cen, b["centroid"]) > 1.0:
                continue
            means = [tuple(x / b["count"] for x in s) for s in b["sums"]]
            best = min(range(period), key=lambda r: sum(
                self._dist4(pts[(i + r) % period], means[i])
                for i in range(period)))
            for i in range(period):
                src = pts[(i + best) % period]
                b["sums"][i] = tuple(x + y for x, y in zip(b["sums"][i], src))
            b["count"] += 1
            n = b["count"] * period
            b["centroid"] = tuple(
                sum(s[k] for s in b["sums"]) / n for k in range(4))
            return bi
        self.buckets.append({
            "period": period,
            "sums": [tuple(p) for p in pts],
            "count": 1,
            "centroid": cen,
        })
        return len(self.buckets) - 1

    def classes(self) -> tuple:
        out = []
        for bi, b in enumerate(self.buckets):
            pts = tuple(tuple(x / b["count"] for x in s) for s in b["sums"])
            out.append(CycleClass(2 + bi, b["period"], pts, b["count"]))
        return tuple(out)


def render(job: RenderJob, workers: int = 1) -> Raster:
    """Trace every pixel and classify; deterministic at any worker count."""
    job, roots, plane = resolve_job(job)
    res = job.resolution
    if plane is not None:
        proot = plane.root.as_tuple()
        pu, pv = plane.u, plane.v
    else:
        proot = (0.0, 0.0, 0.0, 0.0)
        pu = (1.0, 0.0, 0.0, 0.0)
        pv = (0.0, 1.0, 0.0, 0.0)
    F = job.P.companion_quartic()
    tcode = 5 if job.tracing is Tracing.HYBRID else _TRACING_CODE[job.tracing]
    base = (job.P.b.as_tuple(), job.P.c.as_tuple(),
            _METHOD_CODE[job.method], tcode, job.center[0], job.center[1],
            job.halfwidth, res)
    tail = (job.stop_tol, job.cap, 1 if job.cycle_check else 0,
            proot, pu, pv, (F.e0, F.e1, F.e2, F.e3),
            job.schedule.value, job.eps_lift)
    chunk = max(1, res // (4 * max(1, workers)))
    bounds = [(r0, min(r0 + chunk, res)) for r0 in range(0, res, chunk)]
    payloads = [base + (r0, r1) + tail for r0, r1 in bounds]
    if workers <= 1 or len(bounds) == 1:
        blocks = [_trace_rows(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_trace_rows, payloads))
    class_ids = array("i", bytes(4 * res * res))
    steps_arr = array("i", bytes(4 * res * res))
    terminals = array("d", bytes(8 * 4 * res * res))
    buckets = _CycleBuckets()
    idx = 0
    for block in blocks:
        for rec in block:
            kind, steps, t1, t2, t3, t4, period, cpts = rec
            if kind == 0 and roots:
                cid = _nearest_root(t1, t2, t3, t4, roots)
            elif kind == 1:
                cid = 2 + buckets.assign(period, cpts)
            else:
                cid = NO_CONVERGENCE_CLASS
            class_ids[idx] = cid
            steps_arr[idx] = steps
            terminals[4 * idx] = t1
            terminals[4 * idx + 1] = t2
            terminals[4 * idx + 2] = t3
            terminals[4 * idx + 3] = t4
            idx += 1
    if idx != res * res:
        raise QuatQuadError("raster assembly lost pixels")
    return Raster(res, res, class_ids, steps_arr, terminals, roots,
                  buckets.classes())


def _pixel_color(cid: int, steps: int, cap: int, palette: dict) -> tuple:
    if cid == NO_CONVERGENCE_CLASS:
        base = palette["none"]
    elif cid < 2:
        base = palette["roots"][cid % len(palette["roots"])]
    else:
        base = palette["cycles"][(cid - 2) % len(palette["cycles"])]
    scale = 1.0 - _LIGHTNESS_DROP * (steps / cap) if cap else 1.0
    return tuple(int(round(v * scale)) for v in base)


def _rgb_rows(raster: Raster, cap: int, palette_id: str):
    palette = PALETTES[palette_id]
    cache = {}
    for py in range(raster.height):
        row = bytearray()
        base = py * raster.width
        for px in range(raster.width):
            key = (raster.class_ids[base + px], raster.steps[base + px])
            rgb = cache.get(key)
            if rgb is None:
                rgb = _pixel_color(key[0], key[1], cap, palette)
                cache[key] = rgb
            row += bytes(rgb)
        yield bytes(row)


def encode_ppm(raster: Raster, cap: int = 70,
               palette_id: str = "default") -> bytes:
    """Binary portable pixmap, top row first."""
    head = f"P6\n{raster.width} {raster.height}\n255\n".encode("ascii")
    return head + b"".join(_rgb_rows(raster, cap, palette_id))


def _png_chunk(tag: bytes, data: bytes) -> bytes:
    crc = zlib.crc32(tag + data) & 0xFFFFFFFF
    return (len(data).to_bytes(4, "big") + tag + data
            + crc.to_bytes(4, "big"))


def encode_png(raster: Raster, cap: int = 70,
               palette_id: str = "default") -> bytes:
    """Lossless PNG (8-bit RGB, filter 0, fixed zlib level 6)."""
    ihdr = (raster.width.to_bytes(4, "big")
            + raster.height.to_bytes(4, "big")
            + bytes([8, 2, 0, 0, 0]))
    raw = b"".join(b"\x00" + row
                   for row in _rgb_rows(raster, cap, palette_id))
    return (b"\x89PNG\r\n\x1a\n"
            + _png_chunk(b"IHDR", ihdr)
            + _png_chunk(b"IDAT", zlib.compress(raw, 6))
            + _png_chunk(b"IEND", b""))


def metadata_text(job: RenderJob, raster: Raster, workers: int = 1) -> str:
    """Plain-text sidecar: job parameters, per-class fixed points found,
    cycle inventory, class histogram."""
    if job.halfwidth is None:
        job = resolve_job(job)[0]
    lines = ["quatquad-render 1"]
    lines.append(f"b = {job.P.b}")
    lines.append(f"c = {job.P.c}")
    lines.append(f"method = {job.method.value}")
    lines.append(f"tracing = {job.tracing.value}")
    if job.tracing is Tracing.HYBRID:
        lines.append(f"schedule = {job.schedule.value}")
    lines.append(f"center = {job.center[0]!r} {job.center[1]!r}")
    lines.append(f"halfwidth = {job.halfwidth!r}")
    lines.append(f"resolution = {job.resolution}")
    lines.append(f"stop_tol = {job.stop_tol!r}")
    lines.append(f"cap = {job.cap}")
    lines.append(f"cycle_check = {int(job.cycle_check)}")
    if job.tracing is Tracing.INVARIANT_PLANE:
        lines.append(f"plane_root = {job.plane_root}")
    lines.append(f"workers = {workers}")
    hist = raster.histogram()
    n = raster.width * raster.height
    sums = {}
    counts = {}
    for i, cid in enumerate(raster.class_ids):
        if cid < 0 or cid >= 2:
            continue
        acc = sums.setdefault(cid, [0.0, 0.0, 0.0, 0.0])
        for k in range(4):
            acc[k] += raster.terminals[4 * i + k]
        counts[cid] = counts.get(cid, 0) + 1
    lines.append("fixed_points:")
    for cid in sorted(counts):
        mean = Quaternion(*(x / counts[cid] for x in sums[cid]))
        lines.append(f"  root{cid} = {mean}  (root {raster.roots[cid]})")
    lines.append("cycles:")
    for cyc in raster.cycles:
        pts = "; ".join(str(Quaternion(*p)) for p in cyc.points)
        lines.append(f"  class{cyc.class_id} period={cyc.period} "
                     f"count={cyc.count} points: {pts}")
    lines.append("class_histogram:")
    for cid in sorted(hist):
        name = ("no_convergence" if cid == NO_CONVERGENCE_CLASS
                else f"root{cid}" if cid < 2 else f"cycle{cid}")
        lines.append(f"  {name} = {hist[cid]} ({100.0 * hist[cid] / n:.2f}%)")
    return "\n".join(lines) + "\n"
