"""Command-line front end.

Subcommands: solve (exact roots via the companion quartic), render
(one image per configured job), orbit (print a single orbit), plane
(invariant-plane report for a root), bench (timing table CSV).
Exit codes: 0 success, 2 configuration error, 3 numeric failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import os
import statistics
import sys
import time
from dataclasses import replace

from .config import Config, load_config
from .errors import ConfigError, QuatQuadError
from .invplane import invariant_plane
from .iterfun import IterationMethod, TerminalKind
from .quartic import recover_roots, solve_quartic
from .quat import (Quaternion, ParseError, format_quaternion,
                   parse_quaternion, proj_s)
from .render import (RenderJob, Tracing, encode_png, encode_ppm,
                     metadata_text, render, trace_pixel)

__all__ = ["main"]

_BENCH_ROWS = (
    ("quaternion", Tracing.QUATERNION, None),
    ("complex_projection", Tracing.COMPLEX_PROJECTION, None),
    ("congruency_projection", Tracing.CONGRUENCY_PROJECTION, None),
    ("invariant_plane_root0", Tracing.INVARIANT_PLANE, 0),
    ("invariant_plane_root1", Tracing.INVARIANT_PLANE, 1),
)
_BENCH_METHODS = (IterationMethod.LEFT_NEWTON, IterationMethod.RIGHT_NEWTON,
                  IterationMethod.HALLEY)


def _fmt(q: Quaternion, seed_format: str) -> str:
    if seed_format == "tuple":
        return "({!r}, {!r}, {!r}, {!r})".format(*q.as_tuple())
    return format_quaternion(q)


def cmd_solve(cfg: Config, args) -> int:
    P = cfg.polynomial()
    quartic = solve_quartic(P.companion_quartic())
    roots = recover_roots(P, quartic)
    print(f"P(x) = x^2 + b x + c")
    print(f"b = {_fmt(P.b, args.seed_format)}")
    print(f"c = {_fmt(P.c, args.seed_format)}")
    print(f"companion quartic roots: "
          + ", ".join(f"{z:.12g}" for z in quartic.roots))
    print(f"recovered {len(roots)} root(s):")
    for i, r in enumerate(roots):
        rep = proj_s(r.value)
        note = " (one representative of a spherical family)" if r.spherical \
            else ""
        print(f"  [{i}] {_fmt(r.value, args.seed_format)}")
        print(f"      case: {r.case.value}{note}")
        print(f"      from quartic root {r.source_theta:.12g}")
        print(f"      residual |P(root)| = {r.residual:.3e}")
        print(f"      congruence representative: "
              f"{_fmt(rep, args.seed_format)}")
    return 0


def _job_filename(job: RenderJob, name: str) -> str:
    parts = [name, job.tracing.value]
    if job.tracing is Tracing.HYBRID:
        parts.append(job.schedule.value)
    else:
        parts.append(job.method.value)
    if job.tracing is Tracing.INVARIANT_PLANE:
        parts.append(f"root{job.plane_root}")
    parts.append(f"r{job.resolution}")
    return "_".join(parts)


def cmd_render(cfg: Config, args) -> int:
    if not cfg.jobs:
        raise ConfigError("no [job ...] sections to render")
    out_dir = args.out or cfg.output.directory
    os.makedirs(out_dir, exist_ok=True)
    P = cfg.polynomial()
    for spec in cfg.jobs:
        job = spec.to_render_job(P)
        if args.resolution:
            job = replace(job, resolution=args.resolution)
        raster = render(job, workers=args.workers)
        stem = os.path.join(out_dir, _job_filename(job, spec.name))
        with open(stem + ".ppm", "wb") as fh:
            fh.write(encode_ppm(raster, job.cap, job.palette))
        written = [stem + ".ppm"]
        if cfg.output.png:
            with open(stem + ".png", "wb") as fh:
                fh.write(encode_png(raster, job.cap, job.palette))
            written.append(stem + ".png")
        if cfg.output.metadata:
            with open(stem + ".txt", "w", encoding="utf-8") as fh:
                fh.write(metadata_text(job, raster, args.workers))
            written.append(stem + ".txt")
        print(f"{spec.name}: " + ", ".join(written))
    return 0


def cmd_orbit(cfg: Config, args) -> int:
    try:
        seed = parse_quaternion(args.seed)
    except ParseError as exc:
        raise ConfigError(f"bad --seed: {exc}")
    P = cfg.polynomial()
    job = RenderJob(P, IterationMethod(args.method), Tracing(args.tracing),
                    resolution=2, stop_tol=args.stop_tol, cap=args.cap)
    cls, orb = trace_pixel(job, seed)
    print(f"seed: {_fmt(seed, args.seed_format)}")
    for i, q in enumerate(orb.iterates):
        print(f"  {i:3d}: {_fmt(q, args.seed_format)}")
    print(f"termination: {orb.termination.value} after {orb.steps} step(s)")
    if cls.kind is TerminalKind.ROOT:
        print(f"class: root {cls.root_index}")
    elif cls.kind is TerminalKind.CYCLE:
        print(f"class: cycle of period {cls.period}, key {cls.cycle_key}")
    else:
        print("class: no convergence")
    return 0


def cmd_plane(cfg: Config, args) -> int:
    P = cfg.polynomial()
    roots = [r.value for r in recover_roots(P, solve_quartic(
        P.companion_quartic()))]
    if len(roots) < 2:
        raise QuatQuadError(
            "invariant-plane report needs two distinct root classes")
    idx = args.root
    if not 0 <= idx < len(roots):
        raise ConfigError(f"--root {idx} out of range")
    other = roots[(idx + 1) % len(roots)]
    plane = invariant_plane(IterationMethod(args.method), P, roots[idx],
                            other)
    print(f"method: {args.method}")
    print(f"root[{idx}] = {_fmt(plane.root, args.seed_format)}")
    print(f"other root = {_fmt(other, args.seed_format)}")
    print(f"eigenvalues: {plane.eigvals[0]:.6f}, {plane.eigvals[1]:.6f}")
    print(f"u = {_fmt(Quaternion(*plane.u), args.seed_format)}")
    print(f"v = {_fmt(Quaternion(*plane.v), args.seed_format)}")
    print(f"window halfwidth = {plane.window_halfwidth():.6f}")
    return 0


def cmd_bench(cfg: Config, args) -> int:
    reps = cfg.bench.repetitions
    if reps < 3:
        raise ConfigError("bench repetitions must be at least 3")
    res = args.resolution or cfg.bench.resolution
    workers = args.workers if args.workers is not None else cfg.bench.workers
    P = cfg.polynomial()

    def cell(tracing, method, plane_root):
        job = RenderJob(P, method, tracing, resolution=res,
                        plane_root=plane_root or 0)
        times = []
        for _ in range(reps):
            t0 = time.perf_counter()
            render(job, workers=workers)
            times.append(time.perf_counter() - t0)
        return statistics.median(times)

    table = {}
    for label, tracing, plane_root in _BENCH_ROWS:
        table[label] = [cell(tracing, m, plane_root) for m in _BENCH_METHODS]
    tf = cell(Tracing.NEWTON_ON_F, IterationMethod.LEFT_NEWTON, None)
    table["newton_on_f"] = [tf, tf, tf]

    lines = [f"# workers={workers}", "method,left_newton,right_newton,halley"]
    for label, _, _ in _BENCH_ROWS:
        cells = ",".join(f"{t:.3f}" for t in table[label])
        lines.append(f"{label},{cells}")
    lines.append("newton_on_f," + ",".join(f"{t:.3f}"
                                           for t in table["newton_on_f"]))
    csv = "\n".join(lines) + "\n"
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "bench.csv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(csv)
        print(f"wrote {path}")
    sys.stdout.write(csv)

    # soft ordering checks: warn, never fail
    ln, rn = 0, 1
    a = table["invariant_plane_root0"]
    b = table["invariant_plane_root1"]
    if not ((a[ln] - a[rn]) * (b[ln] - b[rn]) < 0):
        print("warning: left/right Newton ordering did not swap between "
              "the two plane rows", file=sys.stderr)
    for mi, meth in enumerate(_BENCH_METHODS):
        for label in ("complex_projection", "congruency_projection"):
            if table[label][mi] >= table["quaternion"][mi]:
                print(f"warning: {label} not faster than quaternion "
                      f"tracing for {meth.value}", file=sys.stderr)
    slowest_nf = max(table["newton_on_f"])
    others = [t for label in table if label != "newton_on_f"
              for t in table[label]]
    if others and slowest_nf >= min(others):
        print("warning: newton_on_f is not the fastest row",
              file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="quatquad",
        description="Quaternion quadratic solver and basin renderer")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="config file path")
        p.add_argument("--seed-format", choices=("quat", "tuple"),
                       default="quat", help="quaternion printing style")

    p = sub.add_parser("solve", help="recover exact roots")
    common(p)

    p = sub.add_parser("render", help="render configured jobs to images")
    common(p)
    p.add_argument("--out", help="output directory (overrides config)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--resolution", type=int,
                   help="override resolution for every job")

    p = sub.add_parser("orbit", help="print one orbit")
    common(p)
    p.add_argument("--seed", required=True, help="initial iterate literal")
    p.add_argument("--method", default="left_newton",
                   choices=[m.value for m in IterationMethod])
    p.add_argument("--tracing", default="quaternion",
                   choices=[t.value for t in Tracing])
    p.add_argument("--stop-tol", type=float, default=0.01)
    p.add_argument("--cap", type=int, default=70)

    p = sub.add_parser("plane", help="invariant-plane report at a root")
    common(p)
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--method", default="halley",
                   choices=[m.value for m in IterationMethod])

    p = sub.add_parser("bench", help="timing table across tracing modes")
    common(p)
    p.add_argument("--out", help="directory for bench.csv")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--resolution", type=int, default=None)
    return ap


_DISPATCH = {
    "solve": cmd_solve,
    "render": cmd_render,
    "orbit": cmd_orbit,
    "plane": cmd_plane,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        return _DISPATCH[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except QuatQuadError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
