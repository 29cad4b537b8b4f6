"""Compare the compiled tracing kernel against the Python fallback.

Runs the same pixel-block tracing call through both backends over a
method x tracing matrix and prints median wall times plus the speedup.
The two backends compute bit-identical records; this script also
verifies that on every cell it times.

Usage: python benchmarks/backend_bench.py [--resolution N] [--repetitions R]
"""

import argparse
import statistics
import sys
import time

from quatquad import (
    IterationMethod,
    Quaternion,
    Tracing,
    from_roots,
    invariant_plane,
)
from quatquad._kernels import _fallback

try:
    from quatquad._kernels import _core
except ImportError:
    _core = None

ALPHA = Quaternion(-1.3, 2.1, 0.17, -0.31)
BETA = Quaternion(1.4, 0.7, -0.23, 0.28)

METHOD_CODE = {IterationMethod.LEFT_NEWTON: 0,
               IterationMethod.RIGHT_NEWTON: 1,
               IterationMethod.HALLEY: 2}
TRACING_CODE = {Tracing.QUATERNION: 0,
                Tracing.COMPLEX_PROJECTION: 1,
                Tracing.CONGRUENCY_PROJECTION: 2,
                Tracing.INVARIANT_PLANE: 3,
                Tracing.NEWTON_ON_F: 4}


def block_args(P, method, tracing, res, plane):
    if tracing is Tracing.INVARIANT_PLANE:
        proot, pu, pv = plane.root.as_tuple(), plane.u, plane.v
        s = plane.window_halfwidth()
    else:
        proot = (0.0, 0.0, 0.0, 0.0)
        pu = (1.0, 0.0, 0.0, 0.0)
        pv = (0.0, 1.0, 0.0, 0.0)
        s = 2.3
    F = P.companion_quartic()
    return (P.b.as_tuple(), P.c.as_tuple(), METHOD_CODE[method],
            TRACING_CODE[tracing], 0.0, 0.0, s, res, 0, res,
            0.01, 70, 1, proot, pu, pv, (F.e0, F.e1, F.e2, F.e3))


def median_time(fn, args, reps):
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--resolution", type=int, default=60)
    ap.add_argument("--repetitions", type=int, default=3)
    args = ap.parse_args(argv)

    if _core is None:
        print("compiled kernel not available; nothing to compare",
              file=sys.stderr)
        return 1

    P = from_roots(ALPHA, BETA)
    plane = invariant_plane(IterationMethod.HALLEY, P, ALPHA, BETA)
    res = args.resolution
    reps = args.repetitions

    header = (f"{'tracing':<24}{'method':<14}{'python_s':>10}"
              f"{'compiled_s':>12}{'speedup':>9}")
    print(f"# backend comparison, {res}x{res} block, median of {reps}")
    print(header)
    print("-" * len(header))
    ratios = []
    for tracing in TRACING_CODE:
        for method in METHOD_CODE:
            cell = block_args(P, method, tracing, res, plane)
            if _fallback.trace_block(*cell) != _core.trace_block(*cell):
                print("backend mismatch on "
                      f"{tracing.value}/{method.value}", file=sys.stderr)
                return 1
            t_py = median_time(_fallback.trace_block, cell, reps)
            t_c = median_time(_core.trace_block, cell, reps)
            ratio = t_py / t_c if t_c > 0 else float("inf")
            ratios.append(ratio)
            print(f"{tracing.value:<24}{method.value:<14}{t_py:>10.3f}"
                  f"{t_c:>12.3f}{ratio:>8.1f}x")
            if tracing is Tracing.NEWTON_ON_F:
                break  # method code is ignored by this tracing mode
    print("-" * len(header))
    print(f"median speedup {statistics.median(ratios):.1f}x over "
          f"{len(ratios)} cells")
    return 0


if __name__ == "__main__":
    sys.exit(main())
