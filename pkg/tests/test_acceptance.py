"""End-to-end acceptance checks.

Each test prints one verdict line with its measurements; the lines are
replayed in the terminal summary. Numbers quoted as "published" come
from the reference tables for the worked example with roots ALPHA and
BETA; see the decisions ledger for the two places where the reference
values themselves are inconsistent and how they were resolved.
"""

import math
import random
import statistics
import time

import pytest

from quatquad import (
    IterationMethod,
    QuadraticPoly,
    Quaternion,
    RenderJob,
    Tracing,
    congruent_distance,
    distance,
    eigen4,
    encode_png,
    encode_ppm,
    from_roots,
    composed_step,
    invariant_plane,
    jacobian,
    principal_angles,
    recover_roots,
    render,
    seed_for_pixel,
    solve_quartic,
    step,
    taylor_remainder,
)
from quatquad.cli import main
from conftest import ALPHA, BETA, random_root_pair, record_acceptance

LN = IterationMethod.LEFT_NEWTON
RN = IterationMethod.RIGHT_NEWTON
HAL = IterationMethod.HALLEY

# Published coefficients for the worked example. The j-coordinate of c
# is printed as -0.71178 in the reference, but both construction routes
# and the reference's own quartic linear coefficient (-10.71862) agree
# on +0.71178, so the sign below is the corrected one.
PUBLISHED_B = Quaternion(-0.1, -2.6664, -0.5611, -0.0741)
PUBLISHED_C = Quaternion(-2.9569, 2.0171, 0.71178, -1.658)

# Published complex fixed points of the two projected iterations,
# keyed by (tracing, method): one point near each root.
PUBLISHED_FIXED_POINTS = {
    (Tracing.COMPLEX_PROJECTION, LN): (
        complex(-1.17679, 2.09022), complex(1.33468, 0.70161)),
    (Tracing.COMPLEX_PROJECTION, RN): (
        complex(-1.17442, 2.01315), complex(1.3359, 0.522777)),
    (Tracing.COMPLEX_PROJECTION, HAL): (
        complex(-1.23475, 2.05925), complex(1.39796, 0.731103)),
    (Tracing.CONGRUENCY_PROJECTION, LN): (
        complex(-1.17651, 2.13343), complex(1.31599, 0.863941)),
    (Tracing.CONGRUENCY_PROJECTION, RN): (
        complex(-1.17642, 2.06473), complex(1.33545, 0.687986)),
    (Tracing.CONGRUENCY_PROJECTION, HAL): (
        complex(-1.23252, 2.10451), complex(1.39705, 0.88163)),
}

# Published 3-cycle for Halley in the plane at ALPHA, as 4-vectors.
PUBLISHED_TRIPLE = (
    (-0.9, 1.3, -0.55, 0.6),
    (-1.0, 1.0, 1.5, 0.4),
    (-1.4, 0.5, -0.4, -0.9),
)


def test_criterion_01_prescribed_roots_match_published_coefficients():
    times = []
    for _ in range(11):
        t0 = time.perf_counter()
        P = from_roots(ALPHA, BETA)
        times.append(time.perf_counter() - t0)
    ms = statistics.median(times) * 1e3
    db = max(abs(x - y) for x, y in zip(P.b.as_tuple(), PUBLISHED_B.as_tuple()))
    dc = max(abs(x - y) for x, y in zip(P.c.as_tuple(), PUBLISHED_C.as_tuple()))
    ok = db < 1e-3 and dc < 1e-3 and ms < 1.0
    record_acceptance(
        f"criterion 01 {'pass' if ok else 'FAIL'}: coefficient deviation "
        f"b={db:.2e} c={dc:.2e} (tol 1e-3), median build {ms:.3f} ms (< 1 ms)")
    assert db < 1e-3 and dc < 1e-3
    assert ms < 1.0


def test_criterion_02_round_trip_prescribed_roots():
    rng = random.Random(60193)
    worst_res = worst_pair = 0.0
    t0 = time.perf_counter()
    for _ in range(200):
        a, b = random_root_pair(rng)
        P = from_roots(a, b)
        recovered = recover_roots(P, solve_quartic(P.companion_quartic()))
        for r in recovered:
            worst_res = max(worst_res, P.eval(r.value).norm())
            worst_pair = max(worst_pair,
                             min(congruent_distance(r.value, t) for t in (a, b)))
    elapsed = time.perf_counter() - t0
    ok = worst_res < 1e-8 and worst_pair < 1e-6 and elapsed < 1.0
    record_acceptance(
        f"criterion 02 {'pass' if ok else 'FAIL'}: 200 round trips, "
        f"worst |P(q)|={worst_res:.2e} (< 1e-8), worst pairing "
        f"distance={worst_pair:.2e} (< 1e-6), {elapsed:.2f} s (< 1 s)")
    assert worst_res < 1e-8
    assert worst_pair < 1e-6
    assert elapsed < 1.0


def test_criterion_03_published_projected_fixed_points(demo_poly):
    worst = 0.0
    for (tracing, method), points in PUBLISHED_FIXED_POINTS.items():
        for z in points:
            p = Quaternion(z.real, z.imag)
            moved = composed_step(method, demo_poly, p, tracing)
            worst = max(worst, distance(moved, p))
    ok = worst < 1e-3
    record_acceptance(
        f"criterion 03 {'pass' if ok else 'FAIL'}: 12 published fixed "
        f"points, worst per-application drift {worst:.2e} (tol 1e-3)")
    assert worst < 1e-3


def test_criterion_04_single_root_mixed_contraction():
    P = QuadraticPoly(Quaternion(0.0, -1.0, -1.0, 0.0),
                      Quaternion(0.0, 0.0, 0.0, 1.0))
    j = Quaternion(0.0, 0.0, 1.0, 0.0)
    res = P.eval(j).norm()
    eps = 1e-3
    q1 = step(LN, P, j + Quaternion(eps))
    ratio = distance(q1, j) / eps ** 2
    rng = random.Random(77001)
    contracting = expanding = 0
    for _ in range(1000):
        d = Quaternion(*(rng.gauss(0.0, 1.0) for _ in range(4)))
        d = (1.0 / d.norm()) * d
        moved = distance(step(LN, P, j + eps * d), j)
        if moved < eps:
            contracting += 1
        elif moved > eps:
            expanding += 1
    ok = (res < 1e-9 and 0.25 <= ratio <= 4.0
          and contracting > 0 and expanding > 0)
    record_acceptance(
        f"criterion 04 {'pass' if ok else 'FAIL'}: |P(j)|={res:.1e} "
        f"(< 1e-9), real-direction ratio {ratio:.4f} in [0.25, 4], "
        f"directions contracting/expanding {contracting}/{expanding} of 1000")
    assert res < 1e-9
    assert 0.25 <= ratio <= 4.0
    assert contracting > 0 and expanding > 0


def test_criterion_05_jacobian_rank_structure(demo_poly):
    t0 = time.perf_counter()
    zero_ok = True
    details = []
    for method in (LN, RN, HAL):
        for root in (ALPHA, BETA):
            mags = sorted(abs(p.value) for p in
                          eigen4(jacobian(method, demo_poly, root)).pairs)
            zero_ok = zero_ok and mags[1] <= 1e-3
            details.append(mags[-1])
    alpha_pairs = []
    for method in (LN, HAL):
        pairs = eigen4(jacobian(method, demo_poly, ALPHA)).pairs
        lead = max(pairs, key=lambda p: abs(p.value))
        alpha_pairs.append(lead.value)
    expanding = all(abs(v) > 1.0 and abs(v.imag) > 1e-6 for v in alpha_pairs)
    elapsed = time.perf_counter() - t0
    ok = zero_ok and expanding and elapsed < 1.0
    record_acceptance(
        f"criterion 05 {'pass' if ok else 'FAIL'}: two |eig| <= 1e-3 at all "
        f"6 method/root pairs: {zero_ok}; complex expanding pair at first "
        f"root |{alpha_pairs[0]:.4f}|={abs(alpha_pairs[0]):.4f} (> 1), "
        f"{elapsed:.2f} s (< 1 s)")
    assert zero_ok
    assert expanding
    assert elapsed < 1.0


def test_criterion_06_plane_agreement_between_methods(demo_poly):
    p_ln = invariant_plane(LN, demo_poly, ALPHA, BETA)
    p_rn = invariant_plane(RN, demo_poly, ALPHA, BETA)
    p_hal = invariant_plane(HAL, demo_poly, ALPHA, BETA)
    same = max(principal_angles(p_ln, p_hal))
    diff = max(principal_angles(p_ln, p_rn))
    ok = same < 1e-3 and diff > 1e-2
    record_acceptance(
        f"criterion 06 {'pass' if ok else 'FAIL'}: left-Newton vs Halley "
        f"plane angle {same:.2e} (< 1e-3), left vs right Newton "
        f"{diff:.3f} (> 1e-2)")
    assert same < 1e-3
    assert diff > 1e-2


def _best_cyclic_deviation(points, targets):
    """Min over cyclic shifts of the max pointwise distance."""
    n = len(targets)
    best = math.inf
    for shift in range(n):
        worst = max(
            math.sqrt(sum((a - b) ** 2 for a, b in
                          zip(points[(i + shift) % n], targets[i])))
            for i in range(n))
        best = min(best, worst)
    return best


def test_criterion_07_halley_plane_three_cycle(demo_poly):
    from quatquad import TerminalKind, resolve_job, trace_pixel
    t0 = time.perf_counter()
    job = RenderJob(P=demo_poly, method=HAL, tracing=Tracing.INVARIANT_PLANE,
                    plane_root=0, resolution=100)
    raster = render(job)
    three = [c for c in raster.cycles if c.period == 3]
    assert three, "no period-3 cycle class detected"
    dominant = max(three, key=lambda c: c.count)
    share = 100.0 * dominant.count / (raster.width * raster.height)
    mean_dev = _best_cyclic_deviation(dominant.points, PUBLISHED_TRIPLE)
    # Also scan individual orbits in the basin: the class means average
    # over a broad band, so single orbits can come much closer.
    job2, roots, plane = resolve_job(job)
    orbit_dev = math.inf
    for py in range(0, 100, 2):
        for px in range(0, 100, 2):
            if raster.class_ids[py * 100 + px] != dominant.class_id:
                continue
            seed = seed_for_pixel(job2, px, py, plane=plane)
            term, orb = trace_pixel(job2, seed, roots=roots)
            if term.kind is TerminalKind.CYCLE and term.period == 3:
                pts = [p.as_tuple() for p in orb.iterates[-3:]]
                orbit_dev = min(orbit_dev,
                                _best_cyclic_deviation(pts, PUBLISHED_TRIPLE))
    elapsed = time.perf_counter() - t0
    deviation = min(mean_dev, orbit_dev)
    ok = deviation <= 0.15 and 60.0 <= share <= 80.0 and elapsed < 30.0
    record_acceptance(
        f"criterion 07 {'pass' if ok else 'FAIL'}: period-3 attractor "
        f"found, basin {share:.2f}% (70 +- 10), deviation from published "
        f"triple: class means {mean_dev:.4f}, closest sampled orbit "
        f"{orbit_dev:.4f} (tol 0.15), {elapsed:.1f} s (< 30 s)")
    assert 60.0 <= share <= 80.0
    assert elapsed < 30.0
    # The published triple is not an orbit of the map: the attractor is
    # a three-piece band, and neither the class means nor any sampled
    # orbit comes within 0.15 of the printed points. This clause is
    # expected to fail; the ledger has the analysis.
    assert deviation <= 0.15, (
        f"class means deviate {mean_dev:.4f} and the closest of the "
        f"sampled orbits deviates {orbit_dev:.4f} from the published "
        f"triple (tolerance 0.15)")


def test_criterion_08_step_identities_at_roots():
    rng = random.Random(31415)
    worst = {"taylor": 0.0, "newton": 0.0, "halley": 0.0}
    count = 0
    while count < 1000:
        a, b = random_root_pair(rng)
        P = from_roots(a, b)
        xi = a if rng.random() < 0.5 else b
        q = xi + 0.4 * Quaternion(*(rng.uniform(-1.0, 1.0) for _ in range(4)))
        r = xi - q
        E = q * xi - xi * q
        scale = (1.0 + q.norm() + xi.norm() + P.b.norm() + P.c.norm()) ** 3
        t_res = (taylor_remainder(P, xi, q) - E).norm()
        worst["taylor"] = max(worst["taylor"], t_res / scale)
        try:
            pinv = P.deriv1(q).inverse()
            delta = P.deriv1(q) - P.eval(q) * pinv
            dinv = delta.inverse()
            n_pred = xi + pinv * (r * r) - pinv * E
            h_pred = (xi - pinv * (dinv * (r * r * r))
                      - (pinv * (dinv * (P.eval(q) * (pinv * E) - E * r))
                         + pinv * E))
        except Exception:
            continue
        hscale = scale * (1.0 + pinv.norm()) * (1.0 + dinv.norm())
        worst["newton"] = max(worst["newton"],
                              (step(LN, P, q) - n_pred).norm() / scale)
        worst["halley"] = max(worst["halley"],
                              (step(HAL, P, q) - h_pred).norm() / hscale)
        count += 1
    ok = all(v < 1e-8 for v in worst.values())
    record_acceptance(
        f"criterion 08 {'pass' if ok else 'FAIL'}: 1000 pairs, worst scaled "
        f"residual taylor={worst['taylor']:.1e} newton={worst['newton']:.1e} "
        f"halley={worst['halley']:.1e} (tol 1e-8)")
    for name, v in worst.items():
        assert v < 1e-8, name


def test_criterion_09_complex_voronoi_rule():
    P = QuadraticPoly(Quaternion(0.0), Quaternion(-1.0))
    job = RenderJob(P=P, method=LN, tracing=Tracing.QUATERNION,
                    resolution=200, halfwidth=2.3)
    raster = render(job)
    assert [r.a1 for r in raster.roots] == [-1.0, 1.0]
    agree = 0
    for py in range(200):
        for px in range(200):
            seed = seed_for_pixel(job, px, py)
            want = 1 if seed.a1 > 0.0 else 0
            if raster.record(px, py).class_id == want:
                agree += 1
    pct = 100.0 * agree / 40000
    ok = pct >= 98.0
    record_acceptance(
        f"criterion 09 {'pass' if ok else 'FAIL'}: nearest-root rule holds "
        f"on {pct:.2f}% of 200x200 pixels (>= 98%)")
    assert pct >= 98.0


def test_criterion_10_worker_count_invariance(tmp_path, demo_poly):
    job = RenderJob(P=demo_poly, method=HAL, tracing=Tracing.INVARIANT_PLANE,
                    plane_root=0, resolution=50)
    files = {}
    for workers in (1, 3):
        raster = render(job, workers=workers)
        ppm = tmp_path / f"w{workers}.ppm"
        png = tmp_path / f"w{workers}.png"
        ppm.write_bytes(encode_ppm(raster, cap=job.cap))
        png.write_bytes(encode_png(raster, cap=job.cap))
        files[workers] = (ppm.read_bytes(), png.read_bytes())
    same = files[1] == files[3]
    record_acceptance(
        f"criterion 10 {'pass' if same else 'FAIL'}: 1-worker and 3-worker "
        f"renders byte-identical (ppm {len(files[1][0])} bytes, "
        f"png {len(files[1][1])} bytes)")
    assert same


def test_criterion_11_bench_table(tmp_path, capsys):
    cfg = tmp_path / "bench.cfg"
    cfg.write_text(
        "quatquad-config 1\n\n[polynomial]\n"
        "alpha = -1.3+2.1i+0.17j-0.31k\nbeta = 1.4+0.7i-0.23j+0.28k\n\n"
        "[bench]\nrepetitions = 3\nresolution = 100\n")
    rc = main(["bench", "--config", str(cfg), "--out", str(tmp_path / "b")])
    captured = capsys.readouterr()
    assert rc == 0
    csv = (tmp_path / "b" / "bench.csv").read_text()
    lines = csv.strip().splitlines()
    assert lines[0] == "# workers=1"
    assert lines[1] == "method,left_newton,right_newton,halley"
    rows = {ln.split(",")[0]: [float(x) for x in ln.split(",")[1:]]
            for ln in lines[2:]}
    assert sorted(rows) == sorted([
        "quaternion", "complex_projection", "congruency_projection",
        "invariant_plane_root0", "invariant_plane_root1", "newton_on_f"])
    assert all(len(v) == 3 and all(t >= 0.0 for t in v)
               for v in rows.values())
    warnings = [ln for ln in captured.err.splitlines() if "warning" in ln]
    a, b = rows["invariant_plane_root0"], rows["invariant_plane_root1"]
    swapped = (a[0] - a[1]) * (b[0] - b[1]) < 0
    record_acceptance(
        f"criterion 11 pass: full 6x3 timing matrix at 100x100; "
        f"left/right ordering swaps between plane rows: {swapped}; "
        f"soft-check warnings: {len(warnings)} "
        f"(timings reported, not asserted)")
