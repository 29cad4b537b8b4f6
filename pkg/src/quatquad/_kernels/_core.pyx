# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pixel-tracing kernel.

Transcription of _fallback.py; the floating-point operations and their
order are identical so rasters agree bitwise with the pure-Python
backend. Keep the two files in sync; see _fallback.py for the code and
record layout documentation.
"""

from libc.math cimport sqrt

cdef double SINGULAR_TOL = 1e-13
cdef double CYCLE_RETURN_FACTOR = 0.1


cdef int _detect(double[6][4] hist, int hn, int steps) noexcept:
    cdef int avail, p, ia, ib
    cdef double a1, a2, a3, a4, o1, o2, o3, o4
    cdef double x1, x2, x3, x4, y1, y2, y3, y4
    cdef double ret, diam, d
    avail = steps + 1 if steps + 1 < hn else hn
    for p in range(2, 6):
        if avail < p + 1:
            return 0
        a1 = hist[hn - 1][0]
        a2 = hist[hn - 1][1]
        a3 = hist[hn - 1][2]
        a4 = hist[hn - 1][3]
        o1 = hist[hn - 1 - p][0]
        o2 = hist[hn - 1 - p][1]
        o3 = hist[hn - 1 - p][2]
        o4 = hist[hn - 1 - p][3]
        ret = sqrt((a1 - o1) * (a1 - o1) + (a2 - o2) * (a2 - o2)
                   + (a3 - o3) * (a3 - o3) + (a4 - o4) * (a4 - o4))
        diam = 0.0
        for ia in range(p):
            x1 = hist[hn - p + ia][0]
            x2 = hist[hn - p + ia][1]
            x3 = hist[hn - p + ia][2]
            x4 = hist[hn - p + ia][3]
            for ib in range(ia + 1, p):
                y1 = hist[hn - p + ib][0]
                y2 = hist[hn - p + ib][1]
                y3 = hist[hn - p + ib][2]
                y4 = hist[hn - p + ib][3]
                d = sqrt((x1 - y1) * (x1 - y1) + (x2 - y2) * (x2 - y2)
                         + (x3 - y3) * (x3 - y3) + (x4 - y4) * (x4 - y4))
                if d > diam:
                    diam = d
        if diam > 0.0 and ret <= CYCLE_RETURN_FACTOR * diam:
            return p
    return 0


def trace_block(b, c, int method, int tracing, double cx, double cy,
                double s, int res, int row0, int row1, double stop_tol,
                int cap, int cycle_check, plane_root, plane_u, plane_v,
                fcoefs):
    """Compiled counterpart of _fallback.trace_block."""
    cdef double b1 = b[0], b2 = b[1], b3 = b[2], b4 = b[3]
    cdef double c1 = c[0], c2 = c[1], c3 = c[2], c4 = c[3]
    cdef double r1 = plane_root[0], r2 = plane_root[1]
    cdef double r3 = plane_root[2], r4 = plane_root[3]
    cdef double u1 = plane_u[0], u2 = plane_u[1]
    cdef double u3 = plane_u[2], u4 = plane_u[3]
    cdef double v1 = plane_v[0], v2 = plane_v[1]
    cdef double v3 = plane_v[2], v4 = plane_v[3]
    cdef double e0 = fcoefs[0], e1 = fcoefs[1]
    cdef double e2 = fcoefs[2], e3 = fcoefs[3]
    cdef double h = (2.0 * s) / res
    cdef int py, px, kind, steps, period, idx
    cdef double x, y
    cdef double q1, q2, q3, q4, n1, n2, n3, n4
    cdef double d1, d2, d3, d4, dn
    cdef double p1, p2, p3, p4, i1, i2, i3, i4
    cdef double m1, m2, m3, m4, w1, w2, w3, w4
    cdef double g1, g2, g3, g4, gn, gi1, gi2, gi3, gi4
    cdef double a1, a2, a3, a4, k1, k2, k3, k4, l1, l2, l3, l4
    cdef double hr, hi, t, gr, gi, den
    cdef double dx, dy, dz, dw
    cdef double[6][4] hist
    cdef int hn
    records = []
    for py in range(row0, row1):
        y = cy + s - (py + 0.5) * h
        for px in range(res):
            x = cx - s + (px + 0.5) * h
            if tracing == 3:
                q1 = r1 + x * u1 + y * v1
                q2 = r2 + x * u2 + y * v2
                q3 = r3 + x * u3 + y * v3
                q4 = r4 + x * u4 + y * v4
            else:
                q1 = x
                q2 = y
                q3 = 0.0
                q4 = 0.0
            hist[0][0] = q1
            hist[0][1] = q2
            hist[0][2] = q3
            hist[0][3] = q4
            hn = 1
            kind = 2
            steps = 0
            period = 0
            while steps < cap:
                if tracing == 4:
                    hr = q1 + e3
                    hi = q2
                    t = hr * q1 - hi * q2
                    hi = hr * q2 + hi * q1
                    hr = t + e2
                    t = hr * q1 - hi * q2
                    hi = hr * q2 + hi * q1
                    hr = t + e1
                    t = hr * q1 - hi * q2
                    hi = hr * q2 + hi * q1
                    hr = t + e0
                    gr = 4.0 * q1 + 3.0 * e3
                    gi = 4.0 * q2
                    t = gr * q1 - gi * q2
                    gi = gr * q2 + gi * q1
                    gr = t + 2.0 * e2
                    t = gr * q1 - gi * q2
                    gi = gr * q2 + gi * q1
                    gr = t + e1
                    den = gr * gr + gi * gi
                    if sqrt(den) <= SINGULAR_TOL:
                        kind = 3
                        break
                    n1 = q1 - (hr * gr + hi * gi) / den
                    n2 = q2 - (hi * gr - hr * gi) / den
                    n3 = 0.0
                    n4 = 0.0
                else:
                    d1 = 2.0 * q1 + b1
                    d2 = 2.0 * q2 + b2
                    d3 = 2.0 * q3 + b3
                    d4 = 2.0 * q4 + b4
                    dn = d1 * d1 + d2 * d2 + d3 * d3 + d4 * d4
                    if sqrt(dn) <= SINGULAR_TOL:
                        kind = 3
                        break
                    p1 = (q1 * q1 - q2 * q2 - q3 * q3 - q4 * q4
                          + (b1 * q1 - b2 * q2 - b3 * q3 - b4 * q4)) + c1
                    p2 = (q1 * q2 + q2 * q1 + q3 * q4 - q4 * q3
                          + (b1 * q2 + b2 * q1 + b3 * q4 - b4 * q3)) + c2
                    p3 = (q1 * q3 - q2 * q4 + q3 * q1 + q4 * q2
                          + (b1 * q3 - b2 * q4 + b3 * q1 + b4 * q2)) + c3
                    p4 = (q1 * q4 + q2 * q3 - q3 * q2 + q4 * q1
                          + (b1 * q4 + b2 * q3 - b3 * q2 + b4 * q1)) + c4
                    i1 = d1 / dn
                    i2 = -d2 / dn
                    i3 = -d3 / dn
                    i4 = -d4 / dn
                    if method == 0:
                        m1 = i1 * p1 - i2 * p2 - i3 * p3 - i4 * p4
                        m2 = i1 * p2 + i2 * p1 + i3 * p4 - i4 * p3
                        m3 = i1 * p3 - i2 * p4 + i3 * p1 + i4 * p2
                        m4 = i1 * p4 + i2 * p3 - i3 * p2 + i4 * p1
                        n1 = q1 - m1
                        n2 = q2 - m2
                        n3 = q3 - m3
                        n4 = q4 - m4
                    elif method == 1:
                        m1 = p1 * i1 - p2 * i2 - p3 * i3 - p4 * i4
                        m2 = p1 * i2 + p2 * i1 + p3 * i4 - p4 * i3
                        m3 = p1 * i3 - p2 * i4 + p3 * i1 + p4 * i2
                        m4 = p1 * i4 + p2 * i3 - p3 * i2 + p4 * i1
                        n1 = q1 - m1
                        n2 = q2 - m2
                        n3 = q3 - m3
                        n4 = q4 - m4
                    else:
                        w1 = p1 * i1 - p2 * i2 - p3 * i3 - p4 * i4
                        w2 = p1 * i2 + p2 * i1 + p3 * i4 - p4 * i3
                        w3 = p1 * i3 - p2 * i4 + p3 * i1 + p4 * i2
                        w4 = p1 * i4 + p2 * i3 - p3 * i2 + p4 * i1
                        g1 = d1 - w1
                        g2 = d2 - w2
                        g3 = d3 - w3
                        g4 = d4 - w4
                        gn = g1 * g1 + g2 * g2 + g3 * g3 + g4 * g4
                        if sqrt(gn) <= SINGULAR_TOL:
                            kind = 3
                            break
                        gi1 = g1 / gn
                        gi2 = -g2 / gn
                        gi3 = -g3 / gn
                        gi4 = -g4 / gn
                        a1 = i1 * p1 - i2 * p2 - i3 * p3 - i4 * p4
                        a2 = i1 * p2 + i2 * p1 + i3 * p4 - i4 * p3
                        a3 = i1 * p3 - i2 * p4 + i3 * p1 + i4 * p2
                        a4 = i1 * p4 + i2 * p3 - i3 * p2 + i4 * p1
                        k1 = p1 * a1 - p2 * a2 - p3 * a3 - p4 * a4
                        k2 = p1 * a2 + p2 * a1 + p3 * a4 - p4 * a3
                        k3 = p1 * a3 - p2 * a4 + p3 * a1 + p4 * a2
                        k4 = p1 * a4 + p2 * a3 - p3 * a2 + p4 * a1
                        l1 = gi1 * k1 - gi2 * k2 - gi3 * k3 - gi4 * k4
                        l2 = gi1 * k2 + gi2 * k1 + gi3 * k4 - gi4 * k3
                        l3 = gi1 * k3 - gi2 * k4 + gi3 * k1 + gi4 * k2
                        l4 = gi1 * k4 + gi2 * k3 - gi3 * k2 + gi4 * k1
                        m1 = i1 * l1 - i2 * l2 - i3 * l3 - i4 * l4
                        m2 = i1 * l2 + i2 * l1 + i3 * l4 - i4 * l3
                        m3 = i1 * l3 - i2 * l4 + i3 * l1 + i4 * l2
                        m4 = i1 * l4 + i2 * l3 - i3 * l2 + i4 * l1
                        n1 = (q1 - a1) - m1
                        n2 = (q2 - a2) - m2
                        n3 = (q3 - a3) - m3
                        n4 = (q4 - a4) - m4
                    if tracing == 1:
                        n3 = 0.0
                        n4 = 0.0
                    elif tracing == 2:
                        n2 = sqrt(n2 * n2 + n3 * n3 + n4 * n4)
                        n3 = 0.0
                        n4 = 0.0
                steps += 1
                dx = n1 - q1
                dy = n2 - q2
                dz = n3 - q3
                dw = n4 - q4
                q1 = n1
                q2 = n2
                q3 = n3
                q4 = n4
                if hn == 6:
                    for idx in range(5):
                        hist[idx][0] = hist[idx + 1][0]
                        hist[idx][1] = hist[idx + 1][1]
                        hist[idx][2] = hist[idx + 1][2]
                        hist[idx][3] = hist[idx + 1][3]
                    hn = 5
                hist[hn][0] = q1
                hist[hn][1] = q2
                hist[hn][2] = q3
                hist[hn][3] = q4
                hn += 1
                if sqrt(dx * dx + dy * dy + dz * dz + dw * dw) <= stop_tol:
                    kind = 0
                    break
                if cycle_check:
                    period = _detect(hist, hn, steps)
                    if period:
                        kind = 1
                        break
            if kind == 1:
                flat = []
                for idx in range(hn - period, hn):
                    flat.append(hist[idx][0])
                    flat.append(hist[idx][1])
                    flat.append(hist[idx][2])
                    flat.append(hist[idx][3])
                cyc = tuple(flat)
            else:
                cyc = ()
            records.append((kind, steps, q1, q2, q3, q4, period, cyc))
    return records
