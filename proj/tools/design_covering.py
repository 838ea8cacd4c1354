#!/usr/bin/env python3
"""Pick ray offsets for a 24-sector covering of the reference problem.

Sector i has bisector psi_i = 7.5 + 15 i degrees and opening 20 degrees. Its ray is
gamma_i = r * psi_i + offset_i. The script enforces, with margins:
  * Laplace aperture at the sector and overlap bisectors for arg t in the t sector,
  * distance of every ray to the first-kind directions,
  * distance of every ray to the second-kind wedges of its own sector (plus delta2),
  * each gap arc either clearly contains or clearly misses every singular direction,
  * exactly one gap of the second kind.
Prints the geometry block of a run config as JSON (angles in radians).
"""
import argparse
import json
import math

K, S1, S2, R1, R2 = 2, 1, 5, 1, 11
R = R2 / (S2 * K)
GAP = S1 * R2 - S2 * R1
N, STEP, OPEN = 24, 15.0, 20.0
HW = GAP / (K * S1 * S2) * OPEN          # second-kind wedge half-width
FIRST = [(180.0 * (2 * j + 1)) / (K * S2) for j in range(K * S2)]


def ang(a, b):
    d = (a - b) % 360.0
    return min(d, 360.0 - d)


def sectors():
    out = []
    for i in range(N):
        lo = (7.5 + STEP * i - OPEN / 2) % 360.0
        out.append((lo, lo + OPEN))
    return out


def second_kind(sec):
    bis = 0.5 * (sec[0] + sec[1])
    return [((180.0 * (2 * j + 1)) + GAP / S2 * bis) / (K * S1) % 360.0 for j in range(K * S1)]


def arc_hits(a, b, x, width=0.0):
    """Distance-based test of direction x against the shorter arc from a to b."""
    span = (b - a) % 360.0
    start = a
    if span > 180.0:
        start, span = b, 360.0 - span
    rel = (x - start) % 360.0
    if rel <= span:
        return 0.0
    return min(rel - span, 360.0 - rel)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--t-half", type=float, default=2.0, help="half-width of the t sector (deg)")
    ap.add_argument("--delta", type=float, default=0.5)
    ap.add_argument("--first-margin", type=float, default=4.0)
    ap.add_argument("--class-margin", type=float, default=2.0)
    ap.add_argument("--delta2", type=float, default=12.5)
    ap.add_argument("--second-gap", type=int, default=11)
    args = ap.parse_args()

    secs = sectors()
    lim = math.degrees(math.acos(args.delta)) / K      # |gamma - r arg eps - arg t| bound
    off_max = lim - R * STEP / 2 - args.t_half - 0.25

    def frame_shift(i):
        a, b = secs[i], secs[(i + 1) % N]
        best = None
        for m in (-1, 0, 1):
            lo, hi = max(a[0], b[0] + 360 * m), min(a[1], b[1] + 360 * m)
            if best is None or hi - lo > best[1]:
                best = (m, hi - lo)
        return 360.0 * best[0]

    def ray(i, off):
        bis = 0.5 * (secs[i][0] + secs[i][1])
        return R * bis + off

    def ray_ok(i, off):
        if abs(off) > off_max:
            return False
        g = ray(i, off)
        if min(ang(g, f) for f in FIRST) < args.first_margin:
            return False
        return all(ang(g, d) > max(HW, args.delta2) + 0.5 for d in second_kind(secs[i]))

    def gap_kind(i, off_i, off_j):
        j = (i + 1) % N
        a = ray(i, off_i)
        b = ray(j, off_j) + R * frame_shift(i)
        first = [arc_hits(a, b, f) for f in FIRST]
        second = [arc_hits(a, b, d) - HW for d in second_kind(secs[i])]
        if any(0.0 < x < args.class_margin for x in first):
            return None
        if any(abs(x) < args.class_margin for x in second):
            return None
        if any(x <= 0.0 for x in second):
            return "SECOND_KIND"
        if any(x == 0.0 for x in first):
            return "FIRST_KIND_ONLY"
        return "EMPTY"

    candidates = [x * 0.25 for x in range(-int(4 * off_max), int(4 * off_max) + 1)]
    candidates.sort(key=abs)
    # Depth-first over sectors, preferring small offsets.
    offs = [None] * N

    def search(i):
        if i == N:
            kinds = [gap_kind(q, offs[q], offs[(q + 1) % N]) for q in range(N)]
            if None in kinds:
                return False
            return [q for q, k in enumerate(kinds) if k == "SECOND_KIND"] == [args.second_gap]
        for off in candidates:
            if not ray_ok(i, off):
                continue
            offs[i] = off
            if i > 0:
                k = gap_kind(i - 1, offs[i - 1], off)
                if k is None or (k == "SECOND_KIND") != (i - 1 == args.second_gap):
                    continue
            if search(i + 1):
                return True
        return False

    if not search(0):
        raise SystemExit("no admissible offsets found")
    kinds = [gap_kind(q, offs[q], offs[(q + 1) % N]) for q in range(N)]
    rad = math.radians
    geometry = {
        "covering": [{"radius": 0.2, "theta1": rad(a), "theta2": rad(b)} for a, b in secs],
        "rays": [rad(ray(i, offs[i])) for i in range(N)],
        "rho0": 0.3,
        "delta1": 0.2,
        "delta2": rad(args.delta2),
        "t_sector": {"radius": 2.0, "theta1": rad(-args.t_half), "theta2": rad(args.t_half)},
        "Delta": args.delta,
    }
    print(json.dumps(geometry, indent=2))
    for q in range(N):
        print(f"# gap {q:2d}: offset {offs[q]:+6.2f} -> {kinds[q]}", file=__import__("sys").stderr)


if __name__ == "__main__":
    main()
