"""Regenerates data/case_study from synthetic hourly flow counts.

Pipeline: flows.csv + nominal.csv -> `saferoute speeds` (queueing model)
-> per-arc profiles with TTI = nominal speed / speed and a synthetic crash
probability that grows with distance and congestion.

usage: python scripts/make_case_study.py path/to/saferoute
"""

import csv
import math
import random
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "data" / "case_study"

# Node 0 is the depot.
NODES = [
    # id, x, y, demand, service_h, open_h, close_h
    (0, 0.0, 0.0, 0, 0.0, 0.0, 3.0),
    (1, -3.0, 4.9, 100, 0.1, 0.0, 1.3),
    (2, 4.5, 4.8, 120, 0.1, 0.0, 1.3),
    (3, 0.8, -6.2, 80, 0.1, 0.0, 1.3),
]

# Road distances in miles; arc numbering 1..6 as (lower, higher) node pairs.
ARCS = {
    1: (0, 1, 5.8),
    2: (0, 2, 6.7),
    3: (0, 3, 6.3),
    4: (1, 2, 10.3035),
    5: (2, 3, 9.8974),
    6: (1, 3, 10.8035),
}

# Free-flow speeds (mph): depot arcs are arterials, the rest highway links.
NOMINAL = {1: 40.0, 2: 45.0, 3: 40.0, 4: 55.0, 5: 60.0, 6: 55.0}

# Base crash probability per mile per traversal.
CRASH_PER_MILE = {1: 2.0e-6, 2: 1.6e-6, 3: 2.4e-6, 4: 1.1e-6, 5: 0.9e-6, 6: 1.3e-6}


def hourly_flows(rng, arc, direction):
    """Commuter pattern: morning peak inbound ("ab"), evening peak outbound."""
    am = 7.5 + 0.3 * (arc % 3)
    pm = 17.0 + 0.25 * (arc % 2)
    am_w, pm_w = (1.0, 0.3) if direction == "ab" else (0.3, 1.0)
    base = 420.0 + 60.0 * arc
    flows = []
    for h in range(24):
        t = h + 0.5
        night = 0.25 if (h < 5 or h >= 22) else 1.0
        peak = am_w * math.exp(-((t - am) ** 2) / 6.0) + pm_w * math.exp(-((t - pm) ** 2) / 6.0)
        value = base * night * (0.8 + 2.6 * peak) * (1.0 + rng.uniform(-0.05, 0.05))
        flows.append(round(value, 1))
    return flows


def main():
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    exe = sys.argv[1]
    rng = random.Random(20240611)
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "profiles").mkdir(exist_ok=True)

    with open(OUT / "flows.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["arc", "direction", "hour", "flow"])
        for arc in ARCS:
            for direction in ("ab", "ba"):
                for h, flow in enumerate(hourly_flows(rng, arc, direction)):
                    w.writerow([arc, direction, h, flow])
    with open(OUT / "nominal.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["arc", "direction", "nominal_speed"])
        for arc, s in NOMINAL.items():
            for direction in ("ab", "ba"):
                w.writerow([arc, direction, s])

    speeds_csv = OUT / "speeds.csv"
    subprocess.run([exe, "speeds", "--flows", str(OUT / "flows.csv"), "--nominal", str(OUT / "nominal.csv"),
                    "--out", str(speeds_csv)], check=True)
    speeds = {}
    congested = {}
    with open(speeds_csv) as f:
        for row in csv.DictReader(f):
            key = (int(row["arc"]), row["direction"])
            speeds.setdefault(key, [0.0] * 24)[int(row["hour"])] = float(row["speed"])
            congested.setdefault(key, [False] * 24)[int(row["hour"])] = row["regime"] == "congested"

    with open(OUT / "nodes.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "x", "y", "demand", "service_time", "window_open", "window_close"])
        for n in NODES:
            w.writerow(n)
    n = len(NODES)
    dist = [[0.0] * n for _ in range(n)]
    for a, b, d in ARCS.values():
        dist[a][b] = dist[b][a] = d
    with open(OUT / "distances.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["node"] + list(range(n)))
        for i in range(n):
            w.writerow([i] + [repr(x) if x else "0" for x in dist[i]])

    for arc, (a, b, d) in ARCS.items():
        for direction, (i, j) in (("ab", (a, b)), ("ba", (b, a))):
            s = speeds[(arc, direction)]
            with open(OUT / "profiles" / f"arc_{i}_{j}.csv", "w", newline="") as f:
                w = csv.writer(f, lineterminator="\n")
                w.writerow(["hour", "speed", "tti", "crash"])
                for h in range(24):
                    tti = max(1.0, NOMINAL[arc] / s[h])
                    night = 1.6 if (h < 5 or h >= 22) else 1.0
                    jam = 1.8 if congested[(arc, direction)][h] else 1.0
                    crash = CRASH_PER_MILE[arc] * d * night * jam * (0.5 + 0.5 * tti)
                    w.writerow([h, repr(s[h]), repr(round(tti, 12)), repr(round(crash, 15))])


if __name__ == "__main__":
    main()
