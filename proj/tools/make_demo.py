#!/usr/bin/env python3
"""Generates the box-task demonstration fixture.

A cubic Bezier from above-left of the box down into it, traversed with a
speed profile that ramps up, saturates, and decays toward the goal. Samples
are written at a fixed rate with analytic velocities.
"""
import argparse
import json

import numpy as np

CTRL = np.array([[-0.45, 0.30], [-0.25, 0.46], [0.0, 0.38], [0.0, 0.0]])


def bezier(t):
    b = CTRL
    return ((1 - t) ** 3)[:, None] * b[0] + (3 * (1 - t) ** 2 * t)[:, None] * b[1] \
        + (3 * (1 - t) * t ** 2)[:, None] * b[2] + (t ** 3)[:, None] * b[3]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", required=True)
    ap.add_argument("--rate", type=float, default=60.0)
    ap.add_argument("--vmax", type=float, default=0.15)
    ap.add_argument("--stop", type=float, default=0.003, help="remaining arc length at which recording ends")
    args = ap.parse_args()

    ts = np.linspace(0.0, 1.0, 20001)
    pts = bezier(ts)
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    arc = np.concatenate([[0.0], np.cumsum(seg)])
    total = arc[-1]

    def speed(s):
        return min(args.vmax, 0.03 + 1.0 * s, 2.0 * (total - s))

    def point_tangent(s):
        i = min(np.searchsorted(arc, s), len(arc) - 1)
        i = max(i, 1)
        a = (s - arc[i - 1]) / (arc[i] - arc[i - 1])
        p = pts[i - 1] + a * (pts[i] - pts[i - 1])
        d = pts[i] - pts[i - 1]
        return p, d / np.linalg.norm(d)

    dt = 1.0 / args.rate
    sub = 100
    s = 0.0
    samples = []
    while total - s > args.stop:
        p, d = point_tangent(s)
        v = speed(s) * d
        samples.append({"y": float(p[0]), "z": float(p[1]), "vy": float(v[0]), "vz": float(v[1])})
        for _ in range(sub):  # RK2 on ds/dt = speed(s)
            h = dt / sub
            k1 = speed(s)
            s = s + h * speed(s + 0.5 * h * k1)
    with open(args.out, "w") as f:
        json.dump({"rate_hz": args.rate, "samples": samples}, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
