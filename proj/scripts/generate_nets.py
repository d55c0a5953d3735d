#!/usr/bin/env python3
"""Generate the multi-patch control nets under data/.

Coordinates are written as decimal strings (17 significant digits) so they
round-trip bit-exactly through the JSON loader.
"""
import json
import math
import os

OUT = os.path.join(os.path.dirname(__file__), os.pardir, "data")


def fmt(x):
    return format(float(x), ".17g")


def pt(p):
    return [fmt(p[0]), fmt(p[1])]


def add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def scale(s, a):
    return (s * a[0], s * a[1])


def bezier2_knots():
    return [fmt(v) for v in (0, 0, 0, 1, 1, 1)]


def line1_knots():
    return [fmt(v) for v in (0, 0, 1, 1)]


def coons_center(rows):
    """rows[j][i], 3x3 biquadratic net with boundary rows/columns filled."""
    e = scale(0.5, add(add(rows[0][1], rows[2][1]), add(rows[1][0], rows[1][2])))
    c = scale(0.25, add(add(rows[0][0], rows[0][2]), add(rows[2][0], rows[2][2])))
    return sub(e, c)


def patch_from_rows(rows, weights=None):
    p = {
        "degree": [2, 2],
        "knots1": bezier2_knots(),
        "knots2": bezier2_knots(),
        "points": [pt(rows[j][i]) for j in range(3) for i in range(3)],
    }
    if weights is not None:
        p["weights"] = [fmt(weights[j][i]) for j in range(3) for i in range(3)]
    return p


def four_patch():
    # Seam curves (quadratic Beziers with bowed middle control points).
    sv = [(0, -1), (0.2, -0.5), (0, 0)]      # south vertical seam
    nv = [(0, 0), (-0.15, 0.5), (0, 1)]      # north vertical seam
    wh = [(-1, 0), (-0.5, 0.15), (0, 0)]     # west horizontal seam
    eh = [(0, 0), (0.5, 0.18), (1, 0)]       # east horizontal seam

    def build(south, north, west, east):
        rows = [list(south), [west[1], None, east[1]], list(north)]
        rows[1][1] = coons_center(rows)
        return rows

    sw = build([(-1, -1), (-0.5, -1), (0, -1)], wh, [(-1, -1), (-1, -0.5), (-1, 0)], sv)
    se = build([(0, -1), (0.5, -1), (1, -1)], eh, sv, [(1, -1), (1, -0.5), (1, 0)])
    nw = build(wh, [(-1, 1), (-0.5, 1), (0, 1)], [(-1, 0), (-1, 0.5), (-1, 1)], nv)
    ne = build(eh, [(0, 1), (0.5, 1), (1, 1)], nv, [(1, 0), (1, 0.5), (1, 1)])

    doc = {
        "name": "four_patch_square",
        "patches": [patch_from_rows(r) for r in (sw, se, nw, ne)],
        "interfaces": [
            {"a": 0, "edge_a": "right", "b": 1, "edge_b": "left", "reversed": False},
            {"a": 2, "edge_a": "right", "b": 3, "edge_b": "left", "reversed": False},
            {"a": 0, "edge_a": "top", "b": 2, "edge_b": "bottom", "reversed": False},
            {"a": 1, "edge_a": "top", "b": 3, "edge_b": "bottom", "reversed": False},
        ],
    }
    return doc


def disk_five_patch():
    R = 2.0
    b = 0.9
    w = math.sqrt(0.5)

    def ring(th0):
        """Radial direction 1 (inner -> outer), angular direction 2 (ccw 90 deg)."""
        ths = [math.radians(th0 + d) for d in (0, 45, 90)]
        inner = [scale(b, (math.cos(t), math.sin(t))) for t in (ths[0], ths[2])]
        chord = [inner[0], scale(0.5, add(inner[0], inner[1])), inner[1]]
        arc = [
            scale(R, (math.cos(ths[0]), math.sin(ths[0]))),
            scale(R / w, (math.cos(ths[1]), math.sin(ths[1]))),
            scale(R, (math.cos(ths[2]), math.sin(ths[2]))),
        ]
        pts = []
        wts = []
        for j in range(3):           # angular
            for i in range(2):       # radial, fastest
                pts.append(pt(chord[j] if i == 0 else arc[j]))
                wts.append(fmt(w if j == 1 else 1.0))
        return {
            "degree": [1, 2],
            "knots1": line1_knots(),
            "knots2": bezier2_knots(),
            "points": pts,
            "weights": wts,
        }

    # Inner parallelogram patch, reparametrized to match the rational chords:
    # numerator coefficients are A a_i a_j + B b_i a_j + D a_i b_j + C b_i b_j
    # with a = (1, w/2, 0), b = (0, w/2, 1) in the Bernstein basis.
    A, B, C, D = (-b, 0), (0, -b), (b, 0), (0, b)
    a = (1.0, w / 2, 0.0)
    bb = (0.0, w / 2, 1.0)
    w1 = (1.0, w, 1.0)
    pts = []
    wts = []
    for j in range(3):
        for i in range(3):
            W = w1[i] * w1[j]
            N = add(add(scale(a[i] * a[j], A), scale(bb[i] * a[j], B)),
                    add(scale(a[i] * bb[j], D), scale(bb[i] * bb[j], C)))
            pts.append(pt(scale(1.0 / W, N)))
            wts.append(fmt(W))
    inner = {
        "degree": [2, 2],
        "knots1": bezier2_knots(),
        "knots2": bezier2_knots(),
        "points": pts,
        "weights": wts,
    }

    doc = {
        "name": "disk_five_patch",
        # 0 inner, 1..4 rings at 0, 90, 180, 270 degrees
        "patches": [inner, ring(0), ring(90), ring(180), ring(270)],
        "interfaces": [
            {"a": 0, "edge_a": "top", "b": 1, "edge_b": "left", "reversed": True},
            {"a": 0, "edge_a": "left", "b": 2, "edge_b": "left", "reversed": True},
            {"a": 0, "edge_a": "bottom", "b": 3, "edge_b": "left", "reversed": False},
            {"a": 0, "edge_a": "right", "b": 4, "edge_b": "left", "reversed": False},
            {"a": 1, "edge_a": "top", "b": 2, "edge_b": "bottom", "reversed": False},
            {"a": 2, "edge_a": "top", "b": 3, "edge_b": "bottom", "reversed": False},
            {"a": 3, "edge_a": "top", "b": 4, "edge_b": "bottom", "reversed": False},
            {"a": 4, "edge_a": "top", "b": 1, "edge_b": "bottom", "reversed": False},
        ],
    }
    return doc


def main():
    os.makedirs(OUT, exist_ok=True)
    with open(os.path.join(OUT, "four_patch_square.json"), "w") as f:
        json.dump(four_patch(), f, indent=1)
        f.write("\n")
    with open(os.path.join(OUT, "disk_five_patch.json"), "w") as f:
        json.dump(disk_five_patch(), f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
