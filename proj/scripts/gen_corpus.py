#!/usr/bin/env python3
"""Deterministic generator for the desk corpus (data/corpus) and the error
fixtures (data/fixtures). Every coordinate is emitted with exactly three
decimals whose last digit is nonzero, so canonical re-serialization keeps the
literal width stable.

Usage: python3 scripts/gen_corpus.py
"""

import os
import random

N_FILES = 200


def coord(rng, lo, hi):
    whole = rng.randint(int(lo), int(hi) - 1)
    frac = rng.randint(1, 999)
    while frac % 10 == 0:
        frac = rng.randint(1, 999)
    return f"{whole}.{frac:03d}"


def polygon(rng, cx, cy, radius, n):
    import math
    pts = []
    for i in range(n):
        a = 2 * math.pi * i / n + rng.uniform(-0.2, 0.2)
        r = radius * rng.uniform(0.55, 1.0)
        pts.append((cx + r * math.cos(a), cy + r * math.sin(a)))
    return pts


def fmt(rng, v):
    whole = int(v)
    frac = rng.randint(1, 999)
    while frac % 10 == 0:
        frac = rng.randint(1, 999)
    return f"{whole}.{frac:03d}"


def gen_path(rng, lo, hi, flavor):
    """One subpath staying inside [lo, hi]^2."""
    import math
    span = hi - lo
    cx = rng.uniform(lo + span * 0.3, lo + span * 0.7)
    cy = rng.uniform(lo + span * 0.3, lo + span * 0.7)
    radius = rng.uniform(span * 0.08, span * 0.22)
    d = []
    if flavor == "poly":
        pts = polygon(rng, cx, cy, radius, rng.randint(5, 14))
        d.append(f"M {fmt(rng, pts[0][0])} {fmt(rng, pts[0][1])}")
        for x, y in pts[1:]:
            op = rng.choice(["L", "L", "L", "H", "V"])
            if op == "L":
                d.append(f"L {fmt(rng, x)} {fmt(rng, y)}")
            elif op == "H":
                d.append(f"H {fmt(rng, x)}")
            else:
                d.append(f"V {fmt(rng, y)}")
        d.append("z")
    elif flavor == "rel":
        x, y = cx, cy
        d.append(f"M {fmt(rng, x)} {fmt(rng, y)}")
        for _ in range(rng.randint(6, 16)):
            dx = rng.uniform(-radius, radius) / 2
            dy = rng.uniform(-radius, radius) / 2
            if not (lo < x + dx < hi):
                dx = -dx
            if not (lo < y + dy < hi):
                dy = -dy
            x += dx
            y += dy
            op = rng.choice(["l", "l", "h", "v"])
            if op == "l":
                d.append(f"l {fmt(rng, abs(dx)) if dx >= 0 else '-' + fmt(rng, abs(dx))}"
                         f" {fmt(rng, abs(dy)) if dy >= 0 else '-' + fmt(rng, abs(dy))}")
            elif op == "h":
                d.append(f"h {fmt(rng, abs(dx)) if dx >= 0 else '-' + fmt(rng, abs(dx))}")
            else:
                d.append(f"v {fmt(rng, abs(dy)) if dy >= 0 else '-' + fmt(rng, abs(dy))}")
        d.append("z")
    elif flavor == "curvy":
        pts = polygon(rng, cx, cy, radius, rng.randint(4, 8))
        d.append(f"M {fmt(rng, pts[0][0])} {fmt(rng, pts[0][1])}")
        prev = pts[0]
        for x, y in pts[1:]:
            kind = rng.choice(["C", "Q", "S", "T"])
            mx, my = (prev[0] + x) / 2 + rng.uniform(-20, 20), (prev[1] + y) / 2 + rng.uniform(-20, 20)
            if kind == "C":
                d.append(f"C {fmt(rng, mx)} {fmt(rng, my)} {fmt(rng, (mx+x)/2)} {fmt(rng, (my+y)/2)}"
                         f" {fmt(rng, x)} {fmt(rng, y)}")
            elif kind == "Q":
                d.append(f"Q {fmt(rng, mx)} {fmt(rng, my)} {fmt(rng, x)} {fmt(rng, y)}")
            elif kind == "S":
                d.append(f"S {fmt(rng, mx)} {fmt(rng, my)} {fmt(rng, x)} {fmt(rng, y)}")
            else:
                d.append(f"T {fmt(rng, x)} {fmt(rng, y)}")
            prev = (x, y)
        d.append("z")
    else:  # arcs
        x0, y0 = cx - radius, cy
        d.append(f"M {fmt(rng, x0)} {fmt(rng, y0)}")
        r = radius / 2
        d.append(f"A {fmt(rng, r)} {fmt(rng, r)} 0 1 0 {fmt(rng, cx + radius)} {fmt(rng, cy)}")
        d.append(f"A {fmt(rng, r)} {fmt(rng, r)} 0 0 1 {fmt(rng, x0)} {fmt(rng, y0)}")
        d.append("z")
    return " ".join(d)


def gen_file(rng, idx):
    # mix of canvas scales so normalization has real work to do
    extent, origin = rng.choice([
        (1024, 0), (1024, 0), (1024, 0), (512, 0), (512, 0),
        (256, 0), (128, 0), (1024, -512), (2048, 0),
    ])
    fills = ["black"] * 6 + ["#333333", "#555", "#777777"]
    lines = [f'<svg width="{extent}" height="{extent}" '
             f'viewBox="{origin} {origin} {extent} {extent}" fill="black">']
    for _ in range(rng.randint(1, 3)):
        flavor = rng.choices(["poly", "rel", "curvy", "arc"], weights=[5, 3, 3, 1])[0]
        d = gen_path(rng, origin, origin + extent, flavor)
        attrs = ""
        fill = rng.choice(fills)
        if fill != "black" or rng.random() < 0.15:
            attrs += f' fill="{fill}"'
        if rng.random() < 0.1:
            attrs += ' fill-rule="evenodd"'
        if rng.random() < 0.08:
            attrs += f' stroke="black" stroke-width="{coord(rng, 1, 4)}"'
        lines.append(f'<path d="{d}"{attrs}/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    root = os.path.dirname(here)
    corpus = os.path.join(root, "data", "corpus")
    fixtures = os.path.join(root, "data", "fixtures")
    os.makedirs(corpus, exist_ok=True)
    os.makedirs(fixtures, exist_ok=True)

    rng = random.Random(20250810)
    for i in range(N_FILES):
        with open(os.path.join(corpus, f"icon_{i:03d}.svg"), "w") as f:
            f.write(gen_file(rng, i))

    # a coordinate past the canvas bound: rejected by the gate as-is
    with open(os.path.join(fixtures, "oob_coordinate.svg"), "w") as f:
        f.write('<svg width="512" height="512" viewBox="0 0 512 512" fill="black">\n'
                '<path d="M 100.125 100.125 L 513.2 200.375 z"/>\n'
                "</svg>\n")

    # absolute geometry fits, but a relative delta exceeds the bound even
    # after normalization
    with open(os.path.join(fixtures, "oob_relative.svg"), "w") as f:
        f.write('<svg width="512" height="512" viewBox="0 0 512 512" fill="black">\n'
                '<path d="m 500.125 10.125 l -990.25 20.125 l 990.25 20.125 z"/>\n'
                "</svg>\n")

    # unsupported element for error-path tests
    with open(os.path.join(fixtures, "unsupported.svg"), "w") as f:
        f.write('<svg viewBox="0 0 10 10"><rect width="5" height="5"/></svg>\n')

    print(f"wrote {N_FILES} corpus files + fixtures")


if __name__ == "__main__":
    main()
