#!/usr/bin/env python3
"""Writes the piecewise-smooth test phantom as a binary PGM and prints the
FNV-1a 64-bit checksum of its pixel bytes."""

import argparse
import math


def ellipse(u, v, cu, cv, au, av):
    du = (u - cu) / au
    dv = (v - cv) / av
    return du * du + dv * dv


def value(u, v):
    x = 40.0 + 20.0 * u + 15.0 * v * v
    head = ellipse(u, v, 0.0, 0.0, 0.82, 0.92)
    if head < 1.0:
        x += 70.0 + 40.0 * (1.0 - head)
        band = 0.45 * u + 0.8 * v
        if -0.12 < band < 0.06:
            x += 45.0
    if ellipse(u, v, -0.32, 0.22, 0.18, 0.3) < 1.0:
        x -= 60.0
    bump = ellipse(u, v, 0.36, -0.3, 0.24, 0.14)
    if bump < 1.0:
        x += 30.0 + 50.0 * (1.0 - bump)
    if 0.55 < u < 0.65 and abs(v) < 0.5:
        x -= 35.0
    return int(math.floor(min(max(x, 0.0), 255.0) + 0.5))


def phantom(width, height):
    rows = []
    for r in range(height):
        v = (2.0 * r + 1.0) / height - 1.0
        rows.append(bytes(value((2.0 * c + 1.0) / width - 1.0, v) for c in range(width)))
    return b"".join(rows)


def fnv1a64(data):
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("output", nargs="?", help="PGM path to write")
    parser.add_argument("--width", type=int, default=256)
    parser.add_argument("--height", type=int, default=256)
    args = parser.parse_args()
    data = phantom(args.width, args.height)
    if args.output:
        with open(args.output, "wb") as f:
            f.write(b"P5\n%d %d\n255\n" % (args.width, args.height))
            f.write(data)
    print("%016x" % fnv1a64(data))


if __name__ == "__main__":
    main()
