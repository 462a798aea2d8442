#!/usr/bin/env python3
"""Regenerates the data files under data/ (deterministic, no dependencies)."""
import os

HERE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")
M = 8
H = 1.0 / M
NT, NX = round(3.5 * M), 2 * M
T0, X0 = -1.0, -1.0


def centre(i):
    a, b = divmod(i, NX)
    return T0 + (a + 0.5) * H, X0 + (b + 0.5) * H


def write(name, lines):
    with open(os.path.join(HERE, name), "w") as f:
        f.write("".join(l + "\n" for l in lines))


os.makedirs(HERE, exist_ok=True)
cells = [i for i in range(NT * NX) if sum(map(abs, centre(i))) < 1.0]
write("diamond_mu.txt", [f"# uniform on |t| + |x| < 1, h = 1/{M}"] + [f"{i} {1.0 / len(cells)!r}" for i in cells])
write("time_function.txt", [f"{i} {centre(i)[0]!r}" for i in range(NT * NX)])
print(f"{len(cells)} diamond cells of {NT * NX}")
