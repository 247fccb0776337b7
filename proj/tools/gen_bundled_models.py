#!/usr/bin/env python3
"""Regenerates models/triangle6.json and models/spin3.json from their geometry."""
import json
import math
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "models"


def triangle6():
    # Triangle orientations at 15 + 30k degrees; corners A, B, C at +0, +120, +240.
    n = 12
    phi = [f"o{k:02d}" for k in range(n)]
    elements = [{"name": f"r{j:02d}", "perm": [(k + j) % n for k in range(n)]} for j in range(n)]

    def closest_corner(k, window_deg):
        theta = 15 + 30 * k
        best = None
        for name, offset in (("A", 0), ("B", 120), ("C", 240)):
            d = abs((theta + offset - window_deg + 180) % 360 - 180)
            if best is None or d < best[0]:
                best = (d, name)
        return best[1]

    experiments = {}
    for label, window in (("w1", 0), ("w2", 120), ("w3", 240)):
        experiments[label] = {
            "order": ["A", "B", "C"],
            "values": {phi[k]: closest_corner(k, window) for k in range(n)},
        }
    return {
        "format_version": 1,
        "name": "triangle6",
        "description": "Rotating triangle behind three equatorial windows, 12 discrete orientations",
        "phi": phi,
        "group": {"elements": elements},
        "experiments": experiments,
        "connections": [
            {"from": "w1", "to": "w2", "element": "r08"},
            {"from": "w1", "to": "w3", "element": "r04"},
        ],
        "reference": "w1",
    }


def spin3():
    # Regular orbit of the order-12 dihedral group: angles +-10 + 60k degrees.
    angles = sorted({(s * 10 + 60 * k) % 360 for k in range(6) for s in (1, -1)})
    phi = [f"p{a:03d}" for a in angles]
    index = {a: i for i, a in enumerate(angles)}

    def perm_of(f):
        return [index[f(a) % 360] for a in angles]

    elements = []
    for j in range(6):
        elements.append({"name": f"r{60 * j:03d}", "perm": perm_of(lambda a, j=j: a + 60 * j)})
    for j in range(6):
        axis = 30 * j
        elements.append({"name": f"s{axis:03d}", "perm": perm_of(lambda a, axis=axis: 2 * axis - a)})

    experiments = {}
    for d in (0, 60, 120):
        values = {}
        for a in angles:
            c = math.cos(math.radians(a - d))
            values[f"p{a:03d}"] = "+" if c > 0 else "-"
        experiments[f"d{d:03d}"] = {"order": ["+", "-"], "eigenvalues": {"+": 1.0, "-": -1.0}, "values": values}
    return {
        "format_version": 1,
        "name": "spin3",
        "description": "Planar spin sign model: 12 circle points, dihedral group of order 12, three directions",
        "phi": phi,
        "group": {"elements": elements},
        "experiments": experiments,
        "connections": [
            {"from": "d000", "to": "d060", "element": "r300"},
            {"from": "d000", "to": "d120", "element": "r240"},
        ],
        "reference": "d000",
    }


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    for model in (triangle6(), spin3()):
        (OUT / f"{model['name']}.json").write_text(json.dumps(model, indent=2) + "\n")
