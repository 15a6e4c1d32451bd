"""Spatial error maps for the bundled scenarios.

Every cell of a 100 x 100 grid is localised 100 times with noisy ranges.
The mean error per cell is coloured relative to the expected ranging
error: green below it, grey up to five times it, blue beyond; anchor cells
are red. A difference map then shows where one algorithm beats another.

Usage: python demos/04_spatial_maps.py [output-dir]
"""

import sys
from pathlib import Path

from lateration import classify, diff, make_locator, render, sweep
from lateration.spatial import builtin_scenario, hull_mask, locator_from_block

out = Path(sys.argv[1] if len(sys.argv) > 1 else "maps")
out.mkdir(parents=True, exist_ok=True)

sc, block = builtin_scenario("four_corner")
locators = {
    "minmax": make_locator("minmax"),
    "eminmax-w4": make_locator("eminmax-w4"),
    "mdminmax": locator_from_block(block, sc),  # MF calibrated on the scenario's error model
}

hull = hull_mask(sc)
grids = {}
for name, loc in locators.items():
    grids[name] = g = sweep(sc, loc)
    ppm, _ = render(classify(g), out / f"four_corner_{name}")
    print(f"{name:<11} inside hull {g.mean[hull].mean():.4f}  outside {g.mean[~hull].mean():.4f}  -> {ppm}")

# red: first map better, blue: second map better, green: within 1.6 % of the field
d = diff(grids["eminmax-w4"], grids["minmax"])
ppm, _ = render(d, out / "diff_w4_vs_minmax")
print(f"W4 better in {(d.classes == 1).sum()} cells, Min-Max better in {(d.classes == 2).sum()} -> {ppm}")
