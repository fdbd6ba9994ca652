"""Emit a small gallery of renders: subdivision tilings across parameters and
depths, a cover strip for the two-loop interval system, and an attractor
raster.

    python3 scripts/render_gallery.py [outdir]
"""

import os
import sys
from fractions import Fraction

from cxcdyn.dendrite import attractor_points
from cxcdyn.gdms import build_interval_system
from cxcdyn.graphs import make_graph
from cxcdyn.pillowcase import subdivide
from cxcdyn.render import cover_strip_svg, points_pgm, tiling_svg, write_pgm


def main(outdir="gallery"):
    os.makedirs(outdir, exist_ok=True)

    for a, depth in ((Fraction(0), 3), (Fraction(1, 16), 4), (Fraction(1, 8), 5)):
        tiling = subdivide(a, depth)
        path = os.path.join(outdir, f"tiling_a{a.numerator}_{a.denominator}_d{depth}.svg")
        with open(path, "w") as handle:
            handle.write(tiling_svg(tiling))
        print(f"{path}: {tiling.tile_count} tiles")

    system = build_interval_system(make_graph(1, [(1, 1, 2), (1, 1, 2)]), 0.5)
    strip = os.path.join(outdir, "two_loop_cover.svg")
    with open(strip, "w") as handle:
        handle.write(cover_strip_svg(system, depth=5))
    print(f"{strip}: cover strip to depth 5")

    for lam, tag in ((complex(0.5, 0.5), "halfplus"), (complex(0.366, 0.52), "twin")):
        approx = attractor_points(lam, 16)
        path = os.path.join(outdir, f"attractor_{tag}.pgm")
        write_pgm(points_pgm(list(approx.points), resolution=640), path)
        print(f"{path}: {len(approx.points)} points")


if __name__ == "__main__":
    main(*sys.argv[1:])
