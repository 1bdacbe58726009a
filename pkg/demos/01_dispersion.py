# Background
# ----------
#  A strip of square cells cut from a lattice whose vertices all carry the
#  cyclic coupling U = "pass the wave to the next edge".  Bloch theory reduces
#  the strip to one cell with a phase e^{i theta}; spectral momenta k are the
#  zeros of the smallest singular value of the cell's secular matrix.
#
# Shown here
# ----------
#  - scanning sigma_min over k at theta = 0 and reading off the roots
#  - sweeping theta across the zone to get the dispersion diagram
#  - flat bands pinned at k = n pi / l, where edge-localized states live

import math
import os

import numpy as np

from qgstrip import build_rectangular, dispersion, find_roots, flag_flat_bands
from qgstrip.bands import narrow_band_near
from qgstrip.secular import sigma_min
from qgstrip.plots import bands_svg, plot_svg

OUT = os.path.join(os.path.dirname(__file__), "out")


def main():
    strip = build_rectangular(3, 1.0, 1.0)
    os.makedirs(OUT, exist_ok=True)

    # sigma_min is V-shaped at each root, so roots show up as sharp dips on a log axis
    ks = np.linspace(100.0, 107.0, 3501)
    s = sigma_min(strip, ks, 0.0)
    with open(os.path.join(OUT, "sigma_min.svg"), "w") as fh:
        fh.write(plot_svg([dict(x=ks, y=s)], "k", "sigma_min / sigma_max", log_y=True,
                          title="theta = 0"))

    roots = find_roots(strip, 0.0, 100.0, 107.0)
    print("roots at theta = 0:")
    for k in roots:
        n = k / math.pi
        note = f"  ~ {round(n)} pi" if abs(n - round(n)) < 0.01 else ""
        print(f"  {k:.6f}{note}")

    bands = flag_flat_bands(dispersion(strip, 24, 100.0, 107.0, workers=4), 0.1)
    with open(os.path.join(OUT, "bands.svg"), "w") as fh:
        fh.write(bands_svg(bands))
    print(f"{len(bands.points)} band points over {len(bands.theta_values)} theta values")
    for n in (32, 33, 34):
        print(f"flat band at {n} pi: {narrow_band_near(bands, n * math.pi)}")
    print(f"figures written to {OUT}")


if __name__ == "__main__":
    main()
