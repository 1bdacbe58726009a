# Background
# ----------
#  On the left edge of the brick strip the ratio (|a|^2-|b|^2)/(|a|^2+|b|^2)
#  tells which way probability flows.  Following one band across the zone,
#  the current swings between almost fully up and almost fully down: the left
#  edge acts as a one-way channel whose direction follows the group velocity.
#
# Shown here
# ----------
#  - continuing a band from theta = 0 through the zone
#  - the left-edge current along the band

import math
import os

import numpy as np

from qgstrip import build_brick
from qgstrip.cli import sweep_current
from qgstrip.plots import current_svg

OUT = os.path.join(os.path.dirname(__file__), "out")


def main():
    brick = build_brick(2, 1.0, 1.0, math.sqrt(2.0))
    rows = sweep_current(brick, 101.133, 24, 0.002, 1e-8)
    print(" theta/pi        k      current")
    for theta, k, c in rows:
        print(f"  {theta / math.pi:+.3f}  {k:10.5f}  {c:+.4f}")

    # the current should follow dk/dtheta, the group velocity along the strip
    t = np.array([r[0] for r in rows])
    k = np.array([r[1] for r in rows])
    c = np.array([r[2] for r in rows])
    vg = np.gradient(k, t)
    print(f"corr(current, dk/dtheta) = {np.corrcoef(c, vg)[0, 1]:+.3f}")

    os.makedirs(OUT, exist_ok=True)
    with open(os.path.join(OUT, "current.svg"), "w") as fh:
        fh.write(current_svg(rows))


if __name__ == "__main__":
    main()
