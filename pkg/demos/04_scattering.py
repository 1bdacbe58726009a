# Background
# ----------
#  The vertex condition (U-I)psi + i(U+I)psi' = 0 with U a cyclic shift gives
#  a k-dependent scattering matrix S(k).  At k = 1 it is U itself (perfect
#  rotation); as k grows it tends to the identity for odd degree and stays
#  away from it for even degree, where every channel ends up with weight 1/d.
#
# Shown here
# ----------
#  - S(k) for d = 3 at a few momenta
#  - transmission probabilities |S_ij|^2 against k for d = 3 and d = 4

import os

import numpy as np

from qgstrip import cyclic_matrix, scattering, transmission_probabilities
from qgstrip.plots import plot_svg

OUT = os.path.join(os.path.dirname(__file__), "out")


def main():
    np.set_printoptions(precision=4, suppress=True)
    u3 = cyclic_matrix(3)
    for k in (1.0, 3.0, 100.0):
        print(f"S(k={k:g}) for d=3:\n{scattering(u3, k).matrix.real}\n")

    ks = np.logspace(-2, 4, 200)
    series = []
    for d in (3, 4):
        u = cyclic_matrix(d)
        p = np.array([transmission_probabilities(u, k) for k in ks])
        series.append(dict(x=np.log10(ks), y=p[:, 0, 0], label=f"d={d}: reflect"))
        series.append(dict(x=np.log10(ks), y=p[:, 0, 1], label=f"d={d}: to next"))
        print(f"d={d} at k=1e4: row 0 = {p[-1, 0]}")

    os.makedirs(OUT, exist_ok=True)
    with open(os.path.join(OUT, "scattering.svg"), "w") as fh:
        fh.write(plot_svg(series, "log10 k", "probability", title="cyclic coupling"))


if __name__ == "__main__":
    main()
