"""Scan the CHSH statistic around the optimal analyzer angles.

Prints a CSV of S versus a rotation offset applied to detector 1's two
settings (rotating both sides together leaves S invariant), plus the
correlation curve at detector-2 angle 0.  Output is plot-ready; pipe to
a file and plot the two blocks separately.
"""

import argparse
import math

import numpy as np

from phasorlab import epr


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=73)
    parser.add_argument("--parity", choices=("plus", "minus"), default="plus")
    args = parser.parse_args()

    pair = epr.PhotonPairState(args.parity)
    a, ap, b, bp = epr.CHSH_OPTIMAL_ANGLES

    print("offset_deg,S")
    for offset in np.linspace(-90.0, 90.0, args.points):
        d = math.radians(offset)
        s = epr.chsh_S(a + d, ap + d, b, bp, pair)
        print(f"{offset:.4f},{s:.12f}")

    print()
    print("theta1_deg,E")
    for theta in np.linspace(0.0, 180.0, args.points):
        e = epr.correlation_E(math.radians(theta), 0.0, pair)
        print(f"{theta:.4f},{e:.12f}")


if __name__ == "__main__":
    main()
