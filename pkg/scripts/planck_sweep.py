"""Monte Carlo Planck spectrum versus the closed form.

Equilibrates one mode family per dimensionless lobe energy hf/k_B T on a
log grid and prints the comparison table, including the classical
equipartition value k_B T for reference.
"""

import argparse

import numpy as np

from phasorlab import cavity


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=10 ** 6)
    parser.add_argument("--burn-in", type=int, default=10 ** 4)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--points", type=int, default=9)
    args = parser.parse_args()

    ratios = np.logspace(-0.7, 0.9, args.points)
    bath = cavity.ThermalBath(1.0)
    rows = cavity.spectrum_sweep(list(ratios), bath, args.steps, args.burn_in,
                                 args.seed)

    print("hf_over_kt,mc_mean_energy,mc_stderr,closed_form,rel_error,"
          "equipartition_kt,acceptance_rate")
    for row in rows:
        print(f"{row.frequency:.6f},{row.mc_mean_energy:.8f},"
              f"{row.mc_stderr:.2e},{row.closed_form:.8f},"
              f"{row.relative_error:.2e},1.0,{row.acceptance_rate:.4f}")


if __name__ == "__main__":
    main()
