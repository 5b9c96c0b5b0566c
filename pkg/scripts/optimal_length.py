"""Numerically optimal device length against the large-gain estimate.

Sweeps the loss asymmetry ``eps`` at fixed average decay rate and prints the
length minimising the symmetric-quadrature variance next to the estimate.
"""

import argparse

import numpy as np

from twpa_lab.distributed import DistributedConfig, estimated_optimal_length, optimal_length, squeezing


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--kappa-bar", type=float, default=0.2)
    p.add_argument("--eps", type=float, nargs="*", default=list(np.geomspace(0.0125, 0.2, 5)))
    args = p.parse_args()
    print(f"{'eps':>8} {'L_opt':>9} {'S(L_opt)':>10} {'estimate':>9} {'S(est)':>10}")
    for eps in args.eps:
        c = DistributedConfig.from_average(1.0, 1.0, 1.0, args.kappa_bar, eps)
        lo, est = optimal_length(c), estimated_optimal_length(c)
        print(f"{eps:8.4f} {lo:9.5f} {squeezing(c.with_length(lo)):10.6f} {est:9.5f} {squeezing(c.with_length(est)):10.6f}")


if __name__ == "__main__":
    main()
