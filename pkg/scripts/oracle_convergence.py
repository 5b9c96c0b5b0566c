"""Segment-chain error against the closed-form moments as N doubles.

Prints one row per N for both stepping schemes plus the Richardson-extrapolated
Strang result, and the empirical order between successive rows.
"""

import argparse
import math

from twpa_lab.distributed import DistributedConfig, output_moments
from twpa_lab.oracle import ChainSpec, moment_distance, propagate, propagate_extrapolated


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--length", type=float, default=3.0)
    p.add_argument("--kappa-signal", type=float, default=0.3)
    p.add_argument("--kappa-idler", type=float, default=0.1)
    p.add_argument("--delta-k", type=float, default=0.2)
    p.add_argument("--min-log2", type=int, default=6)
    p.add_argument("--max-log2", type=int, default=14)
    args = p.parse_args()

    c = DistributedConfig(1.0, 1.0, args.length, args.kappa_signal, args.kappa_idler, args.delta_k)
    exact = output_moments(c)
    print(f"{'N':>7} {'first-order':>12} {'p':>6} {'strang':>12} {'p':>6} {'extrapolated':>13}")
    prev = None
    for k in range(args.min_log2, args.max_log2 + 1):
        n = 2**k
        e1 = moment_distance(propagate(ChainSpec(c, n, "first-order")), exact)
        e2 = moment_distance(propagate(ChainSpec(c, n, "strang")), exact)
        ex = moment_distance(propagate_extrapolated(ChainSpec(c, n, "strang")), exact)
        p1 = p2 = float("nan")
        if prev is not None:
            p1, p2 = math.log2(prev[0] / e1), math.log2(prev[1] / e2)
        print(f"{n:>7d} {e1:12.3e} {p1:6.3f} {e2:12.3e} {p2:6.3f} {ex:13.3e}")
        prev = (e1, e2)


if __name__ == "__main__":
    main()
