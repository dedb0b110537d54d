"""Compare the continuous Nash solver with the grid oracle on seeded random scenarios.

    python scripts/oracle_check.py --seed 2024 --count 100 --resolution 0.01
"""

import argparse
import time

import numpy as np

from meshtrap.equilibrium import grid_oracle, nash_equilibrium
from meshtrap.model import Profile, domain_profit
from meshtrap.sampling import random_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--resolution", type=float, default=0.01)
    ap.add_argument("--max-domains", type=int, default=6)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    h = args.resolution
    t0 = time.perf_counter()
    devs = []
    for k in range(args.count):
        s = random_scenario(rng, max_domains=args.max_domains)
        ne = nash_equilibrium(s).profile
        orc = grid_oracle(s, h)
        dev = max(np.max(np.abs(ne.q - orc.q)), np.max(np.abs(ne.g - orc.g)))
        devs.append(dev)
        if dev > h + 1e-12:
            # the lattice point is still no better than the continuous optimum
            i = int(np.argmax(np.maximum(np.abs(ne.q - orc.q), np.abs(ne.g - orc.g))))
            q, g = np.array(ne.q), np.array(ne.g)
            q[i], g[i] = orc.q[i], orc.g[i]
            loss = domain_profit(s, ne, i) - domain_profit(s, Profile(q, g), i)
            print(f"scenario {k}: domain {i} off by {dev:.5f}; continuous profit exceeds lattice by {loss:.3e}")
    devs = np.array(devs)
    print(f"{np.sum(devs <= h + 1e-12)}/{args.count} within {h}; max {devs.max():.5f}; "
          f"{time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
