"""Technical debt at the Nash corner as N grows, with log-log and a + bN^k fits.

    python scripts/debt_scaling.py --n 4,8,16,32,64
"""

import argparse

import numpy as np

from meshtrap.calibration import baseline_scenario
from meshtrap.welfare import debt_scaling_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="4,8,16,32")
    args = ap.parse_args()
    ns = [int(v) for v in args.n.split(",")]

    curve = debt_scaling_curve(baseline_scenario(), ns)
    for n, t in zip(curve.n_values, curve.totals):
        print(f"N={n:>4}  TD={t:12.4f}  TD/N(N-1)={t / (n * (n - 1)):.6f}")
    print(f"log-log slope {curve.exponent:.4f}")
    # local slopes drift toward 2 as the -N term in N(N-1) fades
    x, y = np.log(curve.n_values), np.log(curve.totals)
    print("local slopes:", " ".join(f"{v:.4f}" for v in np.diff(y) / np.diff(x)))
    print(f"SSE a+bN^2 {curve.sse_quadratic:.4g}  vs  a+bN {curve.sse_linear:.4g}")


if __name__ == "__main__":
    main()
