"""Governance regime welfare at the baseline across central cost and hybrid correction.

    python scripts/regime_table.py --gammas 1,10,100,1e6 --corrections 0.5,0.7,0.9
"""

import argparse

from meshtrap.calibration import baseline_scenario
from meshtrap.governance import regime_comparison


def floats(text):
    return [float(v) for v in text.split(",")]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gammas", type=floats, default=[1.0, 10.0, 100.0, 1e6])
    ap.add_argument("--corrections", type=floats, default=[0.7])
    ap.add_argument("--lam", type=float, default=None, help="override the baseline lambda")
    args = ap.parse_args()

    s = baseline_scenario() if args.lam is None else baseline_scenario(lam=args.lam)
    print(f"{'gamma':>10} {'corr':>5}  ranking (welfare)")
    for gamma in args.gammas:
        for c in args.corrections:
            reports = sorted(regime_comparison(s, gamma, c), key=lambda r: r.rank)
            ranking = ", ".join(f"{r.regime} ({r.welfare:.3f})" for r in reports)
            print(f"{gamma:>10g} {c:>5.2f}  {ranking}")


if __name__ == "__main__":
    main()
