"""Repeated ionization of a pure quasiset: how many extractions, in what order.

The number of steps never depends on the seed, while the order of kinds does.
"""

import argparse
from collections import Counter

from qsetk import make_qset, make_universe
from qsetk.counting import qcard
from qsetk.fock import ionization_experiment


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--electrons", type=int, default=2)
    p.add_argument("--photons", type=int, default=1)
    p.add_argument("--runs", type=int, default=1000)
    args = p.parse_args(argv)

    profile = {k: n for k, n in (("e", args.electrons), ("ph", args.photons)) if n}
    u = make_universe(sorted(profile.items()))
    X = make_qset(u, profile)
    steps, orders = Counter(), Counter()
    for seed in range(args.runs):
        _, log = ionization_experiment(X, seed)
        steps[len(log)] += 1
        orders[" ".join(log)] += 1
    print(f"X = {X.canon()}, qcard = {qcard(X).n}")
    print(f"extraction counts over {args.runs} seeds: {dict(steps)}")
    for order, n in orders.most_common():
        print(f"  {order:<20} {n / args.runs:.3f}")


if __name__ == "__main__":
    main()
