"""Sweep the relative phase and weight of a|1> + b|2> and classify each state.

Prints the off-diagonal norm next to the verdict; the pure superposition is
never counted, while its dephased mixture always is.
"""

import argparse
import cmath

import numpy as np

from qsetk.fock import density_of, make_state, mixture, number_verdict, off_diagonal_norm


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--steps", type=int, default=6)
    args = p.parse_args(argv)

    print(f"{'|a|^2':>6} {'phase':>6} {'norm':>9}  pure verdict / mixed verdict")
    for w in np.linspace(0, 1, args.steps):
        for phase in (0.0, np.pi / 2):
            amps = [(1, np.sqrt(w)), (2, np.sqrt(1 - w) * cmath.exp(1j * phase))]
            amps = [(n, a) for n, a in amps if abs(a) > 0]
            rho = density_of(make_state(amps))
            mixed = mixture([(n, abs(a) ** 2) for n, a in amps])
            print(f"{w:6.2f} {phase:6.2f} {off_diagonal_norm(rho):9.6f}  "
                  f"{number_verdict(rho)} / {number_verdict(mixed)}")


if __name__ == "__main__":
    main()
