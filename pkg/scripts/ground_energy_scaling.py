#!/usr/bin/env python3
"""Ground energy per site versus system size.

Solves the zero-point equations for N = 8 .. nmax and compares E/N against
the closed-form density e_g = (3 - 3 sqrt 3)/2, exhibiting the finite-size
gap closing. Doubling N four times takes well under a second.
"""
import argparse
import time

from axxz import bae, thermo
from axxz.model import ModelParams


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nmax", type=int, default=128)
    args = ap.parse_args()

    eg = thermo.ground_energy_density()
    print(f"e_g = {eg:.15f}\n")
    print(f"{'N':>5} {'E/N':>20} {'E/N - e_g':>12} {'N*(E/N - e_g)':>14} its  secs")
    n = 8
    while n <= args.nmax:
        params = ModelParams(n_sites=n)
        t0 = time.monotonic()
        zps = bae.solve_newton(
            bae.seed_from_quantum_numbers(bae.ground_numbers(n), params), params
        )
        dt = time.monotonic() - t0
        per = zps.energy / n
        print(f"{n:>5} {per:>20.15f} {per - eg:>12.3e} {n * (per - eg):>14.6f} "
              f"{zps.iterations:>3} {dt:>5.2f}")
        n *= 2


if __name__ == "__main__":
    main()
