#!/usr/bin/env python3
"""Re-converge the bundled N = 6 reference table and report per level.

Usage: python scripts/run_table1.py [--tol 1e-3]
"""
import argparse

import numpy as np

from axxz import bae, cli, core
from axxz.model import ModelParams, SolverConfig, ZeroPointSet


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--tol", type=float, default=1e-3)
    args = ap.parse_args()

    rows = cli._load_fixture(cli._bundled_fixture())
    params = ModelParams(n_sites=6)
    ed = core.diagonalize_symmetric(core.build_hamiltonian(params), want_vectors=False)

    print(f"{'lvl':>3} {'E(table)':>10} {'E(solved)':>18} {'dE(table)':>11} "
          f"{'dE(ed)':>11} {'pattern':>12} its")
    worst_fix, worst_ed = 0.0, 0.0
    for row in rows:
        zps = bae.solve_newton(ZeroPointSet.from_shifted(row["lambdas"]),
                               params, SolverConfig())
        d_fix = abs(zps.energy - row["energy"])
        d_ed = float(np.min(np.abs(ed.eigenvalues - zps.energy)))
        pat = bae.classify_roots(zps, tol=0.1)
        worst_fix, worst_ed = max(worst_fix, d_fix), max(worst_ed, d_ed)
        print(f"{row['level']:>3} {row['energy']:>10.4f} {zps.energy:>18.12f} "
              f"{d_fix:>11.2e} {d_ed:>11.2e} {pat.name:>12} {zps.iterations}")
    print(f"\nworst deviation from table {worst_fix:.2e} (tol {args.tol:g}), "
          f"from ED {worst_ed:.2e}")
    return 0 if worst_fix <= args.tol else 1


if __name__ == "__main__":
    raise SystemExit(main())
