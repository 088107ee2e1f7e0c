"""Command line front end.

Subcommands
    ed       exact diagonalization; CSV rows level,energy,parity
    bae      solve the zero-point equations for one labeled state
    verify   transfer-matrix and factored-eigenvalue identity checks
    thermo   closed-form densities, dispersions and energy density
    scatter  two-body scattering amplitudes
    table1   re-converge the bundled N = 6 reference table against ED

Exit codes: 0 success, 2 invalid input or failed validation, 3 solver
non-convergence, 4 I/O failure. All numbers are emitted with full float
precision (repr), so both the CSV and JSON forms round-trip exactly; JSON
encodes a complex value as {"re": x, "im": y}. AXXZ_THREADS sets the worker
count for batch re-convergence runs.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bae, thermo, tqverify
from .core import (
    build_hamiltonian,
    build_transfer_matrix,
    diagonalize_symmetric,
    hamiltonian_from_transfer,
    joint_eigenstates,
    transfer_eigenbasis,
)
from .model import (
    U_PROBE,
    ExcitationSpec,
    ModelParams,
    NonConvergenceError,
    SolverConfig,
    ZeroPointSet,
)

_QUANTITIES = ("eg", "de1", "de2", "rho", "drho1", "drho2", "delta")
_PROCESSES = ("I_I", "II_II", "I_II")
_PATTERNS = ("ground", "type_I", "type_II")


@dataclass
class RunConfig:
    """Parsed invocation; one instance drives exactly one subcommand."""

    command: str  # "ed" | "bae" | "verify" | "thermo" | "scatter" | "table1"
    n: int | None = None
    fmt: str = "csv"
    out: str | None = None
    quantity: str | None = None
    alpha: float = 0.0
    hole_pos: float | None = None
    process: str | None = None
    a1: float = 0.0
    a2: float = 0.0
    pattern: str = "ground"
    number: int | None = None
    position: int | None = None
    tol: float | None = None
    seed: int | None = None
    levels: int = 5
    samples: int = 20
    fixture: str | None = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        fields = {k: v for k, v in vars(args).items() if k in cls.__dataclass_fields__}
        return cls(**fields)


def _fnum(x) -> str:
    return repr(float(x))


def _cnum(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _emit(text: str, out: str | None):
    if out is None:
        print(text)
    else:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _threads() -> int:
    raw = os.environ.get("AXXZ_THREADS", "1")
    try:
        w = int(raw)
    except ValueError:
        raise ValueError(f"AXXZ_THREADS must be an integer, got {raw!r}") from None
    return max(1, w)


# ---------------------------------------------------------------------------
# subcommands


def run_ed(cfg: RunConfig):
    params = ModelParams(n_sites=cfg.n)
    res = diagonalize_symmetric(build_hamiltonian(params))
    rows = []
    for i, e in enumerate(res.eigenvalues):
        p = int(res.parity[i]) if res.parity is not None else None
        rows.append({"level": i + 1, "energy": float(e), "parity": p})
    if cfg.fmt == "json":
        text = json.dumps({"n": cfg.n, "levels": rows}, indent=1)
    else:
        text = "\n".join(
            f"{r['level']},{_fnum(r['energy'])},{'' if r['parity'] is None else r['parity']}"
            for r in rows
        )
    return 0, text


def _quantum_numbers(cfg: RunConfig):
    if cfg.pattern == "ground":
        return bae.ground_numbers(cfg.n)
    if cfg.pattern == "type_I":
        if cfg.number is None:
            raise ValueError("type_I needs --number (the half-line quantum number J)")
        return bae.type_one_numbers(cfg.n, cfg.number)
    if cfg.number is not None and cfg.position is None:
        raise ValueError("type_II takes --position, not --number")
    if cfg.position is None:
        raise ValueError("type_II needs --position (1-based gap slot)")
    return bae.type_two_numbers(cfg.n, cfg.position)


def run_bae(cfg: RunConfig):
    params = ModelParams(n_sites=cfg.n)
    qn = _quantum_numbers(cfg)
    scfg = SolverConfig(tol=cfg.tol) if cfg.tol else SolverConfig()
    zps = bae.solve_newton(bae.seed_from_quantum_numbers(qn, params), params, scfg)
    pattern = bae.classify_roots(zps, tol=0.1)
    lams = zps.shifted
    if cfg.fmt == "json":
        text = json.dumps({
            "n": cfg.n,
            "pattern": cfg.pattern,
            "zeros": [_cnum(z) for z in zps.zeros],
            "lambdas": [_cnum(x) for x in lams],
            "energy": zps.energy,
            "iterations": zps.iterations,
            "residual": zps.residual,
            "classified": pattern.name,
        }, indent=1)
    else:
        lines = [
            f"root,{j},{_fnum(z.real)},{_fnum(z.imag)},{_fnum(x.real)},{_fnum(x.imag)}"
            for j, (z, x) in enumerate(zip(zps.zeros, lams))
        ]
        lines.append(f"energy,{_fnum(zps.energy)}")
        lines.append(f"iterations,{zps.iterations}")
        lines.append(f"residual,{_fnum(zps.residual)}")
        lines.append(f"classified,{pattern.name}")
        text = "\n".join(lines)
    return 0, text


def run_verify(cfg: RunConfig):
    n = cfg.n if cfg.n is not None else 4
    if n > 8:
        raise ValueError("verify is limited to n <= 8 (dense transfer matrices)")
    rng = np.random.default_rng(cfg.seed)
    thetas = tuple(rng.uniform(-0.1, 0.1, n)) if cfg.seed is not None else None
    params = ModelParams(n_sites=n, thetas=thetas)

    checks = []

    def add(name, value, threshold):
        checks.append({
            "name": name,
            "value": float(value),
            "threshold": threshold,
            "ok": bool(value < threshold),
        })

    t_probe = build_transfer_matrix(U_PROBE, params)
    pair_rng = np.random.default_rng(913 if cfg.seed is None else cfg.seed + 1)
    worst = 0.0
    for _ in range(3):
        u, v = (complex(*pair_rng.uniform(-0.8, 0.8, 2)) for _ in range(2))
        a = build_transfer_matrix(u, params)
        b = build_transfer_matrix(v, params)
        worst = max(worst, np.linalg.norm(a @ b - b @ a)
                    / (np.linalg.norm(a) * np.linalg.norm(b)))
    add("transfer_commutator", worst, 1e-10)

    shifted = build_transfer_matrix(U_PROBE + 1j * np.pi, params)
    add("quasi_periodicity",
        np.linalg.norm(shifted - (-1) ** (n - 1) * t_probe) / np.linalg.norm(t_probe),
        1e-10)

    th0 = params.theta_array[0]
    prod = build_transfer_matrix(th0, params) @ build_transfer_matrix(th0 - params.eta, params)
    target = -tqverify.a_function(th0, params) * tqverify.d_function(th0 - params.eta, params)
    add("inversion_identity",
        np.linalg.norm(prod - target * np.eye(2 ** n)) / abs(target * 2 ** (n / 2)),
        1e-8)

    if thetas is None:
        h = build_hamiltonian(params)
        add("hamiltonian_from_transfer",
            np.linalg.norm(hamiltonian_from_transfer(params) - h) / np.linalg.norm(h),
            1e-6)

    if thetas is None:
        vals, vecs = joint_eigenstates(params)
    else:
        vals, vecs = transfer_eigenbasis(params)
    idx = sorted(set(np.linspace(0, len(vals) - 1, cfg.levels).astype(int)))
    bil, cub, f3qp, band = 0.0, 0.0, 0.0, 0.0
    for i in idx:
        f = tqverify.spectral_function_from_state(vecs[:, i], params)
        bil = max(bil, tqverify.verify_bilinear(f, params)["max_residual"])
        cub = max(cub, tqverify.verify_cubic(f, params, cfg.samples)["max_relative_residual"])
        f3qp = max(f3qp, tqverify.verify_f3_properties(f, params)["quasi_periodicity"])
        band = max(band, tqverify.functional_form_check(vecs[:, i], params))
    add("bilinear_identity", bil, 1e-8)
    add("cubic_identity", cub, 1e-6)
    add("f3_quasi_periodicity", f3qp, 1e-8)
    add("fourier_band", band, 1e-8)

    ok = all(c["ok"] for c in checks)
    if cfg.fmt == "json":
        text = json.dumps({"n": n, "seed": cfg.seed, "levels": [int(i) for i in idx],
                           "checks": checks, "ok": ok}, indent=1)
    else:
        lines = []
        if cfg.seed is not None:
            lines.append(f"seed,{cfg.seed}")
        lines += [
            f"check,{c['name']},{_fnum(c['value'])},{c['threshold']:g},"
            f"{'ok' if c['ok'] else 'FAIL'}"
            for c in checks
        ]
        text = "\n".join(lines)
    return (0 if ok else 2), text


_GRID = np.linspace(-5.0, 5.0, 201)


def run_thermo(cfg: RunConfig):
    q = cfg.quantity
    if q == "eg":
        return 0, _scalar_out(cfg, {"quantity": q}, thermo.ground_energy_density())
    if q in ("de1", "de2"):
        kind = "type_I" if q == "de1" else "type_II"
        val = thermo.excitation_energy(ExcitationSpec(kind, cfg.alpha))
        return 0, _scalar_out(cfg, {"quantity": q, "alpha": cfg.alpha}, val)
    if q == "delta":
        hp = cfg.hole_pos if cfg.hole_pos is not None else 0.0
        return 0, _scalar_out(cfg, {"quantity": q, "hole_pos": hp}, thermo.hole_delta(hp))
    if q == "rho":
        if cfg.n is None:
            vals = [float(thermo.rho_bulk(x)) for x in _GRID]
            atoms = []
        else:
            if cfg.hole_pos is None:
                raise ValueError("finite-size rho needs --hole-pos")
            profile = thermo.ground_profile(cfg.hole_pos, cfg.n)
            vals = [float(profile.smooth(x)) for x in _GRID]
            atoms = list(profile.holes)
        return 0, _grid_out(cfg, q, vals, atoms)
    # drho1 / drho2 are finite-size corrections; n is mandatory
    if cfg.n is None:
        raise ValueError(f"{q} needs --n (it scales like 1/N)")
    kind = "type_I" if q == "drho1" else "type_II"
    spec = ExcitationSpec(kind, cfg.alpha)
    vals = [float(thermo.delta_rho(spec, x, cfg.n)) for x in _GRID]
    atoms = list(thermo.excitation_profile(spec, cfg.n).holes) if kind == "type_II" else []
    return 0, _grid_out(cfg, q, vals, atoms)


def _scalar_out(cfg: RunConfig, meta: dict, value: float) -> str:
    if cfg.fmt == "json":
        return json.dumps({**meta, "value": float(value)})
    return _fnum(value)


def _grid_out(cfg: RunConfig, q: str, vals, atoms) -> str:
    if cfg.fmt == "json":
        return json.dumps({
            "quantity": q,
            "alpha": cfg.alpha,
            "n": cfg.n,
            "lambda": [float(x) for x in _GRID],
            "values": [float(v) for v in vals],
            "atoms": [{"position": float(p), "weight": float(w)} for p, w in atoms],
        }, indent=1)
    lines = [f"{_fnum(x)},{_fnum(v)}" for x, v in zip(_GRID, vals)]
    lines += [f"atom,{_fnum(p)},{_fnum(w)}" for p, w in atoms]
    return "\n".join(lines)


def run_scatter(cfg: RunConfig):
    amp = thermo.smatrix(cfg.process, cfg.a1, cfg.a2)
    v = amp.value
    re = v.real if v.real != 0 else 0.0
    im = v.imag if v.imag != 0 else 0.0
    if cfg.fmt == "json":
        text = json.dumps({
            "process": amp.process, "a1": cfg.a1, "a2": cfg.a2, "value": _cnum(v),
        })
    else:
        text = f"{re:g}{im:+g}i"
    return 0, text


def _bundled_fixture() -> str:
    from importlib.resources import files

    return str(files("axxz").joinpath("data/table1.csv"))


def _load_fixture(path: str):
    """Parse and validate the reference table; any defect reports as corrupt."""
    import csv

    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for i, raw in enumerate(reader):
            if not raw or (i == 0 and raw[0].strip() == "level"):
                continue
            if len(raw) != 12:
                raise ValueError(f"fixture row {i + 1}: expected 12 fields, got {len(raw)}")
            try:
                level = int(raw[0])
                nums = [float(x) for x in raw[1:]]
            except ValueError:
                raise ValueError(f"fixture row {i + 1}: non-numeric field") from None
            if not all(np.isfinite(nums)):
                raise ValueError(f"fixture row {i + 1}: non-finite value")
            lams = [complex(nums[2 * k], nums[2 * k + 1]) for k in range(5)]
            rows.append({"level": level, "lambdas": lams, "energy": nums[10]})
    if not rows:
        raise ValueError("fixture is empty")
    return rows


def run_table1(cfg: RunConfig):
    tol = cfg.tol if cfg.tol is not None else 1e-3
    path = cfg.fixture or _bundled_fixture()
    try:
        rows = _load_fixture(path)
    except ValueError as exc:
        return 2, f"corrupted fixture: {exc}"

    params = ModelParams(n_sites=6)
    ed = diagonalize_symmetric(build_hamiltonian(params), want_vectors=False)
    ed_vals = np.asarray(ed.eigenvalues)

    def solve_row(row):
        seed = ZeroPointSet.from_shifted(row["lambdas"])
        zps = bae.solve_newton(seed, params, SolverConfig())
        i = int(np.argmin(np.abs(ed_vals - zps.energy)))
        return {
            "level": row["level"],
            "energy_fixture": row["energy"],
            "energy_solved": zps.energy,
            "energy_ed": float(ed_vals[i]),
            "delta_fixture": abs(zps.energy - row["energy"]),
            "delta_ed": abs(zps.energy - ed_vals[i]),
        }

    workers = _threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve_row, rows))
    else:
        results = [solve_row(r) for r in rows]

    failed = 0
    for r in results:
        r["ok"] = r["delta_fixture"] <= tol and r["delta_ed"] <= 1e-8
        failed += 0 if r["ok"] else 1

    if cfg.fmt == "json":
        text = json.dumps({"tol": tol, "rows": results, "failed": failed}, indent=1)
    else:
        lines = [
            f"{r['level']},{_fnum(r['energy_fixture'])},{_fnum(r['energy_solved'])},"
            f"{_fnum(r['energy_ed'])},{_fnum(r['delta_fixture'])},"
            f"{_fnum(r['delta_ed'])},{'OK' if r['ok'] else 'FAIL'}"
            for r in results
        ]
        lines.append(f"summary,rows,{len(results)},failed,{failed}")
        text = "\n".join(lines)
    return (0 if failed == 0 else 2), text


# ---------------------------------------------------------------------------
# parser and entry point

_DISPATCH = {
    "ed": run_ed,
    "bae": run_bae,
    "verify": run_verify,
    "thermo": run_thermo,
    "scatter": run_scatter,
    "table1": run_table1,
}


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="write output to a file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="axxz",
        description="antiperiodic XXZ chain at eta = i*pi/3: diagonalization, "
                    "zero-point equations, identity checks, thermodynamics",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ed", help="diagonalize the chain; rows level,energy,parity")
    p.add_argument("--n", type=int, required=True, help="number of sites")
    _add_common(p)

    p = sub.add_parser("bae", help="solve the zero-point equations for one labeling")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pattern", choices=_PATTERNS, default="ground")
    p.add_argument("--number", type=int, default=None, help="half-line number J (type_I)")
    p.add_argument("--position", type=int, default=None, help="1-based gap slot (type_II)")
    p.add_argument("--tol", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("verify", help="transfer-matrix and factored-form identity checks")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--levels", type=int, default=5, help="eigenstates to spot-check")
    p.add_argument("--samples", type=int, default=20, help="points for the cubic identity")
    p.add_argument("--seed", type=int, default=None,
                   help="draw random inhomogeneities in [-0.1, 0.1] with this seed")
    _add_common(p)

    p = sub.add_parser("thermo", help="closed-form limit quantities")
    p.add_argument("--quantity", choices=_QUANTITIES, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--hole-pos", dest="hole_pos", type=float, default=None)
    p.add_argument("--n", type=int, default=None, help="finite size for 1/N corrections")
    _add_common(p)

    p = sub.add_parser("scatter", help="two-body scattering amplitude")
    p.add_argument("--process", choices=_PROCESSES, required=True)
    p.add_argument("--a1", type=float, default=0.0)
    p.add_argument("--a2", type=float, default=0.0)
    _add_common(p)

    p = sub.add_parser("table1", help="re-converge the bundled N = 6 table against ED")
    p.add_argument("--tol", type=float, default=None, help="energy tolerance (default 1e-3)")
    p.add_argument("--fixture", default=None, help="alternate fixture CSV path")
    _add_common(p)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig.from_args(args)
    try:
        code, text = _DISPATCH[cfg.command](cfg)
        _emit(text, cfg.out)
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return code


if __name__ == "__main__":
    raise SystemExit(main())
