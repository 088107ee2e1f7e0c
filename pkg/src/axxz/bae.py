"""Zero-point Bethe equations: residuals, damped Newton, seeds, patterns.

The N-1 zeros z_j of a transfer eigenvalue satisfy, at eta = i*pi/3 and
inhomogeneities theta_l,

    prod_l sinh(z_j - theta_l) / sinh(z_j - theta_l - 2 eta)
        = prod_{k != j} sinh(z_j - z_k + eta) / sinh(z_j - z_k - eta),

and the energy is E = 2 sinh(eta) sum_j coth(z_j) + N cosh(eta). Residuals
are taken in logarithmic form, reduced mod 2 pi i, which keeps Newton steps
well-scaled and makes branch bookkeeping explicit.
"""
from __future__ import annotations

import warnings

import numpy as np

from . import thermo
from .model import (
    COSH_ETA,
    ETA,
    SINH_ETA,
    Excitation,
    ModelParams,
    NonConvergenceError,
    NonPhysicalRootsError,
    QuantumNumberSet,
    RootPattern,
    SingularConfigurationError,
    SolverConfig,
    SpectrumResult,
    ZeroPointSet,
)

_POLE_TOL = 1e-14
_STRING_KICK = 0.045  # nudge string seeds off the exact line, where the
                      # Jacobian of an ideal string is singular


def canonicalize(z):
    """Reduce imaginary parts to (-pi/2, pi/2] using i*pi periodicity."""
    z = np.asarray(z, dtype=complex)
    im = np.mod(z.imag + np.pi / 2, np.pi) - np.pi / 2
    im = np.where(np.isclose(im, -np.pi / 2, atol=1e-9), np.pi / 2, im)
    return z.real + 1j * im


def _zeros_of(zeros) -> np.ndarray:
    if isinstance(zeros, ZeroPointSet):
        return np.asarray(zeros.zeros, dtype=complex)
    return np.asarray(zeros, dtype=complex)


def bae_residual(zeros, params: ModelParams) -> np.ndarray:
    """Per-root logarithmic residual of the zero-point equations.

    Entry j is log(LHS_j) - log(RHS_j) with the principal branch, shifted by
    the integer multiple of 2 pi i that brings it into (-pi, pi]. A residual
    near zero for every j certifies a solution on a consistent branch.
    """
    z = _zeros_of(zeros)
    th = params.theta_array
    n = len(z)
    out = np.zeros(n, dtype=complex)
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(n):
            num = np.sinh(z[j] - th)
            den = np.sinh(z[j] - th - 2 * ETA)
            others = np.delete(z, j)
            rnum = np.sinh(z[j] - others + ETA)
            rden = np.sinh(z[j] - others - ETA)
            for fac in (num, den, rnum, rden):
                if fac.size and np.min(np.abs(fac)) < _POLE_TOL:
                    raise SingularConfigurationError(
                        f"root {j} sits on a pole of the equations"
                    )
            d = np.sum(np.log(num) - np.log(den)) - np.sum(np.log(rnum) - np.log(rden))
            if np.isfinite(d):
                d -= 2j * np.pi * np.round(d.imag / (2 * np.pi))
            out[j] = d
    return out


def bae_jacobian(zeros, params: ModelParams) -> np.ndarray:
    """Analytic Jacobian of bae_residual (coth derivatives of the logs)."""
    z = _zeros_of(zeros)
    th = params.theta_array
    n = len(z)
    jac = np.zeros((n, n), dtype=complex)
    for j in range(n):
        diag = np.sum(1 / np.tanh(z[j] - th) - 1 / np.tanh(z[j] - th - 2 * ETA))
        for k in range(n):
            if k == j:
                continue
            cp = 1 / np.tanh(z[j] - z[k] + ETA)
            cm = 1 / np.tanh(z[j] - z[k] - ETA)
            jac[j, k] = cp - cm
            diag -= cp - cm
        jac[j, j] = diag
    return jac


def energy_from_zeros(zeros, params: ModelParams, imag_tol: float = 1e-8) -> float:
    """E = 2 sinh(eta) sum coth(z_j) + N cosh(eta); must come out real."""
    z = _zeros_of(zeros)
    e = 2 * SINH_ETA * np.sum(1 / np.tanh(z)) + params.n_sites * COSH_ETA
    if abs(e.imag) > imag_tol:
        raise NonPhysicalRootsError(
            f"energy has imaginary part {e.imag:.3e}; root set is not physical"
        )
    return float(e.real)


def solve_newton(initial, params: ModelParams, cfg: SolverConfig = SolverConfig()) -> ZeroPointSet:
    """Damped Newton iteration on the logarithmic residuals.

    Full analytic Jacobian, backtracking line search that halves the step
    until the residual norm drops. Near a solution convergence is quadratic;
    a converged input returns in zero iterations.
    """
    z = canonicalize(_zeros_of(initial))
    qn = initial.quantum_numbers if isinstance(initial, ZeroPointSet) else None
    nr = None
    for it in range(cfg.max_iter):
        r = bae_residual(z, params)
        nr = np.linalg.norm(r)
        if not np.isfinite(nr):
            raise NonConvergenceError(
                f"residual overflowed after {it} iterations; seed is unusable",
                float("inf"),
            )
        if nr < cfg.tol:
            _check_collisions(z, cfg.dedupe_tol)
            return ZeroPointSet(
                zeros=canonicalize(z),
                energy=energy_from_zeros(z, params),
                residual=float(nr),
                iterations=it,
                quantum_numbers=qn,
            )
        try:
            step = np.linalg.solve(bae_jacobian(z, params), -r)
        except np.linalg.LinAlgError as exc:
            raise NonConvergenceError(
                f"singular Jacobian after {it} iterations; re-seed", float(nr)
            ) from exc
        scale = cfg.damping
        for _ in range(40):
            trial = z + scale * step
            if np.linalg.norm(bae_residual(trial, params)) < nr:
                break
            scale /= 2
        z = z + scale * step
    raise NonConvergenceError(
        f"no convergence in {cfg.max_iter} iterations (residual {nr:.3e})",
        float(nr),
    )


def _check_collisions(z, tol):
    zc = canonicalize(z)
    n = len(zc)
    for j in range(n):
        for k in range(j + 1, n):
            if abs(zc[j] - zc[k]) < tol:
                raise ValueError(
                    f"roots {j} and {k} collided within {tol:g}; solve is invalid"
                )


# ---------------------------------------------------------------------------
# quantum numbers and seeding


def ground_numbers(n: int) -> QuantumNumberSet:
    """Consecutive bulk integers -N/2+1 .. N/2-1, no excitation."""
    _require_even(n)
    return QuantumNumberSet(bulk=tuple(range(-n // 2 + 1, n // 2)))


def type_one_numbers(n: int, j: int) -> QuantumNumberSet:
    """N-2 consecutive half-odd bulk numbers plus one half-line number J."""
    _require_even(n)
    if not -n // 2 + 1 <= j <= n // 2 - 1:
        raise ValueError(f"J = {j} outside the admissible window for N = {n}")
    return QuantumNumberSet(
        bulk=_half_odd(n - 2),
        excitations=(Excitation("type_I", float(j)),),
    )


def type_two_numbers(n: int, position: int) -> QuantumNumberSet:
    """Half-odd bulk slots with a gap; the string number is tied to the gap.

    The N-2 descending half-odd slots lose the one at 1-based position
    `position`, and the string takes K = (N-1)/2 - position.
    """
    _require_even(n)
    if not 1 <= position <= n - 2:
        raise ValueError(f"position {position} outside 1..{n - 2}")
    slots = sorted(_half_odd(n - 2), reverse=True)
    gap = slots.pop(position - 1)
    k = (n - 1) / 2 - position
    del gap
    return QuantumNumberSet(
        bulk=tuple(slots),
        excitations=(Excitation("type_II", k),),
    )


def enumerate_seed_sets(n: int):
    """Every labeling used for the full-spectrum scans.

    For N = 4 the ground plus single-excitation classes leave two levels
    uncovered; those are the two-excitation labelings appended at the end
    (one pair of half-line roots, and one half-line root plus one string).
    """
    _require_even(n)
    sets = [("ground", ground_numbers(n))]
    for j in range(-n // 2 + 1, n // 2):
        sets.append((f"type_I J={j}", type_one_numbers(n, j)))
    for pos in range(1, n - 1):
        sets.append((f"type_II pos={pos}", type_two_numbers(n, pos)))
    if n == 4:
        sets.append((
            "type_I x2",
            QuantumNumberSet(
                bulk=(0.0,),
                excitations=(Excitation("type_I", -0.5), Excitation("type_I", 0.5)),
            ),
        ))
        sets.append((
            "type_I + type_II",
            QuantumNumberSet(
                bulk=(),
                excitations=(Excitation("type_I", 0.0), Excitation("type_II", 0.0)),
            ),
        ))
    return sets


def _half_odd(count: int) -> tuple:
    return tuple(-(count - 1) / 2 + i for i in range(count))


def _require_even(n: int):
    if n % 2:
        raise ValueError("quantum-number conventions are calibrated for even N only")


_THETA_SUP = {1: 2 * np.pi / 3, 2: np.pi / 3}


def _invert_theta(m: int, target: float, cutoff: float = 16.0) -> float:
    """Solve theta_m(lam) = target on the real line; saturate past the range."""
    from scipy.optimize import brentq

    sup = _THETA_SUP[m]
    t = float(np.clip(target, -sup + 1e-9, sup - 1e-9))
    edge = thermo.theta_m(cutoff, m)
    if t >= edge:
        return cutoff
    if t <= -edge:
        return -cutoff
    return brentq(lambda x: thermo.theta_m(x, m) - t, -cutoff, cutoff, xtol=1e-12)


def _refine_bulk_newton(lam, numbers, n, tol=1e-13, max_iter=60):
    """Real Newton on the logarithmic system for an all-real pattern.

    theta_1(lam_j) + (1/N) sum_k theta_2(lam_j - lam_k) = 2 pi I_j / N is the
    exact system for ground-like states; the Jacobian 2 pi a_m kernels make
    it strongly diagonally dominant, so this is stable at any N.
    """
    lam = np.array(lam, dtype=float)
    i_arr = np.asarray(numbers, dtype=float)

    def system(x):
        d = x[:, None] - x[None, :]
        th2 = np.asarray(thermo.theta_m(d + 0j, 2)).real
        np.fill_diagonal(th2, 0.0)
        return (
            np.asarray(thermo.theta_m(x + 0j, 1)).real
            + th2.sum(axis=1) / n
            - 2 * np.pi * i_arr / n
        )

    for _ in range(max_iter):
        f = system(lam)
        norm = np.linalg.norm(f)
        if norm < tol:
            break
        d = lam[:, None] - lam[None, :]
        a2 = thermo.a_m(d, 2)
        np.fill_diagonal(a2, 0.0)
        jac = -2 * np.pi * a2 / n
        np.fill_diagonal(jac, 2 * np.pi * thermo.a_m(lam, 1) + 2 * np.pi * a2.sum(axis=1) / n)
        step = np.linalg.solve(jac, -f)
        scale = 1.0
        for _ in range(30):
            if np.linalg.norm(system(lam + scale * step)) < norm:
                break
            scale /= 2
        lam = lam + scale * step
    return lam


def _refine_sweeps(lam, alphas, betas, qn: QuantumNumberSet, n: int,
                   sweeps: int = 80, damp: float = 0.7, step_cap: float = 0.5):
    """Damped coordinate sweeps of the idealized logarithmic system.

    Bulk roots, half-line centers and string centers each get their own
    branch equation; steps are capped because the theta inverses are
    exponentially sensitive near the edges of their ranges.
    """
    th = thermo.theta_m
    i_bulk = np.asarray(qn.bulk, dtype=float)
    j_half = np.array([e.number for e in qn.excitations if e.kind == "type_I"])
    k_str = np.array([e.number for e in qn.excitations if e.kind == "type_II"])

    def capped(old, target_m, t):
        return old + float(np.clip(damp * (_invert_theta(target_m, t) - old), -step_cap, step_cap))

    for _ in range(sweeps):
        lam_new = lam.copy()
        for idx in range(len(lam)):
            t = (
                2 * np.pi * i_bulk[idx] / n
                - sum(th(lam[idx] - lk, 2) for lk in lam) / n
                + sum(th(lam[idx] - a, 1) for a in alphas) / n
                + sum(th(lam[idx] - b, 2) for b in betas) / n
            )
            lam_new[idx] = capped(lam[idx], 1, t)
        al_new = alphas.copy()
        for idx in range(len(alphas)):
            t = (
                2 * np.pi * j_half[idx] / n
                - sum(th(alphas[idx] - lk, 1) for lk in lam) / n
                + sum(th(alphas[idx] - a, 2) for i2, a in enumerate(alphas) if i2 != idx) / n
                + sum(th(alphas[idx] - b, 1) for b in betas) / n
            )
            al_new[idx] = capped(alphas[idx], 2, t)
        be_new = betas.copy()
        for idx in range(len(betas)):
            t = (
                2 * np.pi * k_str[idx] / n
                - sum(th(betas[idx] - lk, 2) for lk in lam) / n
                - sum(th(betas[idx] - a, 1) for a in alphas) / n
                + sum(th(betas[idx] - b, 2) for i2, b in enumerate(betas) if i2 != idx) / n
            )
            be_new[idx] = capped(betas[idx], 1, t)
        shift = 0.0
        for old, new in ((lam, lam_new), (alphas, al_new), (betas, be_new)):
            if len(old):
                shift = max(shift, float(np.max(np.abs(old - new))))
        lam, alphas, betas = lam_new, al_new, be_new
        if shift < 1e-12:
            break
    return lam, alphas, betas


def seed_from_quantum_numbers(qn: QuantumNumberSet, params: ModelParams,
                              refine: bool = True) -> ZeroPointSet:
    """Initial zero points for a quantum-number labeling.

    Every number is first placed by the infinite-size counting-function
    inverse (the decoupled one-root equation saturates for the extremal
    numbers, the counting inverse does not). With refine=True the idealized
    coupled system is then solved: exactly, by real Newton, for all-real
    patterns; by damped sweeps otherwise. String centers are assembled with
    a small kick off the ideal line.
    """
    n = params.n_sites
    if qn.n_roots != n - 1:
        raise ValueError(f"labeling yields {qn.n_roots} roots, need {n - 1}")
    lam = np.asarray(thermo.counting_inverse(np.asarray(qn.bulk) / n), dtype=float)
    alphas = np.array([thermo.counting_inverse(e.number / n)
                       for e in qn.excitations if e.kind == "type_I"])
    betas = np.array([thermo.counting_inverse(e.number / n)
                      for e in qn.excitations if e.kind == "type_II"])
    if refine:
        if len(alphas) == 0 and len(betas) == 0:
            lam = _refine_bulk_newton(lam, qn.bulk, n)
        else:
            lam, alphas, betas = _refine_sweeps(lam, alphas, betas, qn, n)
    zs = list(lam - 1j * np.pi / 6)
    zs += list(alphas - 2j * np.pi / 3)
    for b in betas:
        zs.append(b + 1j * (np.pi / 6 + _STRING_KICK))
        zs.append(b - 1j * (np.pi / 2 + _STRING_KICK))
    return ZeroPointSet(zeros=np.array(zs, dtype=complex), quantum_numbers=qn)


def solve_from_quantum_numbers(qn: QuantumNumberSet, params: ModelParams,
                               cfg: SolverConfig = SolverConfig()) -> ZeroPointSet:
    """Seed a labeling and converge it."""
    return solve_newton(seed_from_quantum_numbers(qn, params), params, cfg)


# ---------------------------------------------------------------------------
# classification and spectrum matching


def classify_roots(zeros, tol: float = 0.05) -> RootPattern:
    """Label each shifted root by the line its imaginary part sits on.

    real: |Im| < tol. half_line: within tol of -pi/2 (mod pi). string
    member: within tol of +-pi/3, paired up/down by nearest real part.
    Anything else is labeled "other" with a warning. String deviations from
    the exact line are reported through the centers, not modeled away.
    """
    zps = zeros if isinstance(zeros, ZeroPointSet) else ZeroPointSet(zeros=_zeros_of(zeros))
    lam = canonicalize(zps.shifted)
    labels = []
    real_roots, half_line, ups, downs, others = [], [], [], [], []
    for x in lam:
        im = x.imag
        if abs(im) < tol:
            labels.append("real")
            real_roots.append(float(x.real))
        elif abs(abs(im) - np.pi / 2) < tol:
            labels.append("half_line")
            half_line.append(float(x.real))
        elif abs(im - np.pi / 3) < tol:
            labels.append("string_up")
            ups.append(float(x.real))
        elif abs(im + np.pi / 3) < tol:
            labels.append("string_down")
            downs.append(float(x.real))
        else:
            labels.append("other")
            others.append(complex(x))
    strings = []
    ups_left = sorted(ups)
    for d in sorted(downs):
        if not ups_left:
            others.append(complex(d, -np.pi / 3))
            continue
        i = int(np.argmin([abs(u - d) for u in ups_left]))
        strings.append(0.5 * (ups_left.pop(i) + d))
    for u in ups_left:
        others.append(complex(u, np.pi / 3))

    if others:
        warnings.warn(f"{len(others)} root(s) fit no pattern line within {tol}")
        name = "other"
    elif not half_line and not strings:
        name = "ground-like"
    elif len(half_line) == 1 and not strings:
        name = "type_I"
    elif len(strings) == 1 and not half_line:
        name = "type_II"
    else:
        name = "mixed"
    return RootPattern(
        labels=tuple(labels),
        real_roots=tuple(sorted(real_roots)),
        half_line=tuple(sorted(half_line)),
        strings=tuple(sorted(strings)),
        others=tuple(others),
        name=name,
    )


def match_spectrum(ed, bae_energies, tol: float) -> dict:
    """Greedy nearest pairing of solver energies onto the exact spectrum.

    Each solver energy claims its nearest unused exact level within tol.
    Degenerate exact levels count separately, so a doubly degenerate level
    needs two hits to be fully covered.
    """
    ed_vals = ed.eigenvalues if isinstance(ed, SpectrumResult) else np.asarray(ed, dtype=float)
    ed_vals = np.sort(np.asarray(ed_vals, dtype=float))
    used = np.zeros(len(ed_vals), dtype=bool)
    pairs = []
    unmatched_bae = []
    for j, e in enumerate(bae_energies):
        cand = np.where(~used)[0]
        if len(cand) == 0:
            unmatched_bae.append(j)
            continue
        i = cand[int(np.argmin(np.abs(ed_vals[cand] - e)))]
        if abs(ed_vals[i] - e) <= tol:
            used[i] = True
            pairs.append((int(i), int(j), float(abs(ed_vals[i] - e))))
        else:
            unmatched_bae.append(j)
    return {
        "pairs": pairs,
        "unmatched_ed": [int(i) for i in np.where(~used)[0]],
        "unmatched_bae": unmatched_bae,
        "max_pair_deviation": max((d for *_, d in pairs), default=0.0),
    }
