"""Dense R-matrix, transfer matrix and Hamiltonian for small chains.

Builds the six-vertex R-matrix, the twisted transfer matrix
t(u) = tr_0{ sigma^x_0 R_0N(u - theta_N) ... R_01(u - theta_1) } and the
antiperiodic XXZ Hamiltonian as dense 2^N x 2^N arrays, and resolves the
joint eigenbasis of H and t. This module is the exact-diagonalization
oracle everything else is checked against.
"""
from __future__ import annotations

import numpy as np

from .model import (
    COSH_ETA,
    ED_CAP,
    ETA,
    U_PROBE,
    CapacityError,
    DegeneracyResolutionError,
    DegenerateAnisotropyError,
    ModelParams,
    SpectrumResult,
)

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def lift(op: np.ndarray, site: int, n: int) -> np.ndarray:
    """Embed a single-site operator at position site (1-based) in n sites."""
    return np.kron(np.kron(np.eye(2 ** (site - 1)), op), np.eye(2 ** (n - site)))


def spin_flip_operator(n: int) -> np.ndarray:
    """U = prod_j sigma^x_j, the Z2 symmetry of the twisted chain."""
    u = np.ones((1, 1))
    for _ in range(n):
        u = np.kron(u, SX.real)
    return u


def _check_capacity(n: int):
    if n > ED_CAP:
        raise CapacityError(f"n_sites={n} exceeds the dense cap of {ED_CAP}")


def build_r_matrix(u: complex, eta: complex = ETA) -> np.ndarray:
    """4x4 six-vertex R-matrix on auxiliary (x) quantum space.

    Diagonal sinh(u + eta)/sinh(eta) in the aligned sectors, sinh(u)/sinh(eta)
    plus unit off-diagonal hopping in the mixed sector. R(0) is the
    permutation matrix.
    """
    se = np.sinh(eta)
    if abs(se) < 1e-14:
        raise DegenerateAnisotropyError("sinh(eta) = 0")
    bp = np.sinh(u + eta) / se
    bm = np.sinh(u) / se
    return np.array(
        [
            [bp, 0, 0, 0],
            [0, bm, 1, 0],
            [0, 1, bm, 0],
            [0, 0, 0, bp],
        ],
        dtype=complex,
    )


def build_hamiltonian(params: ModelParams) -> np.ndarray:
    """Antiperiodic XXZ Hamiltonian, real symmetric at eta = i*pi/3.

    H = -sum_j [xx + yy + cosh(eta) zz] with the sigma^x-twisted closure
    sigma_{N+1} = sigma^x_1 sigma_1 sigma^x_1: the boundary bond picks up
    sign flips on yy and zz.
    """
    n = params.n_sites
    _check_capacity(n)
    ch = np.cosh(params.eta)
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    for j in range(1, n):
        h -= (
            lift(SX, j, n) @ lift(SX, j + 1, n)
            + lift(SY, j, n) @ lift(SY, j + 1, n)
            + ch * lift(SZ, j, n) @ lift(SZ, j + 1, n)
        )
    h -= (
        lift(SX, n, n) @ lift(SX, 1, n)
        - lift(SY, n, n) @ lift(SY, 1, n)
        - ch * lift(SZ, n, n) @ lift(SZ, 1, n)
    )
    if np.max(np.abs(h.imag)) < 1e-12:
        return np.ascontiguousarray(h.real)
    return h


def build_transfer_matrix(u: complex, params: ModelParams) -> np.ndarray:
    """Twisted transfer matrix t(u) as a dense 2^N x 2^N array.

    The auxiliary space is contracted block-iteratively: keep the four
    2^k x 2^k blocks M[a][b] of the partial monodromy (seeded with the
    sigma^x twist) and attach one site per step.
    """
    n = params.n_sites
    _check_capacity(n)
    theta = params.theta_array
    z1 = np.zeros((1, 1), dtype=complex)
    o1 = np.ones((1, 1), dtype=complex)
    m = [[z1, o1], [o1, z1]]  # twist sigma^x in the auxiliary space
    for j in range(n, 0, -1):
        r4 = build_r_matrix(u - theta[j - 1], params.eta)
        r = [[r4[2 * a : 2 * a + 2, 2 * b : 2 * b + 2] for b in range(2)] for a in range(2)]
        m = [
            [sum(np.kron(r[c][b], m[a][c]) for c in range(2)) for b in range(2)]
            for a in range(2)
        ]
    return m[0][0] + m[1][1]


def diagonalize_symmetric(m: np.ndarray, want_vectors: bool = True,
                          herm_tol: float = 1e-10) -> SpectrumResult:
    """Full ascending spectrum of a real symmetric matrix.

    When the matrix is a chain operator commuting with U = prod sigma^x,
    degenerate eigenspaces are rotated so every retained eigenvector is a
    U-parity eigenstate, and the +-1 labels are returned.
    """
    m = np.asarray(m)
    if np.max(np.abs(np.asarray(m, dtype=complex).imag)) > herm_tol:
        raise ValueError("matrix has a non-negligible imaginary part")
    m = np.asarray(m, dtype=complex).real
    if np.max(np.abs(m - m.T)) > herm_tol * max(1.0, np.max(np.abs(m))):
        raise ValueError("matrix is not symmetric")
    vals, vecs = np.linalg.eigh(m)
    if not want_vectors:
        return SpectrumResult(eigenvalues=vals)

    parity = None
    dim = m.shape[0]
    n = dim.bit_length() - 1
    if 2**n == dim and n >= 1:
        u = spin_flip_operator(n)
        if np.max(np.abs(u @ m - m @ u)) < 1e-9 * max(1.0, np.max(np.abs(m))):
            # rotate each degenerate block into U eigenvectors
            parity = np.empty(dim, dtype=int)
            i = 0
            while i < dim:
                j = i
                while j + 1 < dim and vals[j + 1] - vals[i] < 1e-8:
                    j += 1
                block = vecs[:, i : j + 1]
                ub = block.T @ u @ block
                w, s = np.linalg.eigh(ub)
                vecs[:, i : j + 1] = block @ s
                parity[i : j + 1] = np.where(w > 0, 1, -1)
                i = j + 1
    return SpectrumResult(eigenvalues=vals, eigenvectors=vecs, parity=parity)


def joint_eigenstates(params: ModelParams, probe: complex = U_PROBE):
    """Common eigenbasis of H and the transfer family.

    H eigenspaces can be degenerate (the spin-flip pairing alone doubles
    every level), so each near-degenerate block is diagonalized again in
    t(probe). Returns (energies ascending, eigenvector matrix) with columns
    that are joint eigenstates.
    """
    h = build_hamiltonian(params)
    vals, q = np.linalg.eigh(np.asarray(h, dtype=complex).real)
    tp = build_transfer_matrix(probe, params)
    vecs = q.astype(complex)
    i = 0
    dim = len(vals)
    while i < dim:
        j = i
        while j + 1 < dim and vals[j + 1] - vals[i] < 1e-8:
            j += 1
        if j > i:
            block = vecs[:, i : j + 1]
            b = block.conj().T @ tp @ block
            _, s = np.linalg.eig(b)
            s /= np.linalg.norm(s, axis=0, keepdims=True)
            vecs[:, i : j + 1] = block @ s
        i = j + 1
    return vals, vecs


def transfer_eigenbasis(params: ModelParams, probe: complex = U_PROBE):
    """Eigenbasis of t(probe), valid for any inhomogeneities.

    With nonzero thetas the local Hamiltonian is no longer part of the
    commuting family, so the basis has to come from the family itself. The
    probe eigenvalues are generically simple; columns are sorted by
    decreasing |eigenvalue|.
    """
    t = build_transfer_matrix(probe, params)
    vals, vecs = np.linalg.eig(t)
    order = np.argsort(-np.abs(vals))
    return vals[order], vecs[:, order]


def transfer_eigenvalue_on_state(u: complex, params: ModelParams, state: np.ndarray,
                                 probe: complex = U_PROBE, tol: float = 1e-8) -> complex:
    """Lambda(u) = <state|t(u)|state> / <state|state>.

    The state must already be an eigenvector of t(probe); a Rayleigh
    quotient on a non-eigenstate would silently average eigenvalues.
    """
    state = np.asarray(state, dtype=complex)
    tp = build_transfer_matrix(probe, params)
    ts = tp @ state
    nrm2 = np.vdot(state, state)
    lam_p = np.vdot(state, ts) / nrm2
    if np.linalg.norm(ts - lam_p * state) > tol * np.linalg.norm(ts):
        raise DegeneracyResolutionError(
            "state is not an eigenvector of the probe transfer matrix"
        )
    t = build_transfer_matrix(u, params)
    return complex(np.vdot(state, t @ state) / nrm2)


def hamiltonian_from_transfer(params: ModelParams, h_step: float = 1e-5) -> np.ndarray:
    """H reconstructed as -2 sinh(eta) t'(0) t(0)^{-1} + N cosh(eta).

    Central differences with one Richardson level: t'(0) ~= [8(t(h)-t(-h))
    - (t(2h)-t(-2h))] / (12h). Only defined at the physical point.
    """
    if any(abs(t) > 1e-14 for t in params.thetas):
        raise ValueError("transfer-derivative construction needs all thetas zero")
    if abs(params.eta - ETA) > 1e-14:
        raise ValueError("transfer-derivative construction is specialized to eta = i*pi/3")
    n = params.n_sites
    t0 = build_transfer_matrix(0.0, params)
    tp1 = build_transfer_matrix(h_step, params)
    tm1 = build_transfer_matrix(-h_step, params)
    tp2 = build_transfer_matrix(2 * h_step, params)
    tm2 = build_transfer_matrix(-2 * h_step, params)
    dt = (8 * (tp1 - tm1) - (tp2 - tm2)) / (12 * h_step)
    h = -2 * np.sinh(params.eta) * dt @ np.linalg.inv(t0) + n * np.cosh(params.eta) * np.eye(2**n)
    if np.max(np.abs(h.imag)) < 1e-6:
        return h.real
    return h
