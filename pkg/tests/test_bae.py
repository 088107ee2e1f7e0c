"""Zero-point equation solver checks.

The decisive oracle is exact diagonalization: solved energies have to land
on ED levels. Everything else (residual reduction, branch invariance,
classification) supports that comparison.
"""
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from axxz import bae
from axxz.model import (
    ModelParams,
    NonPhysicalRootsError,
    SolverConfig,
    ZeroPointSet,
)


def ground_solution(n):
    params = ModelParams(n_sites=n)
    return bae.solve_newton(
        bae.seed_from_quantum_numbers(bae.ground_numbers(n), params), params
    ), params


class TestResidual:
    def test_converged_set_has_tiny_residual(self, table_rows, params6):
        zps = bae.solve_newton(ZeroPointSet.from_shifted(table_rows[0]["lambdas"]), params6)
        assert np.max(np.abs(bae.bae_residual(zps, params6))) < 1e-12

    def test_jacobian_matches_finite_differences(self, params6):
        zps, _ = ground_solution(6)
        z = zps.zeros + 0.01  # step off the solution so the residual is generic
        jac = bae.bae_jacobian(z, params6)
        h = 1e-7
        for k in range(len(z)):
            dz = np.zeros(len(z), dtype=complex)
            dz[k] = h
            fd = (bae.bae_residual(z + dz, params6) - bae.bae_residual(z - dz, params6)) / (2 * h)
            assert np.max(np.abs(fd - jac[:, k])) < 1e-5

    def test_branch_invariance_under_ipi_shifts(self, params6):
        zps, _ = ground_solution(6)
        shifted = zps.zeros.copy()
        shifted[1] += 1j * np.pi
        shifted[3] -= 2j * np.pi
        r0 = bae.bae_residual(zps.zeros, params6)
        r1 = bae.bae_residual(shifted, params6)
        assert np.max(np.abs(r1 - r0)) < 1e-12
        assert abs(bae.energy_from_zeros(shifted, params6) - zps.energy) < 1e-12


class TestNewton:
    def test_fixed_point_on_converged_input(self, params6):
        zps, _ = ground_solution(6)
        again = bae.solve_newton(zps, params6)
        assert again.iterations == 0
        assert np.max(np.abs(again.zeros - zps.zeros)) < 1e-12

    def test_quadratic_convergence(self, params6):
        zps, _ = ground_solution(6)
        rng = np.random.default_rng(5)
        z = zps.zeros + 1e-3 * (rng.standard_normal(5) + 1j * rng.standard_normal(5))
        norms = [np.linalg.norm(bae.bae_residual(z, params6))]
        for _ in range(4):
            z = z + np.linalg.solve(bae.bae_jacobian(z, params6), -bae.bae_residual(z, params6))
            norms.append(np.linalg.norm(bae.bae_residual(z, params6)))
        # each step should square the error until rounding noise
        for a, b in zip(norms, norms[1:]):
            if a > 1e-7:
                assert b < 50 * a**2

    def test_nonconvergence_reports_residual(self, params6):
        bad = np.array([3.0 + 0.4j, -2.0 + 0.9j, 0.5 - 1.1j, 1.0 + 0.2j, -0.3 + 0.6j])
        cfg = SolverConfig(max_iter=2)
        with pytest.raises(bae.NonConvergenceError) as exc:
            bae.solve_newton(bad, params6, cfg)
        assert exc.value.residual > 0

    def test_root_collision_detected(self, params4):
        # force dedupe by feeding two nearly identical roots with a huge tol
        zps, _ = ground_solution(4)
        cfg = SolverConfig(dedupe_tol=10.0)
        with pytest.raises(ValueError):
            bae.solve_newton(zps, params4, cfg)


class TestEnergy:
    def test_ground_energy_matches_ed(self, ed6):
        zps, _ = ground_solution(6)
        assert abs(zps.energy - ed6.eigenvalues[0]) < 1e-10

    def test_complex_energy_rejected(self, params6):
        z = np.array([0.3 + 0.2j, 0.1 - 0.4j, -0.2 + 0.15j, 0.45 + 0.05j, -0.6 - 0.3j])
        with pytest.raises(NonPhysicalRootsError):
            bae.energy_from_zeros(z, params6)


class TestQuantumNumbers:
    def test_ground_set(self):
        assert bae.ground_numbers(6).bulk == (-2.0, -1.0, 0.0, 1.0, 2.0)

    def test_type_one_window(self):
        with pytest.raises(ValueError):
            bae.type_one_numbers(6, 3)
        qn = bae.type_one_numbers(6, -2)
        assert len(qn.bulk) == 4 and qn.excitation == -2.0

    def test_type_two_positions(self):
        with pytest.raises(ValueError):
            bae.type_two_numbers(6, 5)
        qn = bae.type_two_numbers(6, 1)
        assert qn.excitation == 1.5  # (N-1)/2 - 1
        assert len(qn.bulk) == 3

    def test_odd_sizes_rejected(self):
        with pytest.raises(ValueError):
            bae.ground_numbers(5)

    def test_seed_root_count_guard(self, params6):
        with pytest.raises(ValueError):
            bae.seed_from_quantum_numbers(bae.ground_numbers(4), params6)


class TestSpectrumCoverage:
    def test_full_scan_n4(self, ed4, params4):
        energies = []
        for _, qn in bae.enumerate_seed_sets(4):
            zps = bae.solve_newton(bae.seed_from_quantum_numbers(qn, params4), params4)
            energies.append(zps.energy)
        doubled = sorted(energies + energies)  # +-lambda0 pairing doubles each level
        assert np.max(np.abs(np.asarray(doubled) - ed4.eigenvalues)) < 1e-8

    def test_table_rows_reconverge(self, table_rows, params6, ed6):
        for row in table_rows[::6]:
            zps = bae.solve_newton(ZeroPointSet.from_shifted(row["lambdas"]), params6)
            assert abs(zps.energy - row["energy"]) < 1e-3
            assert np.min(np.abs(ed6.eigenvalues - zps.energy)) < 1e-8

    def test_match_spectrum_reporting(self):
        report = bae.match_spectrum(np.array([0.0, 1.0, 5.0]), [1.0 + 1e-10, -3.0], tol=1e-6)
        assert len(report["pairs"]) == 1
        assert report["unmatched_bae"] == [1]
        assert set(report["unmatched_ed"]) == {0, 2}
        assert report["max_pair_deviation"] < 1e-9


class TestClassification:
    def test_three_canonical_patterns(self, params6):
        ground, _ = ground_solution(6)
        assert bae.classify_roots(ground).name == "ground-like"
        p = ModelParams(n_sites=6)
        one = bae.solve_newton(bae.seed_from_quantum_numbers(bae.type_one_numbers(6, 1), p), p)
        assert bae.classify_roots(one).name == "type_I"
        two = bae.solve_newton(bae.seed_from_quantum_numbers(bae.type_two_numbers(6, 2), p), p)
        pat = bae.classify_roots(two, tol=0.1)
        assert pat.name == "type_II"
        assert pat.counts == (3, 0, 1)

    def test_off_pattern_warns(self):
        lam = np.array([0.1, -0.2, 0.3 + 0.6j, 0.3 - 0.6j, 0.0 + 1.5708j])
        with pytest.warns(UserWarning):
            pat = bae.classify_roots(ZeroPointSet.from_shifted(lam))
        assert pat.name == "other"
        assert len(pat.others) == 2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=6))
def test_canonicalize_idempotent_and_in_band(zs):
    z = bae.canonicalize(np.array(zs))
    assert np.all(z.imag > -np.pi / 2) and np.all(z.imag <= np.pi / 2 + 1e-12)
    assert np.max(np.abs(bae.canonicalize(z) - z)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=-3, max_value=3), st.integers(min_value=0, max_value=4))
def test_energy_invariant_under_branch_shifts(k, which):
    params = ModelParams(n_sites=6)
    zps = bae.solve_newton(
        bae.seed_from_quantum_numbers(bae.ground_numbers(6), params), params
    )
    z = zps.zeros.copy()
    z[which] += 1j * np.pi * k
    assert abs(bae.energy_from_zeros(z, params) - zps.energy) < 1e-10
