"""Shared configuration and result types for the antiperiodic XXZ toolkit.

Everything downstream is specialized to anisotropy eta = i*pi/3, where
cosh(eta) = 1/2 and the Hamiltonian is real symmetric. Chain operators are
dense, so exact diagonalization is capped at ED_CAP sites.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

ETA = 1j * np.pi / 3
SINH_ETA = np.sinh(ETA)  # i*sqrt(3)/2
COSH_ETA = 0.5  # cosh(i*pi/3) exactly

ED_CAP = 12  # 2^12 x 2^12 dense complex is the practical ceiling here

# generic probe point used to split degenerate H-eigenspaces with t(u0);
# any u0 away from the identity points and their eta-shifts works
U_PROBE = 0.1734 + 0.0912j


class CapacityError(ValueError):
    """Requested chain length exceeds the dense-matrix cap."""


class DegenerateAnisotropyError(ValueError):
    """sinh(eta) = 0, the R-matrix normalization breaks down."""


class DegeneracyResolutionError(RuntimeError):
    """State is not an eigenvector of the probe transfer matrix."""


class SingularConfigurationError(ValueError):
    """A root sits on a pole of the equations (some |sinh| < 1e-14)."""


class NonConvergenceError(RuntimeError):
    """Newton ran out of iterations. Carries the final residual norm."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class NonPhysicalRootsError(ValueError):
    """Energy came out with an imaginary part above threshold."""


class InconsistentZeroSetError(ValueError):
    """No overall constant makes the zero set satisfy the identities."""


class ConsistencyError(RuntimeError):
    """Two independent evaluations of the same quantity disagree."""


@dataclass(frozen=True)
class ModelParams:
    """Chain length, anisotropy and inhomogeneities.

    thetas defaults to all zeros (the physical point). Identity-based
    verification needs pairwise distinct thetas, which callers draw from a
    small real interval.
    """

    n_sites: int
    eta: complex = ETA
    thetas: tuple = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError("need at least 2 sites")
        thetas = self.thetas
        if thetas is None:
            thetas = (0.0,) * self.n_sites
        thetas = tuple(complex(t) for t in thetas)
        if len(thetas) != self.n_sites:
            raise ValueError("thetas must have exactly n_sites entries")
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "eta", complex(self.eta))

    @property
    def theta_array(self) -> np.ndarray:
        return np.asarray(self.thetas, dtype=complex)

    def require_distinct_thetas(self, tol: float = 1e-12):
        th = self.theta_array
        diff = np.abs(th[:, None] - th[None, :])
        np.fill_diagonal(diff, np.inf)
        if np.min(diff) < tol:
            raise ValueError("identity verification needs pairwise distinct thetas")


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-12
    max_iter: int = 200
    damping: float = 1.0  # initial step factor, halved while backtracking
    dedupe_tol: float = 1e-8

    def __post_init__(self):
        for name in ("tol", "max_iter", "damping", "dedupe_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class SpectrumResult:
    """Full spectrum of a real symmetric chain operator.

    parity holds +-1 labels under U = prod_j sigma^x_j when the input
    commutes with U and the dimension is a power of two, else None.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    parity: np.ndarray | None = None


@dataclass(frozen=True)
class Excitation:
    """One excited zero point: a half-line root (type_I, number = J) or a
    two-string center (type_II, number = K)."""

    kind: str  # "type_I" | "type_II"
    number: float

    def __post_init__(self):
        if self.kind not in ("type_I", "type_II"):
            raise ValueError(f"unknown excitation kind {self.kind!r}")


@dataclass(frozen=True)
class QuantumNumberSet:
    """Branch labels of the logarithmic equations.

    bulk numbers index the real roots; each excitation carries its own
    number. Multi-excitation labelings follow the single-excitation rules
    applied per excitation (see docs; only the three single classes have
    first-principles status, the rest are the natural extension).
    """

    bulk: tuple
    excitations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "bulk", tuple(float(b) for b in self.bulk))
        object.__setattr__(self, "excitations", tuple(self.excitations))

    @property
    def excitation_type(self) -> str:
        if not self.excitations:
            return "none"
        kinds = {e.kind for e in self.excitations}
        if len(self.excitations) == 1:
            return next(iter(kinds))
        return "mixed"

    @property
    def excitation(self) -> float | None:
        """The single excitation number J, when there is exactly one."""
        if len(self.excitations) == 1:
            return self.excitations[0].number
        return None

    @property
    def n_roots(self) -> int:
        return len(self.bulk) + sum(2 if e.kind == "type_II" else 1 for e in self.excitations)


@dataclass
class RootPattern:
    """Classification of shifted roots by their imaginary-part lines."""

    labels: tuple  # per-root: "real" | "half_line" | "string_up" | "string_down" | "other"
    real_roots: tuple
    half_line: tuple  # real centers of Im = -pi/2 (mod pi) roots
    strings: tuple  # real centers of paired +-pi/3 roots
    others: tuple
    name: str  # "ground-like" | "type_I" | "type_II" | "mixed" | "other"

    @property
    def counts(self):
        return (len(self.real_roots), len(self.half_line), len(self.strings))


@dataclass
class ZeroPointSet:
    """The N-1 zeros z_j of a transfer-matrix eigenvalue, plus metadata.

    shifted = z + eta/2 are the variables the root-density language uses.
    Imaginary parts are kept canonical in (-pi/2, pi/2] (the equations are
    i*pi periodic).
    """

    zeros: np.ndarray
    eta: complex = ETA
    energy: float | None = None
    residual: float | None = None
    iterations: int | None = None
    pattern: RootPattern | None = None
    quantum_numbers: QuantumNumberSet | None = None

    def __post_init__(self):
        self.zeros = np.asarray(self.zeros, dtype=complex)

    @property
    def shifted(self) -> np.ndarray:
        return self.zeros + self.eta / 2

    @property
    def n_sites(self) -> int:
        return len(self.zeros) + 1

    @classmethod
    def from_shifted(cls, lambdas, **kw) -> "ZeroPointSet":
        lam = np.asarray(lambdas, dtype=complex)
        return cls(zeros=lam - ETA / 2, **kw)


@dataclass(frozen=True)
class SpectralFunction:
    """Lambda(u) = lambda0 * prod_j sinh(u - z_j).

    The product form already obeys Lambda(u + i*pi) = (-1)^(N-1) Lambda(u),
    so no extra exponential prefactor is ever attached.
    """

    lambda0: complex
    zeros: tuple
    fit_residuals: tuple | None = None  # bilinear diagnostics from the fit

    def __post_init__(self):
        object.__setattr__(self, "zeros", tuple(complex(z) for z in self.zeros))

    @property
    def n_sites(self) -> int:
        return len(self.zeros) + 1


@dataclass
class DensityProfile:
    """Smooth rapidity density plus explicit (position, weight) atoms.

    Delta terms are never sampled numerically; integrals add the atom
    weights analytically.
    """

    smooth: object  # callable lam -> density value
    holes: tuple = ()
    system_size: float = math.inf

    def total_integral(self, cutoff: float = 40.0) -> float:
        from scipy.integrate import quad

        pts = sorted(p for p, _ in self.holes if abs(p) < cutoff)
        val, _ = quad(self.smooth, -cutoff, cutoff, limit=800,
                      epsabs=1e-12, points=pts or None)
        return val + sum(w for _, w in self.holes)


@dataclass(frozen=True)
class ExcitationSpec:
    """One elementary excitation over the ground sea."""

    kind: str  # "type_I" | "type_II"
    alpha: float
    hole: float | None = None  # type_II bulk hole; equals alpha

    def __post_init__(self):
        if self.kind not in ("type_I", "type_II"):
            raise ValueError(f"unknown excitation kind {self.kind!r}")
        if self.kind == "type_II" and self.hole is None:
            object.__setattr__(self, "hole", self.alpha)


@dataclass(frozen=True)
class ScatteringAmplitude:
    process: str  # "I_I" | "II_II" | "I_II"
    alphas: tuple
    value: complex
