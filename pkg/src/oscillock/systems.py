"""Bound-state spectra, energy-basis observables and initial states.

Two concrete systems are provided: the 1D harmonic oscillator (ladder-operator
matrix elements, coherent initial states, Hermite grid wavefunctions) and an
l = 0 hydrogen demo system whose radius matrix elements are computed by
numerical quadrature of the radial wavefunctions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from oscillock.errors import DomainError, NumericalError

COHERENT_TAIL_TOL = 1e-10
_NORM_TOL = 1e-12


@dataclass(frozen=True)
class Spectrum:
    """Ordered eigenvalues of a bound-state system with eigenstate labels."""

    energies: np.ndarray
    labels: tuple[str, ...]
    system_kind: str = "custom"

    def __post_init__(self):
        energies = np.asarray(self.energies, dtype=float)
        object.__setattr__(self, "energies", energies)
        if len(energies) != len(self.labels):
            raise DomainError("energies and labels must have equal length")
        if np.any(energies == 0):
            raise DomainError("zero eigenvalues are not allowed (clock never turns)")
        if np.any(np.diff(energies) <= 0):
            raise DomainError("energies must be strictly increasing")

    def __len__(self) -> int:
        return len(self.energies)


@dataclass(frozen=True)
class StateVector:
    """Complex coefficients over a Spectrum; unit norm."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex)
        object.__setattr__(self, "coefficients", c)
        norm2 = float(np.sum(np.abs(c) ** 2))
        if abs(norm2 - 1.0) > _NORM_TOL:
            raise DomainError(f"state norm^2 = {norm2!r} deviates from 1 beyond {_NORM_TOL}")

    def __len__(self) -> int:
        return len(self.coefficients)


@dataclass(frozen=True)
class ObservableMatrix:
    """Hermitian matrix elements of an observable in the energy basis."""

    elements: np.ndarray
    name: str

    def __post_init__(self):
        m = np.asarray(self.elements, dtype=complex)
        object.__setattr__(self, "elements", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"observable matrix must be square, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, atol=1e-12, rtol=0.0):
            raise DomainError(f"observable {self.name!r} is not Hermitian within 1e-12")


@dataclass(frozen=True)
class CoherentStateSpec:
    """Displacement and basis truncation for a coherent initial state."""

    alpha: complex = 2.0
    cutoff: int = 64

    def captured_weight(self) -> float:
        """Poisson weight retained by the truncation, sum_{k<=N} |a|^2k e^-|a|^2 / k!."""
        a2 = abs(self.alpha) ** 2
        k = np.arange(self.cutoff + 1)
        log_w = k * np.log(a2) - a2 - gammaln(k + 1) if a2 > 0 else np.where(k == 0, 0.0, -np.inf)
        return float(np.sum(np.exp(log_w)))


def harmonic_spectrum(cutoff: int, omega: float = 1.0, hbar: float = 1.0) -> Spectrum:
    """Harmonic ladder E_k = hbar omega (k + 1/2) for k = 0..cutoff."""
    if cutoff < 1:
        raise DomainError(f"cutoff must be >= 1, got {cutoff}")
    k = np.arange(cutoff + 1)
    energies = hbar * omega * (k + 0.5)
    labels = tuple(f"n={i}" for i in k)
    return Spectrum(energies=energies, labels=labels, system_kind="harmonic")


def harmonic_observables(
    cutoff: int, omega: float = 1.0, hbar: float = 1.0, mass: float = 1.0
) -> dict[str, ObservableMatrix]:
    """Ladder-operator matrices x, p, x^2, p^2 and (xp+px)/2 on the truncated basis.

    x and p are tridiagonal, the quadratics pentadiagonal.  Products are
    taken within the truncated basis, so the highest one or two diagonal
    entries of the quadratics carry truncation error; interior elements are
    exact.
    """
    if cutoff < 1:
        raise DomainError(f"cutoff must be >= 1, got {cutoff}")
    dim = cutoff + 1
    a = np.zeros((dim, dim), dtype=complex)
    ks = np.arange(1, dim)
    a[ks - 1, ks] = np.sqrt(ks)  # lowering operator: a|k> = sqrt(k)|k-1>
    adag = a.conj().T
    x = np.sqrt(hbar / (2.0 * mass * omega)) * (a + adag)
    p = 1j * np.sqrt(hbar * mass * omega / 2.0) * (adag - a)
    x2 = x @ x
    p2 = p @ p
    xp_sym = 0.5 * (x @ p + p @ x)
    return {
        "x": ObservableMatrix(x, "x"),
        "p": ObservableMatrix(p, "p"),
        "x2": ObservableMatrix(x2, "x2"),
        "p2": ObservableMatrix(p2, "p2"),
        "xp_sym": ObservableMatrix(xp_sym, "xp_sym"),
    }


def coherent_state(spec: CoherentStateSpec) -> StateVector:
    """Coherent state c_k = e^{-|a|^2/2} a^k / sqrt(k!), renormalized after truncation."""
    captured = spec.captured_weight()
    if captured < 1.0 - COHERENT_TAIL_TOL:
        raise DomainError(
            f"cutoff {spec.cutoff} too small for alpha={spec.alpha}: "
            f"truncation keeps only {captured!r} of the Poisson weight"
        )
    k = np.arange(spec.cutoff + 1)
    # log-magnitude to avoid overflow in a^k / sqrt(k!) at large k
    mag = abs(spec.alpha)
    if mag == 0:
        c = np.zeros(spec.cutoff + 1, dtype=complex)
        c[0] = 1.0
        return StateVector(c)
    log_mag = k * math.log(mag) - 0.5 * gammaln(k + 1) - 0.5 * mag**2
    phase = np.angle(spec.alpha) * k
    c = np.exp(log_mag) * np.exp(1j * phase)
    c = c / np.linalg.norm(c)
    return StateVector(c)


def _hydrogen_radial(n: int, r: np.ndarray) -> np.ndarray:
    """Normalized l = 0 radial function R_{n0}(r) in atomic units."""
    rho = 2.0 * r / n
    norm = math.sqrt((2.0 / n) ** 3 * math.factorial(n - 1) / (2.0 * n * math.factorial(n)))
    return norm * np.exp(-rho / 2.0) * eval_genlaguerre(n - 1, 1, rho)


def hydrogen_system(n_max: int, quad_order: int = 400) -> tuple[Spectrum, dict[str, ObservableMatrix]]:
    """Hydrogen l = 0 bound states: E_n = -1/(2 n^2) plus r and r^2 matrices.

    Matrix elements r_{n'n} = Int R_{n'0}(r) r R_{n0}(r) r^2 dr are computed
    with Gauss-Legendre quadrature.  Orthonormality of the radial functions
    is used as the quadrature convergence check.
    """
    if n_max < 2:
        raise DomainError(f"n_max must be >= 2, got {n_max}")
    n_vals = np.arange(1, n_max + 1)
    energies = -0.5 / n_vals.astype(float) ** 2
    labels = tuple(f"{n}s" for n in n_vals)
    spectrum = Spectrum(energies=energies, labels=labels, system_kind="hydrogen")

    # Gauss-Legendre on [0, r_max]; the slowest radial decay is e^{-r/n_max},
    # so r_max = 40 n_max pushes the truncated tail below 1e-15.
    x, w = np.polynomial.legendre.leggauss(quad_order)
    r_max = 40.0 * n_max
    r = 0.5 * r_max * (x + 1.0)
    weights = 0.5 * r_max * w

    radial = np.array([_hydrogen_radial(n, r) for n in n_vals])
    overlap = np.einsum("ir,jr,r->ij", radial, radial, weights * r**2)
    if not np.allclose(overlap, np.eye(n_max), atol=1e-8, rtol=0.0):
        worst = float(np.max(np.abs(overlap - np.eye(n_max))))
        raise NumericalError(
            f"hydrogen radial quadrature not converged: orthonormality residual {worst:.3e}"
        )
    r_mat = np.einsum("ir,jr,r->ij", radial, radial, weights * r**3)
    r2_mat = np.einsum("ir,jr,r->ij", radial, radial, weights * r**4)
    r_mat = 0.5 * (r_mat + r_mat.T)
    r2_mat = 0.5 * (r2_mat + r2_mat.T)
    observables = {
        "r": ObservableMatrix(r_mat.astype(complex), "r"),
        "r2": ObservableMatrix(r2_mat.astype(complex), "r2"),
    }
    return spectrum, observables


def custom_superposition(
    energies: list[float], amplitudes: list[complex]
) -> tuple[Spectrum, StateVector]:
    """Normalized superposition over a user-supplied spectrum."""
    if len(energies) != len(amplitudes):
        raise DomainError("energies and amplitudes must have equal length")
    amps = np.asarray(amplitudes, dtype=complex)
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise DomainError("zero-norm amplitude list")
    labels = tuple(f"E={e:g}" for e in energies)
    spectrum = Spectrum(energies=np.asarray(energies, dtype=float), labels=labels)
    return spectrum, StateVector(amps / norm)


def hermite_functions(x: np.ndarray, n_max: int, omega: float = 1.0,
                      hbar: float = 1.0, mass: float = 1.0) -> np.ndarray:
    """Normalized oscillator eigenfunctions u_0..u_{n_max} on a grid.

    Uses the stable two-term recurrence of the *normalized* Hermite
    functions, which avoids overflow of raw Hermite polynomials.
    Returns an array of shape (n_max + 1, len(x)).
    """
    xi = np.sqrt(mass * omega / hbar) * np.asarray(x, dtype=float)
    scale = (mass * omega / (np.pi * hbar)) ** 0.25
    u = np.zeros((n_max + 1, len(xi)))
    u[0] = scale * np.exp(-0.5 * xi**2)
    if n_max >= 1:
        u[1] = np.sqrt(2.0) * xi * u[0]
    for k in range(1, n_max):
        u[k + 1] = np.sqrt(2.0 / (k + 1)) * xi * u[k] - np.sqrt(k / (k + 1)) * u[k - 1]
    return u
