"""Applies per-eigenstate phases to states and evaluates observables.

Evolution is evaluated in closed form at every requested global time; no
ODE time-stepping is involved, so there is no accumulation error even after
billions of clock cycles.  Each eigenstate carries its own turning amplitude
and cycle index, so a superposition evolves into a superposition of
different clock cycles.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from oscillock.clock import ClockParams
from oscillock.errors import DomainError, NumericalError, UnsupportedSystemError
from oscillock.phases import accumulated_phase_table
from oscillock.systems import ObservableMatrix, Spectrum, StateVector, hermite_functions

MODES = ("oscillating", "small_lambda_reference", "large_lambda_reference")

_IMAG_WARN = 1e-10
_IMAG_FAIL = 1e-8


@dataclass(frozen=True)
class EvolutionRequest:
    """A system, initial state, clock and phase law to evolve with."""

    spectrum: Spectrum
    initial_state: StateVector
    clock: ClockParams
    tau_grid: np.ndarray = field(default_factory=lambda: np.linspace(0.0, 20.0, 2048))
    mode: str = "oscillating"

    def __post_init__(self):
        grid = np.asarray(self.tau_grid, dtype=float)
        object.__setattr__(self, "tau_grid", grid)
        if len(self.spectrum) != len(self.initial_state):
            raise DomainError("state dimension does not match spectrum")
        if self.mode not in MODES:
            raise DomainError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if grid.ndim != 1 or (len(grid) > 1 and np.any(np.diff(grid) <= 0)):
            raise DomainError("tau_grid must be a strictly increasing 1D array")


@dataclass(frozen=True)
class TrajectoryPoint:
    """Means and second-order moments of x and p at one global time."""

    tau: float
    mean_x: float
    mean_p: float
    var_x: float
    var_p: float
    covar_xp: float
    norm: float


def phase_matrix(request: EvolutionRequest, taus: np.ndarray) -> np.ndarray:
    """Real phases of shape (len(taus), dim): one column per eigenstate."""
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    energies = request.spectrum.energies
    if request.mode == "small_lambda_reference":
        return -np.outer(taus, energies) / request.clock.hbar
    if request.mode == "large_lambda_reference":
        return -0.25 * np.pi * np.outer(taus, energies) / request.clock.hbar
    out = np.empty((len(taus), len(energies)))
    chunk = max(1, 4_000_000 // max(1, len(energies)))  # cap intermediate arrays
    for start in range(0, len(taus), chunk):
        stop = start + chunk
        out[start:stop] = accumulated_phase_table(taus[start:stop], energies, request.clock)
    return out


def evolve_state(request: EvolutionRequest, tau: float) -> StateVector:
    """State at global time tau: c_k(tau) = c_k(0) exp(i phase_k(tau))."""
    phases = phase_matrix(request, np.array([tau]))[0]
    return StateVector(request.initial_state.coefficients * np.exp(1j * phases))


def _coefficient_matrix(request: EvolutionRequest, taus: np.ndarray) -> np.ndarray:
    phases = phase_matrix(request, taus)
    return request.initial_state.coefficients[None, :] * np.exp(1j * phases)


def _max_workers() -> int:
    env = os.environ.get("OSCILLOCK_THREADS")
    if env is not None:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _expectations(coeffs: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """Row-wise <c|O|c> for a stack of coefficient rows (BLAS-backed)."""
    return np.sum(coeffs.conj() * (coeffs @ matrix.T), axis=1)


def _real_checked(values: np.ndarray, what: str) -> np.ndarray:
    worst = float(np.max(np.abs(values.imag), initial=0.0))
    if worst > _IMAG_FAIL:
        raise NumericalError(f"{what}: imaginary residue {worst:.3e} exceeds {_IMAG_FAIL}")
    return values.real


def observable_series(
    request: EvolutionRequest,
    observable: ObservableMatrix,
    squared: ObservableMatrix | None = None,
) -> list[tuple[float, float, float]]:
    """Expectation value and variance of an observable along the tau grid.

    The variance uses the matching squared-observable matrix; when none is
    given it is formed as the matrix square within the truncated basis.
    """
    if observable.elements.shape[0] != len(request.spectrum):
        raise DomainError("observable dimension does not match spectrum")
    sq = squared.elements if squared is not None else observable.elements @ observable.elements
    coeffs = _coefficient_matrix(request, request.tau_grid)
    means = _real_checked(_expectations(coeffs, observable.elements), observable.name)
    seconds = _real_checked(_expectations(coeffs, sq), observable.name + "^2")
    variances = seconds - means**2
    return list(zip(request.tau_grid.tolist(), means.tolist(), variances.tolist()))


def observable_mean_at(request: EvolutionRequest, observable: ObservableMatrix, tau: float) -> float:
    """Closed-form re-evaluation of a single expectation value at one tau.

    Used as the refinement callback for zero-crossing bisection.
    """
    c = evolve_state(request, tau).coefficients
    value = complex(c.conj() @ (observable.elements @ c))
    return value.real


def wavefunction_on_grid(request: EvolutionRequest, tau: float, x_grid: np.ndarray) -> np.ndarray:
    """Position-space wavefunction psi(x, tau) for a harmonic system."""
    if request.spectrum.system_kind != "harmonic":
        raise UnsupportedSystemError(
            "grid wavefunctions require harmonic (Hermite) eigenfunctions"
        )
    x_grid = np.asarray(x_grid, dtype=float)
    c = evolve_state(request, tau).coefficients
    u = hermite_functions(x_grid, len(c) - 1)
    return c @ u.astype(complex)


def phase_space_trajectory(
    request: EvolutionRequest, observables: dict[str, ObservableMatrix]
) -> list[TrajectoryPoint]:
    """Means, variances and covariance of x and p along the tau grid."""
    needed = ("x", "p", "x2", "p2", "xp_sym")
    missing = [k for k in needed if k not in observables]
    if missing:
        raise DomainError(f"missing observables {missing} for phase-space trajectory")
    taus = request.tau_grid
    coeffs = _coefficient_matrix(request, taus)

    def expect(name: str) -> np.ndarray:
        return _real_checked(_expectations(coeffs, observables[name].elements), name)

    with ThreadPoolExecutor(max_workers=_max_workers()) as pool:
        mx, mp, mx2, mp2, mxp = pool.map(expect, needed)
    norms = np.sum(np.abs(coeffs) ** 2, axis=1)
    var_x = mx2 - mx**2
    var_p = mp2 - mp**2
    covar = mxp - mx * mp
    return [
        TrajectoryPoint(
            tau=float(t), mean_x=float(a), mean_p=float(b),
            var_x=float(vx), var_p=float(vp), covar_xp=float(c), norm=float(n),
        )
        for t, a, b, vx, vp, c, n in zip(taus, mx, mp, var_x, var_p, covar, norms)
    ]


def default_tau_grid(
    spectrum: Spectrum,
    state: StateVector,
    clock: ClockParams,
    tau_max: float,
    samples_per_system_period: int = 256,
    samples_per_clock_cycle: int = 40,
    max_samples: int = 2_000_000,
) -> np.ndarray:
    """Sampling grid dense enough for both system and clock structure.

    Targets >= samples_per_system_period per system period and, where the
    populated eigenstates' clock cycles are resolvable at all, >=
    samples_per_clock_cycle per shortest such clock cycle (clock cycles far
    below that are closed-form anyway and need not be stepped through).
    Pass samples_per_clock_cycle=0 to skip the clock-cycle densification.
    """
    weights = np.abs(state.coefficients) ** 2
    populated = np.abs(spectrum.energies[weights > 1e-6])
    if len(populated) == 0:
        populated = np.abs(spectrum.energies)
    if len(populated) >= 2:
        # Observables oscillate at the populated level spacing.
        freq_scale = float(np.min(np.diff(np.sort(populated)))) / clock.hbar
    else:
        freq_scale = float(np.max(populated)) / clock.hbar
    system_period = 2.0 * np.pi / freq_scale
    dt = system_period / samples_per_system_period
    shortest_cycle = 4.0 * float(np.min(populated)) / clock.lam
    if samples_per_clock_cycle > 0 and shortest_cycle / samples_per_clock_cycle < dt:
        dt_clock = shortest_cycle / samples_per_clock_cycle
        if tau_max / dt_clock <= max_samples:
            dt = dt_clock
    n = min(max_samples, max(2, int(np.ceil(tau_max / dt)) + 1))
    return np.linspace(0.0, tau_max, n)
