"""Closed-form phases of energy eigenstates evolving against the clock.

Within a half-cycle the eigenstate phase follows the function

    theta(phi) = -(1/(2 hbar)) (phi sqrt(E^2 - lambda^2 phi^2)
                                + (E^2/lambda) arcsin(lambda phi / E)),

and half-cycles are concatenated with a sign flip of theta on backward
branches so that the generator of tau-evolution stays positive.  The total
accumulated phase is tracked as a real number (never wrapped mod 2 pi),
assembled as cycle-count times the full-cycle increment plus the running
branch contribution, which stays accurate out to billions of cycles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from oscillock.clock import ClockParams, phi_of_tau, unwind_grid
from oscillock.errors import DomainError

# Tolerance for clamping the arcsin argument at turning points, where float
# overshoot can push |lambda phi / E| infinitesimally above 1.
_ARCSIN_CLAMP = 1e-12


@dataclass(frozen=True)
class EigenPhase:
    """Accumulated real phase of one eigenstate at a global time.

    c_k(tau) = c_k(0) * exp(i * total_phase), with total_phase continuous in
    tau and normalized so that total_phase(0) = 0.
    """

    energy: float
    tau: float
    total_phase: float


def _check_energy(energy: float) -> float:
    if energy == 0:
        raise DomainError("zero-energy eigenstate cannot be evolved against the clock")
    return abs(energy)


def theta(phi: float, energy: float, clock: ClockParams) -> float:
    """Half-cycle phase function theta(phi); odd in phi, theta(0) = 0.

    Defined only for |phi| <= phi_t = |energy|/lambda; outside that range the
    square root turns imaginary (the unitarity failure of naive
    deparameterization) and a DomainError is raised.
    """
    e = _check_energy(energy)
    phi_t = e / clock.lam
    arg = clock.lam * phi / e
    if abs(arg) > 1.0 + _ARCSIN_CLAMP:
        raise DomainError(
            f"clock value {phi} outside turning range +/-{phi_t}; unwind tau first"
        )
    if abs(arg) >= 1.0:
        # Exactly at a turning point: sqrt term vanishes, arcsin(+/-1) = +/- pi/2.
        return -np.copysign(np.pi * e * e / (4.0 * clock.lam * clock.hbar), phi)
    root = np.sqrt(e * e - (clock.lam * phi) ** 2)
    return -0.5 / clock.hbar * (phi * root + e * e / clock.lam * np.arcsin(arg))


def half_cycle_increment(energy: float, clock: ClockParams) -> float:
    """Phase added per half clock cycle: -pi E^2 / (2 lambda hbar).

    Equals theta(phi_t) - theta(-phi_t) on both forward and backward
    branches (the sign flip makes the increments add instead of cancel).
    """
    e = _check_energy(energy)
    return -np.pi * e * e / (2.0 * clock.lam * clock.hbar)


def accumulated_phase(tau: float, energy: float, clock: ClockParams) -> EigenPhase:
    """Total concatenated phase of an eigenstate at global time tau.

    On forward branches the phase is -(n + 1/4) pi E^2/(lambda hbar)
    + theta(phi(tau)); on backward branches -(n + 3/4) pi E^2/(lambda hbar)
    - theta(phi(tau)).  A constant is added so the phase vanishes at tau = 0;
    the result is continuous across every branch boundary and decreases by
    pi E^2/(lambda hbar) per full clock cycle.
    """
    e = _check_energy(energy)
    phi_t = e / clock.lam
    sample = phi_of_tau(tau, phi_t)
    quarter = np.pi * e * e / (4.0 * clock.lam * clock.hbar)
    th = theta(sample.phi, energy, clock)
    if sample.direction > 0:
        raw = -(4 * sample.n + 1) * quarter + th
    else:
        raw = -(4 * sample.n + 3) * quarter - th
    # raw(0) = -quarter; shift so the phase is reported relative to tau = 0.
    return EigenPhase(energy=energy, tau=tau, total_phase=raw + quarter)


def accumulated_phase_grid(taus: np.ndarray, energy: float, clock: ClockParams) -> np.ndarray:
    """Vectorized accumulated_phase over a tau grid; returns real phases."""
    e = _check_energy(energy)
    phi_t = e / clock.lam
    taus = np.asarray(taus, dtype=float)
    phi, n, direction = unwind_grid(taus, phi_t)
    arg = np.clip(clock.lam * phi / e, -1.0, 1.0)
    root = np.sqrt(np.maximum(e * e - (clock.lam * phi) ** 2, 0.0))
    th = -0.5 / clock.hbar * (phi * root + e * e / clock.lam * np.arcsin(arg))
    quarter = np.pi * e * e / (4.0 * clock.lam * clock.hbar)
    raw = np.where(
        direction > 0,
        -(4 * n + 1) * quarter + th,
        -(4 * n + 3) * quarter - th,
    )
    return raw + quarter


def accumulated_phase_table(
    taus: np.ndarray, energies: np.ndarray, clock: ClockParams
) -> np.ndarray:
    """Accumulated phases for a grid of times and several eigenvalues.

    Returns an array of shape (len(taus), len(energies)); each column uses
    that eigenstate's own turning amplitude and cycle index.
    """
    energies = np.asarray(energies, dtype=float)
    if np.any(energies == 0):
        raise DomainError("zero-energy eigenstate cannot be evolved against the clock")
    e = np.abs(energies)[None, :]
    taus = np.asarray(taus, dtype=float)[:, None]
    phi_t = e / clock.lam
    ratio = taus / phi_t
    n = np.floor((1.0 + ratio) / 4.0)
    forward = ratio < 4 * n + 1
    phi = np.where(forward, taus - 4 * n * phi_t, (4 * n + 2) * phi_t - taus)
    phi = np.clip(phi, -phi_t, phi_t)
    arg = np.clip(clock.lam * phi / e, -1.0, 1.0)
    root = np.sqrt(np.maximum(e * e - (clock.lam * phi) ** 2, 0.0))
    th = -0.5 / clock.hbar * (phi * root + e * e / clock.lam * np.arcsin(arg))
    quarter = np.pi * e * e / (4.0 * clock.lam * clock.hbar)
    raw = np.where(forward, -(4 * n + 1) * quarter + th, -(4 * n + 3) * quarter - th)
    return raw + quarter


def small_lambda_phase(tau: float, energy: float, clock: ClockParams) -> float:
    """Reference phase in the lambda -> 0 limit: -E tau / hbar (standard QM)."""
    return -energy * tau / clock.hbar


def large_lambda_phase(tau: float, energy: float, clock: ClockParams) -> float:
    """Reference phase in the lambda -> infinity limit: -(pi/4) E tau / hbar.

    The fast clock rescales every system frequency by pi/4, i.e. stretches
    the period by 4/pi.
    """
    return -0.25 * np.pi * energy * tau / clock.hbar
