"""Piecewise-linear unwinding of the periodic clock variable into global time.

The clock degree of freedom phi oscillates between turning points
+/- phi_t = |E|/lambda.  A monotonic global time tau is related to phi in a
continuous, piecewise-linear fashion: on "forward" half-cycles phi increases
with slope +1, on "backward" half-cycles it decreases with slope -1, and the
integer cycle index n counts completed clock cycles.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from oscillock.errors import DomainError

# Beyond this ratio a double cannot represent tau/phi_t to integer precision,
# so the cycle index is recomputed with exact rational arithmetic.
_FLOAT_EXACT_INT = 2.0**52


@dataclass(frozen=True)
class ClockParams:
    """Clock stiffness and quantum of action shared by all computations."""

    lam: float
    hbar: float = 1.0

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError(f"clock stiffness must be positive, got {self.lam}")
        if not self.hbar > 0:
            raise DomainError(f"hbar must be positive, got {self.hbar}")


@dataclass(frozen=True)
class TurningAmplitude:
    """Clock turning value phi_t = |E|/lambda for one energy eigenvalue."""

    phi_t: float
    energy: float


@dataclass(frozen=True)
class UnwoundClockSample:
    """Clock value, cycle index and sweep direction at one global time."""

    tau: float
    phi: float
    n: int
    direction: int  # sign of d(phi)/d(tau): +1 or -1


def turning_amplitude(energy: float, clock: ClockParams) -> TurningAmplitude:
    """Turning value phi_t = |energy|/lambda of the clock for this eigenvalue.

    Negative energies (hydrogen bound states) enter through their absolute
    value so that phi_t stays positive and phase arguments stay real.
    """
    if energy == 0:
        raise DomainError("zero energy: turning amplitude undefined, clock never turns")
    return TurningAmplitude(phi_t=abs(energy) / clock.lam, energy=energy)


def cycle_index(tau: float, phi_t: float) -> int:
    """Number of completed clock cycles: floor((1 + tau/phi_t)/4).

    n = 0 for tau in [-phi_t, 3 phi_t).  For |tau/phi_t| beyond 2^52 the
    floor is taken in exact rational arithmetic, since a double can no
    longer resolve neighbouring cycle boundaries.
    """
    if not phi_t > 0:
        raise DomainError(f"phi_t must be positive, got {phi_t}")
    ratio = tau / phi_t
    if abs(ratio) > _FLOAT_EXACT_INT:
        warnings.warn(
            "cycle index beyond float integer precision; using exact arithmetic",
            RuntimeWarning,
            stacklevel=2,
        )
        exact = (1 + Fraction(tau) / Fraction(phi_t)) / 4
        return math.floor(exact)
    return math.floor((1.0 + ratio) / 4.0)


def phi_of_tau(tau: float, phi_t: float) -> UnwoundClockSample:
    """Unwind global time tau into the clock value phi on the current branch.

    phi(tau) = tau - 4 n phi_t        on forward branches (d phi/d tau = +1),
             = (4n + 2) phi_t - tau   on backward branches (d phi/d tau = -1),
    with the forward branch covering 4n-1 <= tau/phi_t < 4n+1.  Branch
    boundaries are assigned to the branch that begins there; both branches
    agree on phi at the boundary.
    """
    n = cycle_index(tau, phi_t)
    ratio = tau / phi_t
    if ratio < 4 * n + 1:
        phi = tau - 4 * n * phi_t
        direction = 1
    else:
        phi = (4 * n + 2) * phi_t - tau
        direction = -1
    # Clamp float overshoot at turning points; |phi| <= phi_t by construction.
    if phi > phi_t:
        phi = phi_t
    elif phi < -phi_t:
        phi = -phi_t
    return UnwoundClockSample(tau=tau, phi=phi, n=n, direction=direction)


def unwind_grid(taus: np.ndarray, phi_t: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized unwinding: returns (phi, n, direction) arrays for a tau grid."""
    if not phi_t > 0:
        raise DomainError(f"phi_t must be positive, got {phi_t}")
    taus = np.asarray(taus, dtype=float)
    ratio = taus / phi_t
    if np.any(np.abs(ratio) > _FLOAT_EXACT_INT):
        warnings.warn(
            "cycle index beyond float integer precision on grid",
            RuntimeWarning,
            stacklevel=2,
        )
    n = np.floor((1.0 + ratio) / 4.0)
    forward = ratio < 4 * n + 1
    phi = np.where(forward, taus - 4 * n * phi_t, (4 * n + 2) * phi_t - taus)
    phi = np.clip(phi, -phi_t, phi_t)
    direction = np.where(forward, 1, -1)
    return phi, n, direction


def clock_orbit(energy: float, clock: ClockParams, samples: int) -> list[tuple[float, float]]:
    """Points (phi, p_phi) on the clock's phase-space ellipse, traversed once.

    The energy-balance constraint fixes p_phi = +/- sqrt(E^2 - lambda^2 phi^2);
    one full traversal covers both momentum signs.
    """
    if energy <= 0:
        raise DomainError(f"clock orbit requires positive energy, got {energy}")
    if samples < 2:
        raise DomainError(f"need at least 2 samples, got {samples}")
    phi_t = abs(energy) / clock.lam
    angles = np.linspace(0.0, 2.0 * np.pi, samples)
    phis = phi_t * np.sin(angles)
    p_phis = abs(energy) * np.cos(angles)
    return list(zip(phis.tolist(), p_phis.tolist()))
