"""Relational quantum evolution with respect to an oscillating harmonic clock.

Evolves bound-state systems in the energy eigenbasis by concatenating
closed-form half-cycle phase evolutions of a periodic clock variable,
and measures the resulting dephasing of the system period.
"""

from oscillock.clock import ClockParams, TurningAmplitude, UnwoundClockSample
from oscillock.clock import turning_amplitude, cycle_index, phi_of_tau, clock_orbit
from oscillock.phases import EigenPhase, theta, half_cycle_increment
from oscillock.phases import accumulated_phase, accumulated_phase_grid
from oscillock.phases import small_lambda_phase, large_lambda_phase
from oscillock.systems import Spectrum, StateVector, ObservableMatrix, CoherentStateSpec
from oscillock.systems import harmonic_spectrum, harmonic_observables, coherent_state
from oscillock.systems import hydrogen_system, custom_superposition
from oscillock.evolution import EvolutionRequest, TrajectoryPoint, evolve_state
from oscillock.evolution import observable_series, wavefunction_on_grid, phase_space_trajectory
from oscillock.periods import PeriodEnsemble, SigmaComparison
from oscillock.periods import find_zero_crossings, period_ensemble, analytic_sigma
from oscillock.periods import sigma_vs_lambda, clock_period_bound
from oscillock.periods import dominant_period, despike_crossings, measured_sigma
from oscillock.errors import DomainError, NumericalError, UnsupportedSystemError
from oscillock.errors import OscillockError, InsufficientDataError

__version__ = "0.1.0"

__all__ = [
    "ClockParams", "TurningAmplitude", "UnwoundClockSample",
    "turning_amplitude", "cycle_index", "phi_of_tau", "clock_orbit",
    "EigenPhase", "theta", "half_cycle_increment",
    "accumulated_phase", "accumulated_phase_grid",
    "small_lambda_phase", "large_lambda_phase",
    "Spectrum", "StateVector", "ObservableMatrix", "CoherentStateSpec",
    "harmonic_spectrum", "harmonic_observables", "coherent_state",
    "hydrogen_system", "custom_superposition",
    "EvolutionRequest", "TrajectoryPoint", "evolve_state",
    "observable_series", "wavefunction_on_grid", "phase_space_trajectory",
    "PeriodEnsemble", "SigmaComparison",
    "find_zero_crossings", "period_ensemble", "analytic_sigma",
    "sigma_vs_lambda", "clock_period_bound",
    "dominant_period", "despike_crossings", "measured_sigma",
    "OscillockError", "DomainError", "NumericalError",
    "UnsupportedSystemError", "InsufficientDataError",
]
