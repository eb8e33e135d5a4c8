"""End-to-end acceptance checks for the primary simulation package.

Each test covers one headline behaviour of the extension at its stated
tolerance and prints a single PASS line on success.  These overlap with the
unit suites on purpose: they are the gate that the package as a whole does
what it claims, on realistic workloads.
"""

import math

import numpy as np
import pytest
from scipy import integrate

from oscillock import (
    ClockParams,
    CoherentStateSpec,
    EvolutionRequest,
    accumulated_phase,
    analytic_sigma,
    clock_period_bound,
    coherent_state,
    half_cycle_increment,
    harmonic_observables,
    harmonic_spectrum,
    measured_sigma,
    phase_space_trajectory,
    sigma_vs_lambda,
    turning_amplitude,
)


def report(name: str, detail: str) -> None:
    print(f"ACCEPTANCE PASS: {name} ({detail})")


def test_phase_continuity_and_full_cycle():
    """Phase continuous across branch boundaries; full cycle adds -pi E^2/(lam hbar).

    At each boundary the two adjoining branch expressions are compared at
    the exact turning value.  The constant branch offsets differ by exactly
    half a cycle and are cancelled analytically, so the measured jump is the
    genuine mismatch of the closed forms, not rounding of a large shared
    offset (phases reach ~1e5 rad here, where doubles resolve ~1e-10).
    """
    from oscillock.phases import theta

    worst_jump = 0.0
    worst_cycle = 0.0
    n_boundaries = 0
    for lam in (1e-2, 1.0, 1e2):
        clock = ClockParams(lam=lam)
        for k in range(9):
            energy = k + 0.5
            phi_t = turning_amplitude(energy, clock).phi_t
            quarter = np.pi * energy * energy / (4 * lam * clock.hbar)
            for m in range(1, 39):
                # odd boundary index: forward branch ends at +phi_t;
                # even: backward branch ends at -phi_t
                if m % 2 == 1:
                    jump = 2 * abs(-quarter - theta(phi_t, energy, clock))
                else:
                    jump = 2 * abs(theta(-phi_t, energy, clock) - quarter)
                worst_jump = max(worst_jump, jump)
                n_boundaries += 1
            tau0 = 0.3 * phi_t
            cycle = (accumulated_phase(tau0 + 4 * phi_t, energy, clock).total_phase
                     - accumulated_phase(tau0, energy, clock).total_phase)
            expected = 2 * half_cycle_increment(energy, clock)
            worst_cycle = max(worst_cycle, abs(cycle - expected) / abs(expected))
    assert n_boundaries >= 1000
    assert worst_jump <= 1e-12
    assert worst_cycle <= 1e-12
    report("phase continuity",
           f"{n_boundaries} boundaries, max jump {worst_jump:.2e}, "
           f"cycle rel err {worst_cycle:.2e}")


def test_phase_against_ode_oracle():
    """Closed-form phase matches direct integration of the instantaneous rate."""
    from oscillock.clock import phi_of_tau

    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(5):
        energy = float(rng.uniform(0.5, 8.0))
        lam = float(rng.uniform(0.05, 20.0))
        clock = ClockParams(lam=lam)
        phi_t = turning_amplitude(energy, clock).phi_t
        period = 4 * phi_t

        def rate(tau, _y):
            phi = phi_of_tau(tau, phi_t).phi
            return -math.sqrt(max(energy**2 - lam**2 * phi**2, 0.0)) / clock.hbar

        sol = integrate.solve_ivp(rate, (0.0, period), [0.0],
                                  rtol=1e-11, atol=1e-13, max_step=period / 200)
        got = accumulated_phase(period, energy, clock).total_phase
        rel = abs(got - sol.y[0, -1]) / abs(got)
        worst = max(worst, rel)
    assert worst <= 1e-8
    report("ODE phase oracle", f"worst relative error {worst:.2e}")


CUTOFF = 64


@pytest.fixture(scope="module")
def scenario():
    spec = harmonic_spectrum(CUTOFF)
    state = coherent_state(CoherentStateSpec(alpha=2.0, cutoff=CUTOFF))
    return spec, state, harmonic_observables(CUTOFF)


def _mean_period(scenario, lam, n_periods, base_period):
    spec, state, obs = scenario
    taus = np.linspace(0.0, n_periods * base_period, n_periods * 256 + 1)
    req = EvolutionRequest(spec, state, ClockParams(lam=lam), taus, "oscillating")
    ensemble, _ = measured_sigma(req, obs["x"])
    return ensemble.mean_period


def test_four_over_pi_frequency_rescaling(scenario):
    """Large-lambda oscillation frequency is (pi/4) x the small-lambda one."""
    small = _mean_period(scenario, 1e-5, 40, 2 * np.pi)
    large = _mean_period(scenario, 1e3, 40, 8.0)
    ratio = (1.0 / large) / (1.0 / small)
    assert ratio == pytest.approx(np.pi / 4, rel=1e-3)
    report("4/pi rescaling", f"frequency ratio {ratio:.8f} vs {np.pi / 4:.8f}")


def test_coherence_loss_and_restoration(scenario):
    """var_x blows up at lambda = 0.1 and stays near 1/2 at lambda = 1e3."""
    spec, state, obs = scenario
    period = 2 * np.pi

    taus = np.linspace(0.0, 3 * period, 1537)
    req = EvolutionRequest(spec, state, ClockParams(lam=0.1), taus, "oscillating")
    points = phase_space_trajectory(req, obs)
    initial = points[0].var_x
    peak = max(p.var_x for p in points)
    assert peak > 3 * initial

    stretched = period * 4 / np.pi
    taus = np.linspace(0.0, 10 * stretched, 4097)
    req = EvolutionRequest(spec, state, ClockParams(lam=1e3), taus, "oscillating")
    var_x = np.array([p.var_x for p in phase_space_trajectory(req, obs)])
    assert np.all(np.abs(var_x - 0.5) <= 0.1)
    report("coherence loss/restoration",
           f"var_x peak {peak:.3f} at lam=0.1; range "
           f"[{var_x.min():.4f}, {var_x.max():.4f}] at lam=1e3")


def test_sigma_lambda_law(scenario):
    """Relative period deviation follows analytic 1/lambda within a factor of 2."""
    spec, state, obs = scenario
    template = EvolutionRequest(spec, state, ClockParams(lam=1.0),
                                np.array([0.0, 1.0]), "oscillating")
    lams = np.logspace(0.0, 3.0, 7)
    comparison = sigma_vs_lambda(template, lams, obs["x"], min_periods=30)
    assert np.all(comparison.n_periods >= 30)
    assert comparison.numeric_slope == pytest.approx(-1.0, abs=0.15)
    analytic = np.array([
        analytic_sigma(24.25, ClockParams(lam=l), rescale=True) for l in lams
    ])
    ratios = comparison.numeric_sigma / analytic
    assert np.all(ratios >= 0.5) and np.all(ratios <= 2.0)
    report("sigma(lambda) law",
           f"slope {comparison.numeric_slope:.3f}, "
           f"ratio range [{ratios.min():.2f}, {ratios.max():.2f}]")


def test_clock_period_bound_arithmetic():
    """Attosecond-clock numbers give T_C ~ 2e-33 s; coefficient ~ 9.7."""
    value = clock_period_bound(1e-19, 2e-15)
    coefficient = clock_period_bound(1.0, 1.0)
    assert 1.8e-33 <= value <= 2.2e-33
    assert 9.7 <= coefficient <= 9.8
    report("clock-period bound", f"T_C {value:.4e} s, coefficient {coefficient:.4f}")


def test_quarter_cycle_variance_oracle():
    """analytic_sigma equals the quadrature of the squared phase residual."""

    def residual(u):
        return (np.pi / 4) * u - 0.5 * (u * np.sqrt(1 - u * u) + np.arcsin(u))

    integral, _ = integrate.quad(lambda u: residual(u) ** 2, 0.0, 1.0, epsabs=1e-14)
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(5):
        energy = float(rng.uniform(0.3, 6.0))
        lam = float(rng.uniform(0.1, 50.0))
        oracle = math.sqrt(integral) * energy**2 / lam
        got = analytic_sigma(energy**2, ClockParams(lam=lam))
        worst = max(worst, abs(got - oracle) / oracle)
    assert worst <= 1e-6
    report("quarter-cycle variance oracle", f"worst relative error {worst:.2e}")


def test_unitarity_and_uncertainty(scenario):
    """Norm exactly 1 and Heisenberg floor respected across scenario runs."""
    spec, state, obs = scenario
    rng = np.random.default_rng(11)
    worst_norm = 0.0
    worst_floor = np.inf
    for lam in (1e-5, 0.1, 1.0, 1e3):
        taus = np.sort(rng.uniform(0.0, 100.0, 2500))
        taus[0] = 0.0
        req = EvolutionRequest(spec, state, ClockParams(lam=lam), taus, "oscillating")
        for p in phase_space_trajectory(req, obs):
            worst_norm = max(worst_norm, abs(p.norm - 1.0))
            worst_floor = min(worst_floor, p.var_x * p.var_p - p.covar_xp**2)
    assert worst_norm <= 1e-12
    assert worst_floor >= 0.25 - 1e-9
    report("unitarity and uncertainty",
           f"max |norm-1| {worst_norm:.2e}, min det {worst_floor:.6f} >= 0.25-1e-9")
