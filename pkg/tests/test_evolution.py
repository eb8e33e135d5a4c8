import math

import numpy as np
import pytest

from oscillock import (
    ClockParams,
    CoherentStateSpec,
    DomainError,
    EvolutionRequest,
    UnsupportedSystemError,
    coherent_state,
    custom_superposition,
    evolve_state,
    harmonic_observables,
    harmonic_spectrum,
    observable_series,
    phase_space_trajectory,
    wavefunction_on_grid,
)
from oscillock.evolution import default_tau_grid

CUTOFF = 64


@pytest.fixture(scope="module")
def harmonic():
    return harmonic_spectrum(CUTOFF), harmonic_observables(CUTOFF)


@pytest.fixture(scope="module")
def alpha2(harmonic):
    return coherent_state(CoherentStateSpec(alpha=2.0, cutoff=CUTOFF))


def make_request(spec, state, lam, taus, mode="oscillating"):
    return EvolutionRequest(spec, state, ClockParams(lam=lam), np.asarray(taus, float), mode)


class TestEvolveState:
    def test_identity_at_zero(self, harmonic, alpha2):
        spec, _ = harmonic
        req = make_request(spec, alpha2, 0.1, [0.0, 1.0])
        out = evolve_state(req, 0.0)
        np.testing.assert_allclose(out.coefficients, alpha2.coefficients)

    def test_single_eigenstate_pure_phase(self):
        spec, state = custom_superposition([1.5], [1.0])
        req = make_request(spec, state, 0.3, [0.0, 1.0])
        for tau in [0.7, 3.3, 12.0]:
            out = evolve_state(req, tau)
            assert abs(out.coefficients[0]) == pytest.approx(1.0)

    def test_norm_conserved_all_modes(self, harmonic, alpha2):
        spec, _ = harmonic
        rng = np.random.default_rng(7)
        for mode in ("oscillating", "small_lambda_reference", "large_lambda_reference"):
            req = make_request(spec, alpha2, 0.7, [0.0, 1.0], mode)
            for tau in rng.uniform(0, 200, 25):
                c = evolve_state(req, float(tau)).coefficients
                assert np.sum(np.abs(c) ** 2) == pytest.approx(1.0, abs=1e-12)

    def test_small_lambda_reference_coherent_oracle(self, harmonic, alpha2):
        # oracle: direct sum over the tridiagonal x matrix with phases e^{-i E_k tau}
        spec, obs = harmonic
        taus = np.linspace(0, 12, 97)
        req = make_request(spec, alpha2, 1e-5, taus, "small_lambda_reference")
        for tau in [0.0, 1.3, 5.1]:
            c = evolve_state(req, tau).coefficients
            got = float((c.conj() @ obs["x"].elements @ c).real)
            c0 = alpha2.coefficients * np.exp(-1j * spec.energies * tau)
            oracle = float((c0.conj() @ obs["x"].elements @ c0).real)
            assert got == pytest.approx(oracle, abs=1e-12)
            assert got == pytest.approx(math.sqrt(2) * 2.0 * math.cos(tau), abs=1e-9)


class TestObservableSeries:
    def test_vacuum_position_zero(self, harmonic):
        spec, obs = harmonic
        vac = coherent_state(CoherentStateSpec(alpha=0.0, cutoff=CUTOFF))
        req = make_request(spec, vac, 0.1, np.linspace(0, 10, 50))
        series = observable_series(req, obs["x"])
        assert all(abs(v) < 1e-12 for _, v, _ in series)

    def test_single_eigenstate_stationary(self):
        spec, state = custom_superposition([0.5, 1.5], [0.0 + 0j, 1.0])
        diag = np.diag([1.0, 3.0]).astype(complex)
        from oscillock.systems import ObservableMatrix

        o = ObservableMatrix(diag, "diag")
        req = make_request(spec, state, 0.4, np.linspace(0, 20, 64))
        series = observable_series(req, o)
        values = [v for _, v, _ in series]
        assert np.ptp(values) < 1e-12

    def test_small_lambda_sinusoid(self, harmonic, alpha2):
        spec, obs = harmonic
        taus = np.linspace(0, 4 * np.pi, 513)
        req = make_request(spec, alpha2, 1e-5, taus)
        series = observable_series(req, obs["x"])
        values = np.array([v for _, v, _ in series])
        expected = 2 * math.sqrt(2) * np.cos(taus)
        np.testing.assert_allclose(values, expected, atol=1e-4)

    def test_dimension_mismatch(self, harmonic, alpha2):
        spec, _ = harmonic
        small_obs = harmonic_observables(4)
        req = make_request(spec, alpha2, 0.1, [0.0, 1.0])
        with pytest.raises(DomainError):
            observable_series(req, small_obs["x"])


class TestWavefunctionOnGrid:
    def test_vacuum_gaussian(self, harmonic):
        spec, _ = harmonic
        vac = coherent_state(CoherentStateSpec(alpha=0.0, cutoff=CUTOFF))
        req = make_request(spec, vac, 0.1, [0.0, 1.0])
        x = np.linspace(-5, 5, 201)
        psi = wavefunction_on_grid(req, 3.7, x)
        np.testing.assert_allclose(
            np.abs(psi), np.pi**-0.25 * np.exp(-x**2 / 2), atol=1e-10
        )

    def test_coherent_centered_at_displacement(self, harmonic, alpha2):
        spec, _ = harmonic
        req = make_request(spec, alpha2, 0.1, [0.0, 1.0])
        x = np.linspace(-8, 8, 1601)
        psi = wavefunction_on_grid(req, 0.0, x)
        dens = np.abs(psi) ** 2
        center = float(np.sum(x * dens) / np.sum(dens))
        assert center == pytest.approx(2 * math.sqrt(2), abs=1e-6)

    def test_grid_norm_conserved(self, harmonic, alpha2):
        spec, _ = harmonic
        req = make_request(spec, alpha2, 0.1, [0.0, 1.0])
        x = np.linspace(-10, 10, 2001)
        dx = x[1] - x[0]
        for tau in [0.0, 7.3, 19.9]:
            psi = wavefunction_on_grid(req, tau, x)
            assert float(np.sum(np.abs(psi) ** 2) * dx) == pytest.approx(1.0, abs=1e-6)

    def test_non_harmonic_rejected(self):
        spec, state = custom_superposition([0.5, 1.5], [1.0, 1.0])
        req = make_request(spec, state, 0.1, [0.0, 1.0])
        with pytest.raises(UnsupportedSystemError):
            wavefunction_on_grid(req, 0.0, np.linspace(-1, 1, 5))


class TestPhaseSpaceTrajectory:
    def test_small_lambda_circular_orbit(self, harmonic, alpha2):
        spec, obs = harmonic
        taus = np.linspace(0, 2 * np.pi, 257)
        req = make_request(spec, alpha2, 1e-5, taus)
        points = phase_space_trajectory(req, obs)
        radii = [math.hypot(p.mean_x, p.mean_p) for p in points]
        np.testing.assert_allclose(radii, 2 * math.sqrt(2), atol=1e-4)
        assert all(abs(p.var_x - 0.5) < 1e-4 for p in points)

    def test_intermediate_lambda_coherence_loss(self, harmonic, alpha2):
        spec, obs = harmonic
        taus = np.linspace(0, 3 * 2 * np.pi, 1025)
        req = make_request(spec, alpha2, 0.1, taus)
        points = phase_space_trajectory(req, obs)
        assert max(p.var_x for p in points) > 3 * points[0].var_x

    def test_uncertainty_floor(self, harmonic, alpha2):
        spec, obs = harmonic
        for lam in (1e-5, 0.1, 1e3):
            taus = np.linspace(0, 30, 301)
            req = make_request(spec, alpha2, lam, taus)
            for p in phase_space_trajectory(req, obs):
                assert p.var_x * p.var_p - p.covar_xp**2 >= 0.25 - 1e-9
                assert p.norm == pytest.approx(1.0, abs=1e-12)

    def test_mode_degeneracy_small_lambda(self, harmonic, alpha2):
        spec, obs = harmonic
        taus = np.linspace(0, 10, 301)
        osc = phase_space_trajectory(make_request(spec, alpha2, 1e-5, taus), obs)
        ref = phase_space_trajectory(
            make_request(spec, alpha2, 1e-5, taus, "small_lambda_reference"), obs
        )
        for a, b in zip(osc, ref):
            assert a.mean_x == pytest.approx(b.mean_x, abs=1e-6)
            assert a.var_x == pytest.approx(b.var_x, abs=1e-6)


class TestRequestValidation:
    def test_bad_mode(self, harmonic, alpha2):
        spec, _ = harmonic
        with pytest.raises(DomainError):
            make_request(spec, alpha2, 0.1, [0.0, 1.0], "bogus")

    def test_non_increasing_grid(self, harmonic, alpha2):
        spec, _ = harmonic
        with pytest.raises(DomainError):
            make_request(spec, alpha2, 0.1, [1.0, 0.5])

    def test_dimension_mismatch(self, harmonic):
        spec, _ = harmonic
        small = coherent_state(CoherentStateSpec(alpha=0.0, cutoff=4))
        with pytest.raises(DomainError):
            make_request(spec, small, 0.1, [0.0, 1.0])


class TestDefaultTauGrid:
    def test_covers_range(self, harmonic, alpha2):
        spec, _ = harmonic
        grid = default_tau_grid(spec, alpha2, ClockParams(lam=0.1), 25.0)
        assert grid[0] == 0.0
        assert grid[-1] == 25.0
        assert np.all(np.diff(grid) > 0)

    def test_densifies_for_resolvable_clock_cycles(self, harmonic, alpha2):
        spec, _ = harmonic
        coarse = default_tau_grid(spec, alpha2, ClockParams(lam=0.01), 25.0,
                                  samples_per_clock_cycle=0)
        fine = default_tau_grid(spec, alpha2, ClockParams(lam=10.0), 25.0)
        assert len(fine) > len(coarse)
