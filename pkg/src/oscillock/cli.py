"""Configuration-driven command line front end.

One subcommand per output kind: evolve (trajectory moments), phases
(eigenstate phase curves), density (|psi(x,tau)|^2 grid), sigma-sweep
(dephasing vs clock stiffness) and bound (clock-period bound arithmetic).
Every artifact is a UTF-8 CSV with a header row and comment lines recording
the tool version and a hash of the fully resolved configuration, so
identical configs produce byte-identical files.

Exit codes: 0 success, 2 configuration error, 3 numerical error.
"""

from __future__ import annotations

import copy
import hashlib
import json
import sys
from pathlib import Path

import click
import numpy as np
import yaml

import oscillock
from oscillock.clock import ClockParams
from oscillock.errors import NumericalError, OscillockError
from oscillock.evolution import (
    EvolutionRequest,
    default_tau_grid,
    observable_series,
    phase_space_trajectory,
    wavefunction_on_grid,
)
from oscillock.phases import (
    accumulated_phase_grid,
    large_lambda_phase,
    small_lambda_phase,
)
from oscillock.periods import clock_period_bound, sigma_vs_lambda
from oscillock.systems import (
    CoherentStateSpec,
    ObservableMatrix,
    Spectrum,
    StateVector,
    coherent_state,
    custom_superposition,
    harmonic_observables,
    harmonic_spectrum,
    hydrogen_system,
)

DEFAULT_CONFIG: dict = {
    "system": {
        "kind": "harmonic",  # harmonic | hydrogen | custom
        "omega": 1.0,
        "mass": 1.0,
        "alpha": 2.0,
        "cutoff": 64,
        "n_max": 4,
        "energies": [],
        "amplitudes": [],
    },
    "clock": {
        "lambda": 0.1,
        "hbar": 1.0,
    },
    "mode": "oscillating",
    "tau": {
        "max": 25.0,
        "samples": 0,  # 0 = choose from the sampling policy below
        "samples_per_period": 256,
        "samples_per_clock_cycle": 40,
    },
    "phases": {
        "eigenstates": [0],
    },
    "density": {
        "x_min": -6.0,
        "x_max": 6.0,
        "x_samples": 241,
        "tau_samples": 401,
    },
    "sweep": {
        "lambda_min": 1.0,
        "lambda_max": 1000.0,
        "points": 7,
        "min_periods": 30,
    },
    "output": {
        "dir": ".",
    },
    "seed": 0,  # reserved; the pipeline is deterministic
}


class ConfigError(OscillockError, ValueError):
    """Invalid or unparseable configuration."""


def _merge(defaults: dict, overrides: dict, path: str = "") -> dict:
    merged = copy.deepcopy(defaults)
    for key, value in overrides.items():
        where = f"{path}.{key}" if path else key
        if key not in defaults:
            raise ConfigError(f"unknown config key: {where!r}")
        if isinstance(defaults[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"config key {where!r} must be a mapping")
            merged[key] = _merge(defaults[key], value, where)
        else:
            merged[key] = value
    return merged


def load_config(path: str | None, lam: float | None = None,
                tau_max: float | None = None, out: str | None = None) -> dict:
    """Resolved config: file contents over defaults, then CLI overrides."""
    overrides: dict = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                overrides = yaml.safe_load(fh) or {}
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse config {path!r}: {exc}") from exc
        if not isinstance(overrides, dict):
            raise ConfigError(f"config {path!r} must be a key/value mapping")
    config = _merge(DEFAULT_CONFIG, overrides)
    if lam is not None:
        config["clock"]["lambda"] = lam
    if tau_max is not None:
        config["tau"]["max"] = tau_max
    if out is not None:
        config["output"]["dir"] = out
    _validate(config)
    return config


def _validate(config: dict) -> None:
    if config["system"]["kind"] not in ("harmonic", "hydrogen", "custom"):
        raise ConfigError(f"system.kind must be harmonic|hydrogen|custom, got {config['system']['kind']!r}")
    if not config["clock"]["lambda"] > 0:
        raise ConfigError(f"clock.lambda must be positive, got {config['clock']['lambda']}")
    if not config["clock"]["hbar"] > 0:
        raise ConfigError(f"clock.hbar must be positive, got {config['clock']['hbar']}")
    if config["mode"] not in ("oscillating", "small_lambda_reference", "large_lambda_reference"):
        raise ConfigError(f"unknown mode {config['mode']!r}")
    if not config["tau"]["max"] > 0:
        raise ConfigError("tau.max must be positive")
    sweep = config["sweep"]
    if not (0 < sweep["lambda_min"] < sweep["lambda_max"]):
        raise ConfigError("sweep requires 0 < lambda_min < lambda_max")
    if sweep["points"] < 2:
        raise ConfigError("sweep.points must be >= 2")


def config_hash(config: dict) -> str:
    # identifies the scientific inputs only: where the files land is not
    # part of what they contain
    hashed = {k: v for k, v in config.items() if k != "output"}
    return hashlib.sha256(json.dumps(hashed, sort_keys=True).encode()).hexdigest()[:16]


def build_scenario(config: dict) -> tuple[Spectrum, StateVector, dict[str, ObservableMatrix]]:
    sys_cfg = config["system"]
    kind = sys_cfg["kind"]
    if kind == "harmonic":
        cutoff = int(sys_cfg["cutoff"])
        spectrum = harmonic_spectrum(cutoff, sys_cfg["omega"], config["clock"]["hbar"])
        observables = harmonic_observables(
            cutoff, sys_cfg["omega"], config["clock"]["hbar"], sys_cfg["mass"]
        )
        state = coherent_state(CoherentStateSpec(alpha=complex(sys_cfg["alpha"]), cutoff=cutoff))
        return spectrum, state, observables
    if kind == "hydrogen":
        spectrum, observables = hydrogen_system(int(sys_cfg["n_max"]))
        amps = sys_cfg["amplitudes"] or [1.0] * len(spectrum)
        if len(amps) != len(spectrum):
            raise ConfigError(
                f"hydrogen amplitudes length {len(amps)} != number of states {len(spectrum)}"
            )
        amps = np.asarray(amps, dtype=complex)
        state = StateVector(amps / np.linalg.norm(amps))
        return spectrum, state, observables
    energies = sys_cfg["energies"]
    amplitudes = sys_cfg["amplitudes"]
    if not energies:
        raise ConfigError("custom system requires system.energies")
    spectrum, state = custom_superposition(energies, amplitudes or [1.0] * len(energies))
    return spectrum, state, {}


def build_request(config: dict, spectrum: Spectrum, state: StateVector) -> EvolutionRequest:
    clock = ClockParams(lam=config["clock"]["lambda"], hbar=config["clock"]["hbar"])
    tau_cfg = config["tau"]
    if tau_cfg["samples"] > 0:
        grid = np.linspace(0.0, tau_cfg["max"], int(tau_cfg["samples"]))
    else:
        grid = default_tau_grid(
            spectrum, state, clock, tau_cfg["max"],
            samples_per_system_period=int(tau_cfg["samples_per_period"]),
            samples_per_clock_cycle=int(tau_cfg["samples_per_clock_cycle"]),
        )
    return EvolutionRequest(
        spectrum=spectrum, initial_state=state, clock=clock,
        tau_grid=grid, mode=config["mode"],
    )


def write_csv(path: Path, config: dict, columns: dict[str, np.ndarray]) -> None:
    """Deterministic CSV: comment lines, header row, >= 16 significant digits."""
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    length = len(arrays[0])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# oscillock {oscillock.__version__} config_hash={config_hash(config)}\n")
        fh.write(",".join(names) + "\n")
        for i in range(length):
            fh.write(",".join(f"{float(a[i]):.16e}" for a in arrays) + "\n")


@click.group()
@click.version_option(version=oscillock.__version__, prog_name="oscillock")
def cli() -> None:
    """Relational evolution against an oscillating harmonic clock."""


_config_opt = click.option("--config", "config_path", type=click.Path(), default=None,
                           help="YAML config file; defaults apply for absent keys.")
_lambda_opt = click.option("--lambda", "lam", type=float, default=None,
                           help="Override clock.lambda.")
_tau_max_opt = click.option("--tau-max", type=float, default=None, help="Override tau.max.")
_out_opt = click.option("--out", type=click.Path(), default=None, help="Output directory.")


@cli.command()
@_config_opt
@_lambda_opt
@_tau_max_opt
@_out_opt
def evolve(config_path, lam, tau_max, out) -> None:
    """Expectation values and second-order moments along tau."""
    config = load_config(config_path, lam, tau_max, out)
    spectrum, state, observables = build_scenario(config)
    request = build_request(config, spectrum, state)
    out_dir = Path(config["output"]["dir"])
    if config["system"]["kind"] == "harmonic":
        points = phase_space_trajectory(request, observables)
        columns = {
            "tau": [p.tau for p in points],
            "mean_x": [p.mean_x for p in points],
            "mean_p": [p.mean_p for p in points],
            "var_x": [p.var_x for p in points],
            "var_p": [p.var_p for p in points],
            "covar_xp": [p.covar_xp for p in points],
            "norm": [p.norm for p in points],
        }
        target = out_dir / "trajectory.csv"
    elif config["system"]["kind"] == "hydrogen":
        series = observable_series(request, observables["r"], observables["r2"])
        columns = {
            "tau": [s[0] for s in series],
            "mean_r": [s[1] for s in series],
            "var_r": [s[2] for s in series],
        }
        target = out_dir / "radius.csv"
    else:
        raise ConfigError("evolve needs a harmonic or hydrogen system (custom has no observables)")
    write_csv(target, config, columns)
    click.echo(f"wrote {target}")


@cli.command()
@_config_opt
@_lambda_opt
@_tau_max_opt
@_out_opt
def phases(config_path, lam, tau_max, out) -> None:
    """Accumulated phase of chosen eigenstates with both reference laws."""
    config = load_config(config_path, lam, tau_max, out)
    spectrum, state, _ = build_scenario(config)
    request = build_request(config, spectrum, state)
    indices = [int(i) for i in config["phases"]["eigenstates"]]
    for i in indices:
        if not 0 <= i < len(spectrum):
            raise ConfigError(f"phases.eigenstates index {i} out of range 0..{len(spectrum) - 1}")
    grid = request.tau_grid
    columns: dict[str, np.ndarray] = {"tau": grid}
    for i in indices:
        energy = float(spectrum.energies[i])
        columns[f"phase_k{i}"] = accumulated_phase_grid(grid, energy, request.clock)
        columns[f"small_lambda_k{i}"] = np.array(
            [small_lambda_phase(t, energy, request.clock) for t in grid]
        )
        columns[f"large_lambda_k{i}"] = np.array(
            [large_lambda_phase(t, energy, request.clock) for t in grid]
        )
    target = Path(config["output"]["dir"]) / "phases.csv"
    write_csv(target, config, columns)
    click.echo(f"wrote {target}")


@cli.command()
@_config_opt
@_lambda_opt
@_tau_max_opt
@_out_opt
def density(config_path, lam, tau_max, out) -> None:
    """|psi(x, tau)|^2 on a rectangular grid (harmonic systems only)."""
    config = load_config(config_path, lam, tau_max, out)
    spectrum, state, _ = build_scenario(config)
    request = build_request(config, spectrum, state)
    den_cfg = config["density"]
    x_grid = np.linspace(den_cfg["x_min"], den_cfg["x_max"], int(den_cfg["x_samples"]))
    taus = np.linspace(0.0, config["tau"]["max"], int(den_cfg["tau_samples"]))
    rows_tau, rows_x, rows_d = [], [], []
    for t in taus:
        psi = wavefunction_on_grid(request, float(t), x_grid)
        dens = np.abs(psi) ** 2
        rows_tau.extend([float(t)] * len(x_grid))
        rows_x.extend(x_grid.tolist())
        rows_d.extend(dens.tolist())
    target = Path(config["output"]["dir"]) / "density.csv"
    write_csv(target, config, {"tau": rows_tau, "x": rows_x, "density": rows_d})
    click.echo(f"wrote {target}")


@cli.command("sigma-sweep")
@_config_opt
@_out_opt
def sigma_sweep(config_path, out) -> None:
    """Relative period deviation vs lambda, numeric against analytic."""
    config = load_config(config_path, None, None, out)
    if config["system"]["kind"] != "harmonic":
        raise ConfigError("sigma-sweep currently supports the harmonic system")
    spectrum, state, observables = build_scenario(config)
    request = build_request(config, spectrum, state)
    sweep = config["sweep"]
    lams = np.logspace(
        np.log10(sweep["lambda_min"]), np.log10(sweep["lambda_max"]), int(sweep["points"])
    )
    comparison = sigma_vs_lambda(request, lams, observables["x"],
                                 min_periods=int(sweep["min_periods"]))
    target = Path(config["output"]["dir"]) / "sigma_sweep.csv"
    write_csv(target, config, {
        "lambda": comparison.lambda_values,
        "sigma_numeric": comparison.numeric_sigma,
        "sigma_analytic": comparison.analytic_sigma,
        "relative_period_std": comparison.numeric_relative,
        "n_periods": comparison.n_periods,
        "numeric_slope": np.full(len(lams), comparison.numeric_slope),
        "analytic_slope": np.full(len(lams), comparison.analytic_slope),
    })
    click.echo(f"wrote {target}")
    click.echo(f"numeric log-log slope: {comparison.numeric_slope:.4f}")


@cli.command()
@click.option("--sigma", type=float, required=True, help="Measured relative period deviation.")
@click.option("--system-period", type=float, required=True, help="System period T_S (seconds).")
@_out_opt
def bound(sigma, system_period, out) -> None:
    """Upper bound on the fundamental clock period, ~ 9.7 sigma T_S."""
    config = _merge(DEFAULT_CONFIG, {})
    if out is not None:
        config["output"]["dir"] = out
    value = clock_period_bound(sigma, system_period)
    click.echo(f"T_C <= {value:.6e} (sigma={sigma:g}, T_S={system_period:g})")
    target = Path(config["output"]["dir"]) / "bound.csv"
    write_csv(target, config, {
        "sigma": [sigma], "system_period": [system_period], "clock_period_bound": [value],
    })
    click.echo(f"wrote {target}")


def main() -> None:
    try:
        cli.main(standalone_mode=False)
    except click.exceptions.Abort:
        sys.exit(1)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(2)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    except NumericalError as exc:
        click.echo(f"numerical error: {exc}", err=True)
        sys.exit(3)
    except OscillockError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)


if __name__ == "__main__":
    main()
