"""Command-line driver: configs in, deterministic reports out.

Configs are flat key = value text ('#' comments).  Keys: n_spins, larmor,
temperature, molecule_count, circuit_path, observable, bipartition,
ball_radius, seed, output_path.  Relative paths inside a config resolve
against the config file's directory; a path given on the command line
resolves against the working directory.

Reports are JSON with a fixed section layout (config_echo, ensemble,
pathways, entanglement, separability, sweep; unused sections are null)
and floats printed with 17 significant digits, so a report is a
byte-deterministic function of config, circuit text, and seed.  No
timestamps, no environment echo.

Exit codes: 0 success, 1 usage or config or parse trouble, 2 numeric
validation failure such as a non-unitary propagator.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .circuit import (
    CircuitParseError,
    compose_propagator,
    format_circuit,
    parse_circuit,
    random_circuit,
)
from .engine import (
    PATHWAY_TOL,
    compare_pathways,
    ensemble_expectation_sum,
    ensemble_expectation_trace,
    evolve_eigenstate,
)
from .entanglement import (
    SeparabilityReport,
    entanglement_report,
    mixedness_report,
    ppt_report,
)
from .qlinalg import BipartitionSpec, ValidationError
from .spin_system import (
    SpinSystem,
    ThermalEnsemble,
    collective_observable,
    default_energies,
    epsilon_report,
    equilibrium_density_matrix,
    single_spin_observable,
)

SWEEP_AXES = ("x", "y", "z")


class ConfigError(ValueError):
    """Bad or missing configuration; maps to exit code 1."""


class UsageError(ValueError):
    """Bad command line; maps to exit code 1."""


@dataclass(frozen=True)
class RunConfig:
    """Everything one run needs, as loaded from a config file.

    base_dir anchors the relative paths named inside the config.
    """

    n_spins: int
    larmor: tuple[float, ...]
    temperature: float
    molecule_count: float
    circuit_path: str | None = None
    observable: str | None = None
    bipartition: str | None = None
    ball_radius: float | None = None
    seed: int | None = None
    output_path: str | None = None
    base_dir: str = "."

    def resolve(self, path: str) -> str:
        return path if os.path.isabs(path) else os.path.join(self.base_dir, path)


_KEY_ORDER = (
    "n_spins",
    "larmor",
    "temperature",
    "molecule_count",
    "circuit_path",
    "observable",
    "bipartition",
    "ball_radius",
    "seed",
    "output_path",
)
_REQUIRED_KEYS = ("n_spins", "larmor", "temperature", "molecule_count")


def _parse_entries(text: str, label: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{label}:{line_number}: expected key = value, got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _KEY_ORDER:
            raise ConfigError(f"{label}:{line_number}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"{label}:{line_number}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"{label}:{line_number}: empty value for {key!r}")
        entries[key] = value
    return entries


def _config_int(entries: dict[str, str], key: str) -> int:
    try:
        return int(entries[key])
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {entries[key]!r}") from None


def _config_float(entries: dict[str, str], key: str) -> float:
    try:
        value = float(entries[key])
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {entries[key]!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{key} must be finite, got {entries[key]!r}")
    return value


def load_config(path: str) -> RunConfig:
    """Parse and validate a config file; raises ConfigError on any problem."""
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    entries = _parse_entries(text, path)
    for key in _REQUIRED_KEYS:
        if key not in entries:
            raise ConfigError(f"{path}: missing required key {key!r}")

    n_spins = _config_int(entries, "n_spins")
    if not 1 <= n_spins <= 12:
        raise ConfigError(f"n_spins must be in 1..12, got {n_spins}")
    larmor_tokens = entries["larmor"].replace(",", " ").split()
    try:
        larmor = tuple(float(tok) for tok in larmor_tokens)
    except ValueError:
        raise ConfigError(f"larmor must be a list of numbers, got {entries['larmor']!r}") from None
    if len(larmor) != n_spins:
        raise ConfigError(f"larmor needs {n_spins} entries, got {len(larmor)}")
    if not all(math.isfinite(w) for w in larmor):
        raise ConfigError("larmor entries must be finite")
    temperature = _config_float(entries, "temperature")
    if temperature <= 0:
        raise ConfigError(f"temperature must be positive, got {temperature}")
    molecule_count = _config_float(entries, "molecule_count")
    if molecule_count <= 0:
        raise ConfigError(f"molecule_count must be positive, got {molecule_count}")

    base_dir = os.path.dirname(os.path.abspath(path))
    config = RunConfig(
        n_spins=n_spins,
        larmor=larmor,
        temperature=temperature,
        molecule_count=molecule_count,
        circuit_path=entries.get("circuit_path"),
        observable=entries.get("observable"),
        bipartition=entries.get("bipartition"),
        ball_radius=_config_float(entries, "ball_radius") if "ball_radius" in entries else None,
        seed=_config_int(entries, "seed") if "seed" in entries else None,
        output_path=entries.get("output_path"),
        base_dir=base_dir,
    )

    if config.circuit_path is not None:
        resolved = config.resolve(config.circuit_path)
        if not os.path.isfile(resolved):
            raise ConfigError(f"circuit file not found: {resolved}")
    if config.observable is not None:
        parse_observable(config.observable, n_spins)
    if config.bipartition is not None:
        if n_spins < 2:
            raise ConfigError("bipartition requires at least 2 spins")
        try:
            BipartitionSpec.parse(config.bipartition, n_spins)
        except ValidationError as exc:
            raise ConfigError(f"bipartition: {exc}") from None
    if config.ball_radius is not None and config.ball_radius <= 0:
        raise ConfigError(f"ball_radius must be positive, got {config.ball_radius}")
    if config.seed is not None and config.seed < 0:
        raise ConfigError(f"seed must be nonnegative, got {config.seed}")
    return config


def parse_observable(spec: str, n_spins: int) -> tuple[str, np.ndarray]:
    """'x' means the collective x observable; 'x@2' means spin 2 only."""
    text = spec.strip()
    if "@" in text:
        axis, _, spin_text = text.partition("@")
        axis, spin_text = axis.strip(), spin_text.strip()
        _require_config_axis(axis)
        if not spin_text.isdigit():
            raise ConfigError(f"observable spin must be an integer, got {spin_text!r}")
        spin = int(spin_text)
        if not 1 <= spin <= n_spins:
            raise ConfigError(f"observable spin {spin} out of range for {n_spins} spins")
        return f"spin-{spin} {axis}", single_spin_observable(n_spins, axis, spin)
    _require_config_axis(text)
    return f"collective {text}", collective_observable(n_spins, text)


def _require_config_axis(axis: str):
    if axis not in ("x", "y", "z"):
        raise ConfigError(f"observable axis must be x, y, or z, got {axis!r}")


def build_ensemble(config: RunConfig) -> ThermalEnsemble:
    system = SpinSystem(config.n_spins, default_energies(config.n_spins, config.larmor))
    return ThermalEnsemble.boltzmann(system, config.temperature, config.molecule_count)


def _config_echo(config: RunConfig) -> dict:
    # output_path and base_dir are excluded so that redirecting the output
    # of a run never changes the report body.
    return {
        "n_spins": config.n_spins,
        "larmor": list(config.larmor),
        "temperature": config.temperature,
        "molecule_count": config.molecule_count,
        "circuit_path": config.circuit_path,
        "observable": config.observable,
        "bipartition": config.bipartition,
        "ball_radius": config.ball_radius,
        "seed": config.seed,
    }


def _ensemble_section(ensemble: ThermalEnsemble) -> dict:
    eps = epsilon_report(ensemble)
    return {
        "dim": ensemble.system.dim,
        "level_energies": list(ensemble.system.level_energies),
        "epsilon_report": {
            "delta_e": eps.delta_e,
            "epsilon": eps.epsilon,
            "max_population_spread": eps.max_population_spread,
        },
        "populations": ensemble.populations.tolist(),
    }


def _separability_dict(report: SeparabilityReport) -> dict:
    return {
        "min_pt_eigenvalue": report.min_pt_eigenvalue,
        "negativity": report.negativity,
        "ppt_holds": report.ppt_holds,
        "ppt_conclusive": report.ppt_conclusive,
        "frobenius_to_mixed": report.frobenius_to_mixed,
        "purity": report.purity,
        "ball_radius_used": report.ball_radius_used,
        "within_ball": report.within_ball,
    }


def run_simulate(config: RunConfig, output_path: str | None = None) -> dict:
    """Dual-pathway run of one circuit; writes and returns the report."""
    if config.circuit_path is None:
        raise ConfigError("simulate needs circuit_path in the config")
    if config.observable is None:
        raise ConfigError("simulate needs observable in the config")
    if config.n_spins >= 2 and config.bipartition is None:
        raise ConfigError("simulate needs bipartition in the config for 2 or more spins")

    with open(config.resolve(config.circuit_path), encoding="utf-8") as handle:
        circuit_text = handle.read()
    circuit = parse_circuit(circuit_text, config.n_spins)
    propagator = compose_propagator(circuit)
    ensemble = build_ensemble(config)
    _, observable = parse_observable(config.observable, config.n_spins)

    result = compare_pathways(circuit, ensemble, observable)
    tolerance = PATHWAY_TOL * ensemble.molecule_count

    part = None
    if config.n_spins >= 2:
        part = BipartitionSpec.parse(config.bipartition, config.n_spins)
        per_state = []
        for k in range(ensemble.system.dim):
            rep = entanglement_report(evolve_eigenstate(propagator, k), part)
            per_state.append(
                {
                    "initial_eigenstate": k,
                    "schmidt_coefficients": rep.schmidt_coefficients.tolist(),
                    "entropy_bits": rep.entropy_bits,
                    "schmidt_rank": rep.schmidt_rank,
                    "is_product": rep.is_product,
                }
            )
        entanglement_section = {"bipartition": str(part), "per_state": per_state}
    else:
        entanglement_section = None

    rho_initial = equilibrium_density_matrix(ensemble)
    rho_evolved = propagator @ rho_initial @ propagator.conj().T
    if part is not None:
        initial_rep = ppt_report(rho_initial, part, config.ball_radius)
        evolved_rep = ppt_report(rho_evolved, part, config.ball_radius)
    else:
        initial_rep = mixedness_report(rho_initial, config.ball_radius)
        evolved_rep = mixedness_report(rho_evolved, config.ball_radius)

    report = {
        "config_echo": _config_echo(config),
        "ensemble": _ensemble_section(ensemble),
        "pathways": {
            "gate_count": len(circuit.gates),
            "per_state_values": result.per_state_values.tolist(),
            "expectation_sum": result.expectation_sum,
            "expectation_trace": result.expectation_trace,
            "abs_difference": result.abs_difference,
            "tolerance": tolerance,
            "within_tolerance": result.abs_difference <= tolerance,
        },
        "entanglement": entanglement_section,
        "separability": {
            "initial": _separability_dict(initial_rep),
            "evolved": _separability_dict(evolved_rep),
        },
        "sweep": None,
    }
    _write_report(report, config, output_path)
    return report


def run_sweep(config: RunConfig, n_circuits: int, output_path: str | None = None) -> dict:
    """Seeded random circuits, both pathways on all three collective axes."""
    if config.seed is None:
        raise ConfigError("sweep needs seed in the config")
    if n_circuits < 0:
        raise ConfigError(f"circuit count must be nonnegative, got {n_circuits}")

    ensemble = build_ensemble(config)
    observables = {axis: collective_observable(config.n_spins, axis) for axis in SWEEP_AXES}
    tolerance = PATHWAY_TOL * ensemble.molecule_count
    rng = np.random.default_rng(config.seed)

    per_circuit: list[float] = []
    worst = None
    for index in range(n_circuits):
        circuit = random_circuit(config.n_spins, rng)
        propagator = compose_propagator(circuit)
        circuit_max = 0.0
        for axis in SWEEP_AXES:
            a = ensemble_expectation_sum(propagator, ensemble, observables[axis])
            b = ensemble_expectation_trace(propagator, ensemble, observables[axis])
            difference = abs(a - b)
            circuit_max = max(circuit_max, difference)
            if worst is None or difference > worst["abs_difference"]:
                worst = {
                    "circuit_index": index,
                    "observable": f"collective {axis}",
                    "abs_difference": difference,
                    "circuit_text": format_circuit(circuit),
                }
        per_circuit.append(circuit_max)

    report = {
        "config_echo": _config_echo(config),
        "ensemble": _ensemble_section(ensemble),
        "pathways": None,
        "entanglement": None,
        "separability": None,
        "sweep": {
            "n_circuits": n_circuits,
            "observables": [f"collective {axis}" for axis in SWEEP_AXES],
            "tolerance": tolerance,
            "per_circuit_max_difference": per_circuit,
            "max_abs_difference": max(per_circuit) if per_circuit else None,
            "within_tolerance": max(per_circuit) <= tolerance if per_circuit else None,
            "worst_case": worst,
        },
    }
    _write_report(report, config, output_path)
    return report


def _write_report(report: dict, config: RunConfig, output_path: str | None):
    if output_path is not None:
        target = output_path
    elif config.output_path is not None:
        target = config.resolve(config.output_path)
    else:
        raise ConfigError("no output path: set output_path in the config or pass --output")
    with open(target, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(render_report(report))


def render_report(report: dict) -> str:
    """Serialize a report to JSON text, floats at 17 significant digits."""
    return _render_value(report, 0) + "\n"


def _render_value(value, level: int) -> str:
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            raise ValidationError(f"non-finite value {value!r} in report")
        return format(value, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        pad, inner = "  " * level, "  " * (level + 1)
        items = ",\n".join(inner + _render_value(item, level + 1) for item in value)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        pad, inner = "  " * level, "  " * (level + 1)
        items = ",\n".join(
            f"{inner}{json.dumps(str(key))}: {_render_value(item, level + 1)}"
            for key, item in value.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(value).__name__} in report")


def summary_lines(report: dict) -> list[str]:
    """Roughly ten human-readable lines stating what the report shows."""
    echo = report["config_echo"]
    eps = report["ensemble"]["epsilon_report"]
    lines = [
        f"system: {echo['n_spins']} spin(s), dim {report['ensemble']['dim']}",
        f"ensemble: M = {echo['molecule_count']:g} molecules, T = {echo['temperature']:g}, "
        f"epsilon = {eps['epsilon']:.3e}",
    ]
    pathways = report["pathways"]
    if pathways is not None:
        verdict = "yes" if pathways["within_tolerance"] else "NO"
        lines += [
            f"circuit: {echo['circuit_path']} ({pathways['gate_count']} gate(s)), "
            f"observable: {echo['observable']}",
            f"pathway sum:   {pathways['expectation_sum']:.12e}",
            f"pathway trace: {pathways['expectation_trace']:.12e}",
            f"pathway agreement: diff = {pathways['abs_difference']:.3e} "
            f"<= {pathways['tolerance']:.3e}: {verdict}",
        ]
    entanglement = report["entanglement"]
    if entanglement is not None:
        entropies = [entry["entropy_bits"] for entry in entanglement["per_state"]]
        entangled = any(not entry["is_product"] for entry in entanglement["per_state"])
        lines.append(
            f"per-molecule evolved states entangled: {'yes' if entangled else 'no'} "
            f"(entropy range {min(entropies):.6f}..{max(entropies):.6f} bits, "
            f"cut {entanglement['bipartition']})"
        )
    separability = report["separability"]
    if separability is not None:
        evolved = separability["evolved"]
        if evolved["ppt_holds"] is not None:
            claim = "separable" if evolved["ppt_conclusive"] else "PPT (necessary condition only)"
            verdict = "yes" if evolved["ppt_holds"] else "NO"
            lines.append(
                f"evolved ensemble state PPT-separable: {verdict} "
                f"(negativity {evolved['negativity']:.3e}, {claim})"
            )
        lines.append(
            f"distance to maximally mixed: {separability['initial']['frobenius_to_mixed']:.3e} "
            f"initial, {evolved['frobenius_to_mixed']:.3e} evolved"
        )
        if evolved["within_ball"] is not None:
            lines.append(
                f"within user ball (radius {evolved['ball_radius_used']:g}): "
                f"{'yes' if evolved['within_ball'] else 'no'}"
            )
    sweep = report["sweep"]
    if sweep is not None:
        lines.append(
            f"sweep: {sweep['n_circuits']} random circuit(s), seed {echo['seed']}, "
            "observables collective x, y, z"
        )
        if sweep["max_abs_difference"] is None:
            lines.append("sweep verdict: empty sweep, nothing to compare")
        else:
            verdict = "yes" if sweep["within_tolerance"] else "NO"
            lines.append(
                f"sweep max |sum - trace| = {sweep['max_abs_difference']:.3e} "
                f"<= {sweep['tolerance']:.3e}: {verdict}"
            )
            lines.append(f"worst case: circuit {sweep['worst_case']['circuit_index']}, "
                         f"{sweep['worst_case']['observable']}")
    return lines


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so main() owns exit codes."""

    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="spinensemble",
        description="Dual-pathway thermal-ensemble simulator for small spin molecules.",
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="{simulate,sweep}")
    simulate = commands.add_parser("simulate", help="run one circuit through both pathways")
    sweep = commands.add_parser("sweep", help="cross-check pathways on seeded random circuits")
    for sub in (simulate, sweep):
        sub.add_argument("--config", required=True, help="path to a key = value config file")
        sub.add_argument("--output", help="report file path (overrides output_path)")
        sub.add_argument("--ball-radius", type=float, help="overrides ball_radius")
        sub.add_argument("--summary", action="store_true", help="print a short verdict")
    sweep.add_argument("--n", type=int, required=True, help="number of random circuits")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        config = load_config(args.config)
        if args.ball_radius is not None:
            if args.ball_radius <= 0:
                raise UsageError(f"--ball-radius must be positive, got {args.ball_radius}")
            config = dataclasses.replace(config, ball_radius=args.ball_radius)
        if args.command == "simulate":
            report = run_simulate(config, output_path=args.output)
        else:
            report = run_sweep(config, args.n, output_path=args.output)
        if args.summary:
            print("\n".join(summary_lines(report)))
        return 0
    except (UsageError, ConfigError, CircuitParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2


def entry_point():
    sys.exit(main(sys.argv[1:]))
