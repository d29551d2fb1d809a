"""Config-driven experiment runner and command-line entry point.

A run is described by a flat INI document (sections ``[battery]``,
``[charger]``, ``[protocol]``, ``[grid]``, ``[backend]``, ``[sweep]``,
``[output]``) or by one of the bundled figure presets.  Results are emitted
as CSV files plus a JSON manifest; floats are printed with 12 significant
digits so repeated runs of the same config diff byte-identically.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import hashlib
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .dynamics import BackendKind, PropagatorBackend
from .errors import ParameterError
from .hamiltonians import Family, HamiltonianSpec, ProtocolSpec
from .metrics import (
    SweepRecord,
    TimeGrid,
    TimeSeries,
    fit_log10,
    stored_energy_series,
    substituted_protocol,
)
from .metrics import _resolve_workers

_SERIES_HEADER = "t,delta_e,power"
_SWEEP_HEADER = "param,value,de_max,t_e,p_max,t_p"

_BACKEND_ALIASES = {
    "dense": BackendKind.DENSE_EIGEN,
    "denseeigen": BackendKind.DENSE_EIGEN,
    "krylov": BackendKind.KRYLOV_LANCZOS,
    "krylovlanczos": BackendKind.KRYLOV_LANCZOS,
}


def _fmt(x: float) -> str:
    """Fixed 12-significant-digit scientific notation."""
    return f"{float(x):.11e}"


def _fmt_value(parameter: str, value) -> str:
    return str(int(value)) if parameter == "N" else _fmt(value)


@dataclass(frozen=True)
class SweepPlan:
    """One swept parameter, its values, and optional charger variants."""

    parameter: str
    values: tuple
    families: tuple[Family, ...] | None = None
    emit_series: bool = False


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved description of one run (single point or sweep)."""

    protocol: ProtocolSpec
    grid: TimeGrid
    backend: PropagatorBackend
    sweep: SweepPlan | None
    output_dir: str
    label: str
    seed: int | None = None

    def consumed_parameters(self) -> dict:
        """Everything that feeds the computation, for manifest and hashing."""
        params = {
            "battery": _spec_dict(self.protocol.battery),
            "charger": _spec_dict(self.protocol.charger),
            "N": self.protocol.num_qubits,
            "lambda": self.protocol.lam,
            "t_on": self.protocol.t_on,
            "extended_lambda": self.protocol.extended_lambda,
            "literal_ata_sum": self.protocol.literal_ata_sum,
            "grid": {"start": self.grid.start, "end": self.grid.end,
                     "step": self.grid.step,
                     "refinement_factor": self.grid.refinement_factor},
            "backend": {"kind": self.backend.kind.value,
                        "krylov_dim": self.backend.krylov_dim,
                        "tolerance": self.backend.tolerance},
        }
        if self.sweep is not None:
            params["sweep"] = {
                "parameter": self.sweep.parameter,
                "values": list(self.sweep.values),
                "emit_series": self.sweep.emit_series,
            }
            if self.sweep.families is not None:
                params["sweep"]["families"] = [f.value
                                               for f in self.sweep.families]
        if self.seed is not None:
            params["seed"] = self.seed
        return params


def _spec_dict(spec: HamiltonianSpec) -> dict:
    out = {"family": spec.family.value}
    for key in ("h", "J", "gamma", "K"):
        value = getattr(spec, key)
        if value is not None:
            out[key] = value
    return out


def config_hash(config: ExperimentConfig) -> str:
    """Stable digest of the consumed parameters (not of outputs or paths)."""
    text = json.dumps(config.consumed_parameters(), sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# config document parsing


class _Section:
    """One INI section with typed, name-carrying key extraction."""

    def __init__(self, name: str, pairs: dict):
        self.name = name
        self.pairs = dict(pairs)

    def take(self, key: str, convert, default=None, required=False):
        if key not in self.pairs:
            if required:
                raise ParameterError(f"missing required key {self.name}.{key}")
            return default
        raw = self.pairs.pop(key).strip()
        if raw == "":
            return default
        try:
            return convert(raw)
        except ParameterError:
            raise
        except (ValueError, TypeError) as exc:
            raise ParameterError(f"bad value for {self.name}.{key}: {exc}")

    def reject_leftovers(self):
        if self.pairs:
            key = sorted(self.pairs)[0]
            raise ParameterError(f"unknown key {self.name}.{key}")


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


def _parse_family(raw: str) -> Family:
    for family in Family:
        if family.value.lower() == raw.strip().lower():
            return family
    names = ", ".join(f.value for f in Family)
    raise ValueError(f"unknown family {raw!r} (choose from {names})")


def _parse_backend_kind(raw: str) -> BackendKind:
    kind = _BACKEND_ALIASES.get(raw.strip().lower())
    if kind is None:
        raise ValueError(f"unknown backend {raw!r} (dense or krylov)")
    return kind


def _parse_float_list(raw: str) -> tuple[float, ...]:
    items = [piece for piece in raw.replace("\n", ",").split(",")
             if piece.strip()]
    if not items:
        raise ValueError("empty value list")
    return tuple(float(piece) for piece in items)


def _parse_family_list(raw: str) -> tuple[Family, ...]:
    items = [piece for piece in raw.split(",") if piece.strip()]
    return tuple(_parse_family(piece) for piece in items)


def _hamiltonian_from_section(section: _Section) -> HamiltonianSpec:
    family = section.take("family", _parse_family, required=True)
    h = section.take("h", float)
    J = section.take("J", float)
    gamma = section.take("gamma", float)
    K = section.take("K", int)
    section.reject_leftovers()
    # conventional defaults so a minimal document stays valid
    if family is Family.FIELD_Z and h is None:
        h = 1.0
    if family in (Family.XY_NN, Family.XY_ATA) and gamma is None:
        gamma = 0.5
    try:
        return HamiltonianSpec(family, h=h, J=J, gamma=gamma, K=K)
    except ParameterError as exc:
        raise ParameterError(f"[{section.name}] {exc}")


def parse_config(text: str, label: str = "config") -> ExperimentConfig:
    """Validate an INI document and resolve it to an ExperimentConfig.

    Every failure names the offending section and key.  A document whose
    only section is ``[preset]`` resolves to the named preset binding.
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keys are case-sensitive (N, J, K, ...)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ParameterError(f"malformed config document: {exc}")

    sections = {name: _Section(name, dict(parser.items(name)))
                for name in parser.sections()}
    known = {"preset", "battery", "charger", "protocol", "grid", "backend",
             "sweep", "output"}
    for name in sections:
        if name not in known:
            raise ParameterError(f"unknown section [{name}]")

    if "preset" in sections:
        extra = sorted(set(sections) - {"preset"})
        if extra:
            raise ParameterError(
                f"a preset reference replaces the whole document; remove "
                f"section [{extra[0]}]")
        section = sections["preset"]
        name = section.take("name", str, required=True)
        section.reject_leftovers()
        return preset_config(name)

    for required in ("battery", "charger", "protocol"):
        if required not in sections:
            raise ParameterError(f"missing required section [{required}]")

    battery = _hamiltonian_from_section(sections["battery"])
    charger = _hamiltonian_from_section(sections["charger"])

    protocol_section = sections["protocol"]
    num_qubits = protocol_section.take("N", int, required=True)
    lam = protocol_section.take("lambda", float, required=True)
    t_on = protocol_section.take("t_on", float)
    extended = protocol_section.take("extended_lambda", _parse_bool,
                                     default=False)
    literal = protocol_section.take("literal_ata_sum", _parse_bool,
                                    default=False)
    protocol_section.reject_leftovers()
    try:
        protocol = ProtocolSpec(battery, charger, lam=lam,
                                num_qubits=num_qubits, t_on=t_on,
                                extended_lambda=extended,
                                literal_ata_sum=literal)
    except ParameterError as exc:
        raise ParameterError(f"[protocol] {exc}")

    grid_section = sections.get("grid", _Section("grid", {}))
    end = grid_section.take("end", float, default=100.0)
    step = grid_section.take("step", float, default=0.05)
    refinement = grid_section.take("refinement_factor", int, default=10)
    grid_section.reject_leftovers()
    try:
        grid = TimeGrid(end=end, step=step, refinement_factor=refinement)
    except ParameterError as exc:
        raise ParameterError(f"[grid] {exc}")

    backend_section = sections.get("backend", _Section("backend", {}))
    kind = backend_section.take("kind", _parse_backend_kind,
                                default=BackendKind.DENSE_EIGEN)
    krylov_dim = backend_section.take("krylov_dim", int, default=30)
    tolerance = backend_section.take("tolerance", float, default=1e-10)
    seed = backend_section.take("seed", int)
    backend_section.reject_leftovers()
    try:
        backend = PropagatorBackend(kind, krylov_dim, tolerance)
    except ParameterError as exc:
        raise ParameterError(f"[backend] {exc}")

    sweep = None
    if "sweep" in sections:
        sweep_section = sections["sweep"]
        parameter = sweep_section.take("parameter", str, required=True)
        if parameter not in ("lambda", "N", "J"):
            raise ParameterError(
                f"bad value for sweep.parameter: {parameter!r} "
                "(choose from lambda, N, J)")
        values = sweep_section.take("values", _parse_float_list,
                                    required=True)
        families = sweep_section.take("families", _parse_family_list)
        emit_series = sweep_section.take("series", _parse_bool, default=False)
        sweep_section.reject_leftovers()
        if parameter == "N":
            if any(v != int(v) for v in values):
                raise ParameterError(
                    "bad value for sweep.values: ring sizes must be integers")
            values = tuple(int(v) for v in values)
        sweep = SweepPlan(parameter, values, families, emit_series)
        for value in values:
            try:
                base = protocol if families is None else dataclasses.replace(
                    protocol, charger=_family_charger(families[0], charger))
                substituted_protocol(base, parameter, value)
            except ParameterError as exc:
                raise ParameterError(f"[sweep] value {value:g}: {exc}")

    output_section = sections.get("output", _Section("output", {}))
    directory = output_section.take("directory", str,
                                    default=f"out_{label}")
    output_section.reject_leftovers()

    return ExperimentConfig(protocol=protocol, grid=grid, backend=backend,
                            sweep=sweep, output_dir=directory, label=label,
                            seed=seed)


def _family_charger(family: Family, template: HamiltonianSpec) -> HamiltonianSpec:
    """Charger spec for one family, inheriting h/J/gamma from the template."""
    J = template.J if template.J is not None else 1.0
    h = template.h if template.h is not None else 1.0
    gamma = template.gamma if template.gamma is not None else 0.5
    if family is Family.FIELD_Z:
        return HamiltonianSpec(family, h=h)
    if family in (Family.XY_NN, Family.XY_ATA):
        return HamiltonianSpec(family, J=J, gamma=gamma)
    return HamiltonianSpec(family, J=J)


# ---------------------------------------------------------------------------
# figure presets

_FIG_GRID = TimeGrid(end=100.0, step=0.05, refinement_factor=10)
_ALL_CHARGERS = (Family.ISING_ATA, Family.ISING_NN,
                 Family.XY_ATA, Family.XY_NN)

_LAMBDA_5 = (0.0, 0.25, 0.5, 0.75, 1.0)
_LAMBDA_11 = tuple(round(0.1 * i, 10) for i in range(11))
_LAMBDA_EXTENDED = tuple(round(0.1 * i, 10) for i in range(51))
_J_SWEEP = (0.25,) + tuple(round(0.5 + 0.1 * i, 10) for i in range(16)) + (4.0,)


def _field_battery() -> HamiltonianSpec:
    return HamiltonianSpec(Family.FIELD_Z, h=1.0)


def _preset_protocol(battery, charger, lam, N, extended=False) -> ProtocolSpec:
    return ProtocolSpec(battery, charger, lam=lam, num_qubits=N,
                        extended_lambda=extended)


def _preset_definitions() -> dict:
    """name -> (config factory, one-line description)."""
    field = _field_battery
    ising_nn = lambda: HamiltonianSpec(Family.ISING_NN, J=1.0)
    ising_ata = lambda: HamiltonianSpec(Family.ISING_ATA, J=1.0)
    xy_nn = lambda: HamiltonianSpec(Family.XY_NN, J=1.0, gamma=0.5)
    xy_ata = lambda: HamiltonianSpec(Family.XY_ATA, J=1.0, gamma=0.5)

    def single_family(name, battery, charger, lam, N, parameter, values,
                      emit_series, extended=False):
        protocol = _preset_protocol(battery(), charger(), lam, N, extended)
        sweep = SweepPlan(parameter, values, None, emit_series)
        return ExperimentConfig(protocol=protocol, grid=_FIG_GRID,
                                backend=PropagatorBackend.dense(),
                                sweep=sweep, output_dir=f"out_{name}",
                                label=name)

    def multi_family(name, lam, N, parameter, values):
        protocol = _preset_protocol(_field_battery(), ising_ata(), lam, N)
        sweep = SweepPlan(parameter, values, _ALL_CHARGERS, False)
        return ExperimentConfig(protocol=protocol, grid=_FIG_GRID,
                                backend=PropagatorBackend.dense(),
                                sweep=sweep, output_dir=f"out_{name}",
                                label=name)

    defs = {}

    def add(name, factory, description):
        defs[name] = (lambda: factory(name), description)

    for name, desc in (("fig2a", "stored energy vs time across lambda"),
                       ("fig2b", "charging power vs time across lambda")):
        add(name, lambda n: single_family(n, field, ising_ata, 0.0, 10,
                                          "lambda", _LAMBDA_5, True), desc)
    add("fig2c1", lambda n: single_family(n, field, ising_ata, 1.0, 5, "N",
                                          (5, 7, 9, 11), True),
        "stored energy vs time for odd ring sizes")
    add("fig2c2", lambda n: single_family(n, field, ising_ata, 1.0, 6, "N",
                                          (6, 8, 10, 12), True),
        "stored energy vs time for even ring sizes")
    add("fig2d", lambda n: single_family(n, field, ising_ata, 1.0, 5, "N",
                                         tuple(range(5, 13)), True),
        "charging power vs time across ring sizes")

    add("fig3a", lambda n: multi_family(n, 0.0, 10, "lambda", _LAMBDA_11),
        "peak stored energy vs lambda, four chargers")
    add("fig3b", lambda n: multi_family(n, 0.0, 10, "lambda", _LAMBDA_11),
        "peak power vs lambda, four chargers")
    add("fig3c", lambda n: multi_family(n, 1.0, 4, "N", tuple(range(4, 13))),
        "peak stored energy vs ring size, four chargers")
    add("fig3d", lambda n: multi_family(n, 1.0, 4, "N", tuple(range(4, 13))),
        "peak power vs ring size, four chargers")

    for name, batt, desc in (
            ("fig4a", ising_nn, "stored energy vs time, interacting battery"),
            ("fig4b", ising_nn, "charging power vs time, interacting battery"),
            ("fig4c", xy_nn, "stored energy vs time, anisotropic battery"),
            ("fig4d", xy_nn, "charging power vs time, anisotropic battery")):
        add(name, lambda n, b=batt: single_family(n, b, field, 0.0, 12,
                                                  "lambda", (0.0, 1.0), True),
            desc)

    for name, desc in (
            ("fig5a", "stored energy vs time across battery couplings"),
            ("fig5b", "charging power vs time across battery couplings")):
        add(name, lambda n: single_family(n, ising_nn, field, 0.0, 12, "J",
                                          _J_SWEEP, True), desc)

    for name, batt, chg, desc in (
            ("fig6a", ising_nn, xy_nn, "stored energy, Ising battery XY charger"),
            ("fig6b", ising_nn, xy_nn, "charging power, Ising battery XY charger"),
            ("fig6c", xy_nn, ising_nn, "stored energy, XY battery Ising charger"),
            ("fig6d", xy_nn, ising_nn, "charging power, XY battery Ising charger")):
        add(name, lambda n, b=batt, c=chg: single_family(
            n, b, c, 0.0, 12, "lambda", (0.0, 1.0), True), desc)

    for name, chg, desc in (
            ("fig7a", ising_ata, "peak power vs extended lambda, Ising charger"),
            ("fig7b", xy_ata, "peak power vs extended lambda, XY charger")):
        add(name, lambda n, c=chg: single_family(
            n, field, c, 0.0, 10, "lambda", _LAMBDA_EXTENDED, False,
            extended=True), desc)

    return defs


PRESET_NAMES = tuple(sorted(_preset_definitions()))


def preset_config(name: str) -> ExperimentConfig:
    """The bound ExperimentConfig for one named figure preset."""
    defs = _preset_definitions()
    if name not in defs:
        known = ", ".join(sorted(defs))
        raise ParameterError(f"unknown preset {name!r} (choose from {known})")
    return defs[name][0]()


def _preset_summary(config: ExperimentConfig) -> str:
    p = config.protocol
    parts = [f"battery={p.battery.family.value}",
             f"charger={p.charger.family.value}",
             f"N={p.num_qubits}", f"lambda={p.lam:g}"]
    if config.sweep is not None:
        parts.append(f"sweep={config.sweep.parameter}")
        values = config.sweep.values
        shown = ",".join(f"{v:g}" for v in values) if len(values) <= 8 \
            else f"{values[0]:g}..{values[-1]:g} ({len(values)} pts)"
        parts.append(f"values={shown}")
        if config.sweep.families is not None:
            parts.append("chargers=" + ",".join(
                f.value for f in config.sweep.families))
        if config.sweep.emit_series:
            parts.append("series")
    if p.extended_lambda:
        parts.append("extended")
    return " ".join(parts)


def list_presets() -> list[tuple[str, str, str]]:
    """(name, parameter summary, description) rows, deterministic order."""
    defs = _preset_definitions()
    return [(name, _preset_summary(defs[name][0]()), defs[name][1])
            for name in sorted(defs)]


# ---------------------------------------------------------------------------
# execution and emission


def _write_text(path: Path, lines) -> None:
    path.write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")


def _series_lines(series: TimeSeries):
    yield _SERIES_HEADER
    for t, de, p in zip(series.times, series.delta_e, series.power):
        yield f"{_fmt(t)},{_fmt(de)},{_fmt(p)}"


def _sweep_lines(records: list[SweepRecord]):
    yield _SWEEP_HEADER
    for r in records:
        yield ",".join([r.parameter_name, _fmt_value(r.parameter_name,
                                                     r.parameter_value),
                        _fmt(r.delta_e_max), _fmt(r.t_at_e_max),
                        _fmt(r.p_max), _fmt(r.t_at_p_max)])


def _is_boundary(record: SweepRecord, grid_end: float) -> bool:
    return (record.t_at_e_max >= grid_end - 1e-12
            or record.t_at_p_max >= grid_end - 1e-12)


def _evaluate_points(config: ExperimentConfig, base: ProtocolSpec,
                     workers) -> list:
    """(value, series or None, error or None) per sweep value, input order."""
    plan = config.sweep

    def one(value):
        try:
            protocol = substituted_protocol(base, plan.parameter, value)
            series = stored_energy_series(protocol, config.grid,
                                          config.backend)
            return value, series, None
        except Exception as exc:  # noqa: BLE001 - reported per point
            return value, None, f"{type(exc).__name__}: {exc}"

    count = min(_resolve_workers(workers), max(len(plan.values), 1))
    if count <= 1 or len(plan.values) <= 1:
        return [one(v) for v in plan.values]
    with ThreadPoolExecutor(max_workers=count) as pool:
        return list(pool.map(one, plan.values))


def run(config: ExperimentConfig, workers=None, echo=print) -> int:
    """Execute one config, write CSVs and the manifest, return exit status."""
    started = time.time()
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    manifest = {
        "label": config.label,
        "version": __version__,
        "parameters": config.consumed_parameters(),
        "config_hash": config_hash(config),
        "convention": ("literal_double" if config.protocol.literal_ata_sum
                       else "single_count"),
        "outputs": [],
        "partial": False,
        "boundary_max": False,
        "errors": [],
    }
    grid_end = float(config.grid.times()[-1])
    status = 0

    if config.sweep is None:
        series = stored_energy_series(config.protocol, config.grid,
                                      config.backend)
        _write_text(out_dir / "series.csv", _series_lines(series))
        manifest["outputs"].append("series.csv")
        record = SweepRecord.from_series("lambda", config.protocol.lam, series)
        manifest["results"] = {
            "de_max": record.delta_e_max, "t_e": record.t_at_e_max,
            "p_max": record.p_max, "t_p": record.t_at_p_max}
        manifest["boundary_max"] = _is_boundary(record, grid_end)
    else:
        plan = config.sweep
        variants = ([(None, config.protocol.charger)]
                    if plan.families is None else
                    [(f, _family_charger(f, config.protocol.charger))
                     for f in plan.families])
        fits = {}
        for family, charger in variants:
            tag = "" if family is None else f"_{family.value}"
            base = dataclasses.replace(config.protocol, charger=charger)
            outcomes = _evaluate_points(config, base, workers)
            records = []
            for value, series, error in outcomes:
                if error is not None:
                    label = f"{plan.parameter}={value:g}" + (
                        f" charger={family.value}" if family else "")
                    manifest["errors"].append({"point": label,
                                               "error": error})
                    echo(f"point {label} failed: {error}", file=sys.stderr)
                    continue
                records.append(SweepRecord.from_series(plan.parameter,
                                                       value, series))
                if plan.emit_series:
                    name = f"series{tag}_{plan.parameter}_{value:g}.csv"
                    _write_text(out_dir / name, _series_lines(series))
                    manifest["outputs"].append(name)
            sweep_name = f"sweep{tag}.csv"
            _write_text(out_dir / sweep_name, _sweep_lines(records))
            manifest["outputs"].append(sweep_name)
            if any(_is_boundary(r, grid_end) for r in records):
                manifest["boundary_max"] = True
            if plan.parameter == "J" and len(records) >= 3:
                fit = fit_log10([r.parameter_value for r in records],
                                [r.p_max for r in records])
                fits["all" if family is None else family.value] = {
                    "slope": fit.slope, "intercept": fit.intercept,
                    "r_squared": fit.r_squared}
        if fits:
            manifest["fit"] = fits.get("all", fits)
        if manifest["errors"]:
            manifest["partial"] = True
            status = 1

    manifest["wall_time_s"] = round(time.time() - started, 3)
    with open(out_dir / "manifest.json", "w", encoding="ascii") as sink:
        json.dump(manifest, sink, indent=2, sort_keys=True)
        sink.write("\n")

    if manifest["boundary_max"]:
        echo("warning: a reported maximum sits on the final grid time; "
             "consider a longer grid", file=sys.stderr)
    echo(f"{config.label}: wrote {len(manifest['outputs']) + 1} files to "
         f"{out_dir} in {manifest['wall_time_s']:.1f}s")
    return status


# ---------------------------------------------------------------------------
# command line


def _load_config(path: str) -> ExperimentConfig:
    text = Path(path).read_text(encoding="utf-8")
    return parse_config(text, label=Path(path).stem)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="spinbattery",
        description="Spin-ring quantum battery charging simulations.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="execute a config file or preset")
    run_parser.add_argument("config", nargs="?", help="path to an INI config")
    run_parser.add_argument("--preset", help="named figure preset to run")
    run_parser.add_argument("--output", help="override the output directory")
    run_parser.add_argument("--workers", type=int,
                            help="sweep worker threads (default: CPU count, "
                                 "or the SPINBATTERY_WORKERS variable)")

    sub.add_parser("list-presets", help="show the bundled figure presets")

    validate_parser = sub.add_parser(
        "validate", help="parse a config and report the resolved run")
    validate_parser.add_argument("config", help="path to an INI config")

    args = parser.parse_args(argv)

    if args.command == "list-presets":
        rows = list_presets()
        width = max(len(name) for name, _, _ in rows)
        for name, summary, description in rows:
            print(f"{name:<{width}}  {summary}")
            print(f"{'':<{width}}  {description}")
        return 0

    try:
        if args.command == "validate":
            config = _load_config(args.config)
            print(f"OK {config.label}: {_preset_summary(config)}")
            print(f"config_hash={config_hash(config)}")
            return 0

        if (args.config is None) == (args.preset is None):
            run_parser.error("provide exactly one of <config> or --preset")
        config = (preset_config(args.preset) if args.preset
                  else _load_config(args.config))
        if args.output:
            config = dataclasses.replace(config, output_dir=args.output)
        return run(config, workers=args.workers)
    except ParameterError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
