"""Exact-diagonalization toolkit for spin-chain battery charging protocols."""

from .errors import CapacityError, NumericalError, ParameterError
from .qubit_ops import (
    PauliAxis,
    PauliTerm,
    SparseOperator,
    assemble,
    commutator_norm,
    pauli_site,
)
from .hamiltonians import (
    Family,
    HamiltonianSpec,
    ProtocolPhase,
    ProtocolSpec,
    build,
    interaction_range,
    protocol_hamiltonian,
)
from .dynamics import (
    BackendKind,
    PropagatorBackend,
    ProtocolEvolution,
    SpectralData,
    StateVector,
    evolve_protocol,
    expectation,
    ground_state,
    propagate,
    spectrum,
)
from .metrics import (
    LogFit,
    SweepRecord,
    TimeGrid,
    TimeSeries,
    default_grid,
    fit_linear,
    fit_log10,
    max_over_time,
    power_series,
    run_pairing,
    stored_energy_series,
    sweep_coupling,
    sweep_lambda,
    substituted_protocol,
    sweep_point,
    sweep_size,
)

__version__ = "0.1.0"

from .runner import (  # noqa: E402 - needs __version__ defined first
    ExperimentConfig,
    SweepPlan,
    list_presets,
    parse_config,
    preset_config,
    run,
)

__all__ = [
    "ExperimentConfig",
    "SweepPlan",
    "list_presets",
    "parse_config",
    "preset_config",
    "run",
    "BackendKind",
    "CapacityError",
    "Family",
    "HamiltonianSpec",
    "NumericalError",
    "ParameterError",
    "PauliAxis",
    "PauliTerm",
    "PropagatorBackend",
    "ProtocolEvolution",
    "ProtocolPhase",
    "ProtocolSpec",
    "SparseOperator",
    "SpectralData",
    "StateVector",
    "__version__",
    "LogFit",
    "SweepRecord",
    "TimeGrid",
    "TimeSeries",
    "assemble",
    "build",
    "commutator_norm",
    "default_grid",
    "evolve_protocol",
    "expectation",
    "fit_linear",
    "fit_log10",
    "ground_state",
    "interaction_range",
    "max_over_time",
    "pauli_site",
    "power_series",
    "propagate",
    "protocol_hamiltonian",
    "run_pairing",
    "spectrum",
    "stored_energy_series",
    "sweep_coupling",
    "sweep_lambda",
    "substituted_protocol",
    "sweep_point",
    "sweep_size",
]
