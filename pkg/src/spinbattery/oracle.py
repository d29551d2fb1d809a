"""Brute-force reference implementations for validating the main build.

Everything here is deliberately slow and simple.  The enumeration path
computes Ising spectra straight from classical spin configurations without
touching the sparse-operator machinery, so an operator-construction bug
cannot confirm itself.
"""

from __future__ import annotations

import numpy as np

from .dynamics import SpectralData, StateVector
from .errors import CapacityError, ParameterError
from .hamiltonians import Family, HamiltonianSpec, interaction_range

ORACLE_MAX_QUBITS = 8
ENUMERATION_MAX_QUBITS = 16
_HERMITICITY_TOL = 1e-12


class DenseOperator:
    """Plain dense Hermitian matrix, capacity-gated for oracle use."""

    def __init__(self, matrix):
        matrix = np.array(matrix, dtype=np.complex128)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ParameterError(f"expected a square matrix, got {matrix.shape}")
        dim = matrix.shape[0]
        num_qubits = dim.bit_length() - 1
        if dim < 2 or dim != 1 << num_qubits:
            raise ParameterError(f"dimension {dim} is not a power of two")
        if num_qubits > ORACLE_MAX_QUBITS:
            raise CapacityError(
                f"oracle operators are limited to {ORACLE_MAX_QUBITS} qubits, "
                f"got {num_qubits}")
        defect = np.abs(matrix - matrix.conj().T).max()
        if defect > _HERMITICITY_TOL:
            raise ParameterError(
                f"matrix is not Hermitian within {_HERMITICITY_TOL} "
                f"(max defect {defect:.3e})")
        matrix.setflags(write=False)
        self.matrix = matrix
        self.num_qubits = num_qubits

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def dense_expm_apply(op: DenseOperator, state: StateVector, t: float) -> StateVector:
    """exp(-i H t) applied through a full dense eigendecomposition.

    Reference realization only; shares no code with the dynamics backends.
    """
    if not isinstance(op, DenseOperator):
        op = DenseOperator(op)
    if op.dimension != state.dimension:
        raise ParameterError(
            f"dimension mismatch: operator {op.dimension}, state {state.dimension}")
    evals, evecs = np.linalg.eigh(op.matrix)
    phases = np.exp(-1j * evals * float(t))
    amps = evecs @ (phases * (evecs.conj().T @ state.amplitudes))
    return StateVector.normalized(amps)


def _classical_bonds(family: Family, num_qubits: int, K: int | None):
    """(site_a, site_b, weight) list built by its own counting logic."""
    bonds = []
    if family is Family.ISING_NN:
        for j in range(num_qubits):
            bonds.append((j, (j + 1) % num_qubits, 1.0))
        return bonds
    max_range = interaction_range(num_qubits) if K is None else K
    for k in range(1, max_range + 1):
        antipodal = num_qubits % 2 == 0 and 2 * k == num_qubits
        sites = range(num_qubits // 2) if antipodal else range(num_qubits)
        for j in sites:
            bonds.append((j, (j + k) % num_qubits, 0.5 ** (k - 1)))
    return bonds


def xbasis_enumeration(spec: HamiltonianSpec, num_qubits: int) -> SpectralData:
    """Exact spectrum of a pure-sigma^x Ising family by classical enumeration.

    Every x-basis configuration s in {+1, -1}^N is an eigenstate, so the
    spectrum is the multiset of classical bond-sum energies.
    """
    if spec.family not in (Family.ISING_NN, Family.ISING_ATA):
        raise ParameterError(
            f"enumeration covers pure-sigma^x families only, got {spec.family.value}")
    num_qubits = int(num_qubits)
    if num_qubits < 3:
        raise ParameterError(f"enumeration needs N >= 3, got {num_qubits}")
    if num_qubits > ENUMERATION_MAX_QUBITS:
        raise CapacityError(
            f"enumeration is limited to {ENUMERATION_MAX_QUBITS} qubits, "
            f"got {num_qubits}")
    configs = np.arange(1 << num_qubits)
    spins = 1.0 - 2.0 * ((configs[:, None] >> np.arange(num_qubits)) & 1)
    energies = np.zeros(configs.size)
    for a, b, weight in _classical_bonds(spec.family, num_qubits, spec.K):
        energies += spec.J * weight * spins[:, a] * spins[:, b]
    energies.sort()
    return SpectralData(energies)
