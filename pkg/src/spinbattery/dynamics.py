"""State preparation, time evolution, and expectation values.

Two propagation backends cover the package's working range:

* ``DenseEigen`` diagonalizes each piecewise-constant generator once and
  then evaluates any sample time exactly: with H = V diag(E) V^dag,
  ``psi(t) = V exp(-i E t) V^dag psi(0)``.  Capacity-gated at 2^13.
* ``KrylovLanczos`` approximates ``exp(-i H t) psi`` in a small Krylov
  subspace with adaptive step halving; it never needs the full spectrum.

All five Hamiltonian families assemble to real symmetric matrices
(sigma^y only ever enters in pairs), so the dense path runs the real
eigensolver and promotes to complex only while sampling.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse.linalg as spla

from .errors import CapacityError, NumericalError, ParameterError
from .hamiltonians import ProtocolPhase, ProtocolSpec, protocol_hamiltonian
from .qubit_ops import SparseOperator

DENSE_DIM_LIMIT = 1 << 13
DEGENERACY_TOL = 1e-9
NORM_TOL = 1e-10
_BREAKDOWN_TOL = 1e-13
# below this dimension a full dense solve is cheaper than ARPACK
_SMALL_DENSE_DIM = 512
_STATE_RETENTION_LIMIT = 1 << 27  # complex amplitudes kept in memory


class BackendKind(enum.Enum):
    DENSE_EIGEN = "DenseEigen"
    KRYLOV_LANCZOS = "KrylovLanczos"


@dataclass(frozen=True)
class PropagatorBackend:
    kind: BackendKind = BackendKind.DENSE_EIGEN
    krylov_dim: int = 30
    tolerance: float = 1e-10

    def __post_init__(self):
        kind = self.kind
        if not isinstance(kind, BackendKind):
            try:
                kind = BackendKind(kind)
            except ValueError:
                names = ", ".join(k.value for k in BackendKind)
                raise ParameterError(
                    f"unknown backend {self.kind!r} (choose from {names})")
            object.__setattr__(self, "kind", kind)
        if int(self.krylov_dim) < 2:
            raise ParameterError(f"krylov_dim must be >= 2, got {self.krylov_dim}")
        object.__setattr__(self, "krylov_dim", int(self.krylov_dim))
        if not self.tolerance > 0.0:
            raise ParameterError(f"tolerance must be > 0, got {self.tolerance}")
        object.__setattr__(self, "tolerance", float(self.tolerance))

    @classmethod
    def dense(cls) -> "PropagatorBackend":
        return cls(BackendKind.DENSE_EIGEN)

    @classmethod
    def krylov(cls, krylov_dim: int = 30, tolerance: float = 1e-10) -> "PropagatorBackend":
        return cls(BackendKind.KRYLOV_LANCZOS, krylov_dim, tolerance)


class StateVector:
    """Unit-norm pure state in canonical global phase.

    The first amplitude whose magnitude is significant (>= 1e-12 of the
    largest) is rotated to the positive real axis, so states equal up to a
    global phase compare equal amplitude-by-amplitude.
    """

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes):
        arr = np.array(amplitudes, dtype=np.complex128)
        if arr.ndim != 1 or arr.size < 2 or arr.size & (arr.size - 1):
            raise ParameterError(
                f"amplitudes must form a 2**N vector, got shape {arr.shape}")
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > NORM_TOL:
            raise ParameterError(
                f"state norm {norm!r} deviates from 1 beyond {NORM_TOL}; "
                "use StateVector.normalized for raw vectors")
        arr /= norm
        mags = np.abs(arr)
        lead = int(np.argmax(mags >= 1e-12 * mags.max()))
        arr *= arr[lead].conjugate() / mags[lead]
        arr.setflags(write=False)
        self.amplitudes = arr

    @classmethod
    def normalized(cls, amplitudes) -> "StateVector":
        """Build from any nonzero vector, normalizing first."""
        arr = np.asarray(amplitudes, dtype=np.complex128)
        norm = float(np.linalg.norm(arr))
        if norm == 0.0:
            raise ParameterError("cannot normalize the zero vector")
        return cls(arr / norm)

    @classmethod
    def basis_state(cls, num_qubits: int, index: int) -> "StateVector":
        dim = 1 << int(num_qubits)
        if not 0 <= index < dim:
            raise ParameterError(f"basis index {index} outside dimension {dim}")
        arr = np.zeros(dim, dtype=np.complex128)
        arr[index] = 1.0
        return cls(arr)

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    def overlap(self, other: "StateVector") -> complex:
        if self.dimension != other.dimension:
            raise ParameterError("state dimensions differ")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def to_text(self) -> str:
        """One ``index re im`` line per amplitude (same layout as operator dumps)."""
        return "\n".join(
            f"{i} {float(a.real)!r} {float(a.imag)!r}"
            for i, a in enumerate(self.amplitudes))

    def __repr__(self) -> str:
        return f"StateVector(num_qubits={self.num_qubits})"


@dataclass(frozen=True)
class SpectralData:
    """Ascending eigenvalues, optionally with the matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=np.float64)
        if vals.ndim != 1 or vals.size == 0:
            raise ParameterError("eigenvalues must be a nonempty 1-D array")
        if np.any(np.diff(vals) < 0):
            raise ParameterError("eigenvalues must be ascending")
        object.__setattr__(self, "eigenvalues", vals)

    def degeneracies(self, tolerance: float = DEGENERACY_TOL):
        """Cluster the spectrum into (representative value, multiplicity) pairs."""
        clusters = []
        for val in self.eigenvalues:
            if clusters and val - clusters[-1][0] <= tolerance:
                rep, count = clusters[-1]
                clusters[-1] = (rep, count + 1)
            else:
                clusters.append((float(val), 1))
        return clusters


def _dense_array(op: SparseOperator) -> np.ndarray:
    """Dense form, dropped to float64 when the stored entries are all real."""
    if op.is_real():
        real = op.matrix.copy()
        real.data = real.data.real
        return real.toarray()
    return op.matrix.toarray()


def spectrum(op: SparseOperator, want_vectors: bool = False) -> SpectralData:
    """Full ascending spectrum by dense diagonalization (gated at 2^13)."""
    if op.dimension > DENSE_DIM_LIMIT:
        raise CapacityError(
            f"dense spectrum limited to dimension {DENSE_DIM_LIMIT}, got "
            f"{op.dimension}; the KrylovLanczos propagator needs no full spectrum")
    dense = _dense_array(op)
    if want_vectors:
        vals, vecs = sla.eigh(dense, driver="evd", check_finite=False)
        return SpectralData(vals, vecs)
    vals = sla.eigh(dense, eigvals_only=True, check_finite=False)
    return SpectralData(vals)


def _select_ground_representative(cluster_basis: np.ndarray) -> StateVector:
    """Deterministic vector out of a (possibly degenerate) ground space.

    Maximizes |amplitude| component-by-component from basis index 0 upward:
    the unique unit vector in the span maximizing |<e_i|psi>| for the first
    reachable index i is P e_i / ||P e_i|| with P the cluster projector.
    """
    weights = np.sum(np.abs(cluster_basis) ** 2, axis=1)
    lead = int(np.argmax(weights > 1e-6))
    coeffs = cluster_basis[lead, :].conj()
    return StateVector.normalized(cluster_basis @ coeffs)


def ground_state(op: SparseOperator) -> tuple[float, StateVector]:
    """Lowest eigenvalue and a deterministic canonical ground vector."""
    dim = op.dimension
    if dim > _SMALL_DENSE_DIM:
        resolved = _ground_cluster_arpack(op)
        if resolved is not None:
            return resolved
        if dim > DENSE_DIM_LIMIT:
            raise NumericalError(
                "iterative ground-state solve did not isolate the lowest "
                f"eigenvalue cluster at dimension {dim} and the dense "
                "fallback is capacity-gated")
    data = spectrum(op, want_vectors=True)
    vals = data.eigenvalues
    inside = vals <= vals[0] + DEGENERACY_TOL
    state = _select_ground_representative(data.eigenvectors[:, inside])
    return float(vals[0]), state


def _ground_cluster_arpack(op: SparseOperator, num: int = 8):
    """Lowest eigenpairs via ARPACK with a fixed start vector.

    Returns None when the requested count may not contain the whole
    degenerate cluster (the caller then falls back to a dense solve).
    """
    dim = op.dimension
    matrix = op.matrix
    if op.is_real():
        matrix = matrix.copy()
        matrix.data = matrix.data.real
    v0 = np.full(dim, 1.0 / np.sqrt(dim),
                 dtype=matrix.dtype)
    try:
        vals, vecs = spla.eigsh(matrix, k=min(num, dim - 1), which="SA", v0=v0)
    except spla.ArpackError:
        return None
    order = np.argsort(vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    inside = vals <= vals[0] + DEGENERACY_TOL
    if inside.all():
        return None  # cluster may extend past the computed window
    state = _select_ground_representative(vecs[:, inside])
    return float(vals[0]), state


def expectation(op: SparseOperator, state: StateVector) -> float:
    """Real expectation value <psi|H|psi> of a Hermitian operator."""
    if op.dimension != state.dimension:
        raise ParameterError(
            f"dimension mismatch: operator {op.dimension}, state {state.dimension}")
    value = complex(np.vdot(state.amplitudes, op.matrix @ state.amplitudes))
    if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
        raise NumericalError(
            f"expectation of a Hermitian operator came out complex: {value!r}")
    return float(value.real)


# ---------------------------------------------------------------------------
# propagation


def _eigenbasis_apply(evals, evecs, amplitudes, t):
    coeffs = evecs.conj().T @ amplitudes
    coeffs *= np.exp(-1j * evals * t)
    return evecs @ coeffs


def _lanczos_step(matrix, vec, dt, krylov_dim):
    """One Krylov approximation of exp(-i dt H) vec.

    Returns (result, error_estimate).  A breakdown of the recurrence means
    the Krylov space closed on an invariant subspace, where the small-matrix
    exponential is exact.
    """
    dim = vec.size
    max_dim = min(krylov_dim, dim)
    basis = np.empty((max_dim, dim), dtype=np.complex128)
    alphas = np.empty(max_dim)
    betas = np.empty(max_dim)
    basis[0] = vec
    for j in range(max_dim):
        w = matrix @ basis[j]
        alphas[j] = np.vdot(basis[j], w).real
        w -= alphas[j] * basis[j]
        if j:
            w -= betas[j - 1] * basis[j - 1]
        # one full re-orthogonalization pass keeps the basis clean
        w -= basis[: j + 1].T @ (basis[: j + 1].conj() @ w)
        betas[j] = np.linalg.norm(w)
        if betas[j] < _BREAKDOWN_TOL or j == max_dim - 1:
            size = j + 1
            tri = np.diag(alphas[:size]) + np.diag(betas[: size - 1], 1) \
                + np.diag(betas[: size - 1], -1)
            small = sla.expm(-1j * dt * tri)[:, 0]
            result = small @ basis[:size]
            if betas[j] < _BREAKDOWN_TOL:
                return result, 0.0
            return result, float(betas[j] * abs(small[-1]))
        basis[j + 1] = w / betas[j]
    raise AssertionError("unreachable")


def _krylov_expm_apply(matrix, amplitudes, t, krylov_dim, tolerance):
    """exp(-i t H) amplitudes with adaptive substepping of t."""
    if t == 0.0:
        return amplitudes.copy()
    state = np.asarray(amplitudes, dtype=np.complex128)
    elapsed = 0.0
    dt = t
    min_step = abs(t) * 2.0 ** -40
    while elapsed != t:
        remaining = t - elapsed
        step = remaining if abs(dt) >= abs(remaining) else dt
        candidate, err = _lanczos_step(matrix, state, step, krylov_dim)
        if err <= tolerance:
            state = candidate
            elapsed = t - (remaining - step)
            if err < 0.01 * tolerance and abs(dt) < abs(t):
                dt *= 2.0
        else:
            dt = step / 2.0
            if abs(dt) < min_step:
                raise NumericalError(
                    "Krylov propagation failed to reach the step tolerance "
                    f"{tolerance} (residual estimate {err:.3e}); retry with a "
                    "larger krylov_dim")
    return state


def propagate(op: SparseOperator, state: StateVector, t: float,
              backend: PropagatorBackend = PropagatorBackend()) -> StateVector:
    """Evolve a state for time t under a constant Hamiltonian."""
    if op.dimension != state.dimension:
        raise ParameterError(
            f"dimension mismatch: operator {op.dimension}, state {state.dimension}")
    t = float(t)
    if not np.isfinite(t):
        raise ParameterError(f"time must be finite, got {t}")
    if backend.kind is BackendKind.DENSE_EIGEN:
        data = spectrum(op, want_vectors=True)
        amps = _eigenbasis_apply(data.eigenvalues, data.eigenvectors,
                                 state.amplitudes, t)
    else:
        amps = _krylov_expm_apply(op.matrix, state.amplitudes, t,
                                  backend.krylov_dim, backend.tolerance)
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > NORM_TOL:
        raise NumericalError(
            f"propagation lost unitarity: norm {norm!r} after t={t}")
    return StateVector(amps / norm)


# ---------------------------------------------------------------------------
# the piecewise charging protocol


class ProtocolEvolution:
    """Evaluates one protocol on arbitrary sample times.

    The generator is constant on each side of ``t_on``, so the dense backend
    diagonalizes at most two matrices regardless of how many samples are
    requested; the Krylov backend walks the sorted times sequentially.
    """

    _CHUNK_ELEMENTS = 1 << 21

    def __init__(self, protocol: ProtocolSpec, backend: PropagatorBackend):
        self.protocol = protocol
        self.backend = backend
        self.h_battery = protocol_hamiltonian(protocol, ProtocolPhase.BEFORE_CHARGING)
        self.h_charging = protocol_hamiltonian(protocol, ProtocolPhase.CHARGING)
        self.ground_energy, self.initial_state = ground_state(self.h_battery)
        self._spectra: dict[str, SpectralData] = {}

    # -- dense-path helpers

    def _eigensystem(self, which: str) -> SpectralData:
        if which not in self._spectra:
            op = self.h_charging if which == "charging" else self.h_battery
            self._spectra[which] = spectrum(op, want_vectors=True)
        return self._spectra[which]

    @staticmethod
    def _left_apply(vectors, block):
        """vectors @ block without the slow strided-view matmul path."""
        if vectors.dtype == np.float64:
            out = np.empty((vectors.shape[0], block.shape[1]), dtype=np.complex128)
            out.real = vectors @ np.ascontiguousarray(block.real)
            out.imag = vectors @ np.ascontiguousarray(block.imag)
            return out
        return vectors @ block

    def _dense_states_at(self, data: SpectralData, start, offsets):
        """Amplitude columns exp(-i H t) start for each offset, chunked."""
        coeffs = data.eigenvectors.conj().T @ start
        dim = start.size
        chunk = max(1, self._CHUNK_ELEMENTS // dim)
        columns = np.empty((dim, offsets.size), dtype=np.complex128)
        for lo in range(0, offsets.size, chunk):
            sel = slice(lo, min(lo + chunk, offsets.size))
            phases = np.exp(np.outer(data.eigenvalues, -1j * offsets[sel]))
            phases *= coeffs[:, None]
            columns[:, sel] = self._left_apply(data.eigenvectors, phases)
        return columns

    def _split_times(self, times):
        times = np.asarray(times, dtype=np.float64)
        if times.ndim != 1:
            raise ParameterError("sample times must be a 1-D sequence")
        if times.size and times.min() < 0.0:
            raise ParameterError("sample times must be >= 0")
        t_on = self.protocol.t_on
        if t_on is None:
            return times, times.size
        return times, int(np.searchsorted(times, t_on, side="right"))

    def _dense_columns(self, times):
        order = np.argsort(times, kind="stable")
        sorted_times = times[order]
        _, n_charging = self._split_times(sorted_times)
        psi0 = self.initial_state.amplitudes
        columns = np.empty((psi0.size, times.size), dtype=np.complex128)
        charging = self._eigensystem("charging")
        columns[:, :n_charging] = self._dense_states_at(
            charging, psi0, sorted_times[:n_charging])
        if n_charging < times.size:
            t_on = self.protocol.t_on
            psi_on = self._dense_states_at(
                charging, psi0, np.array([t_on]))[:, 0]
            battery = self._eigensystem("battery")
            columns[:, n_charging:] = self._dense_states_at(
                battery, psi_on, sorted_times[n_charging:] - t_on)
        inverse = np.empty_like(order)
        inverse[order] = np.arange(order.size)
        return columns[:, inverse]

    def _krylov_columns(self, times):
        order = np.argsort(times, kind="stable")
        sorted_times = times[order]
        self._split_times(sorted_times)
        t_on = self.protocol.t_on
        dim = self.initial_state.dimension
        columns = np.empty((dim, times.size), dtype=np.complex128)
        state = self.initial_state.amplitudes.copy()
        now = 0.0
        on_charger = True
        h_charging = self.h_charging.matrix
        h_battery = self.h_battery.matrix
        for out_idx, t in zip(order, sorted_times):
            if on_charger and t_on is not None and t > t_on:
                if now < t_on:
                    state = self._krylov_to(h_charging, state, t_on - now)
                    now = t_on
                on_charger = False
            generator = h_charging if on_charger else h_battery
            if t != now:
                state = self._krylov_to(generator, state, t - now)
                now = t
            columns[:, out_idx] = state
        return columns

    def _krylov_to(self, matrix, state, dt):
        return _krylov_expm_apply(matrix, state, dt,
                                  self.backend.krylov_dim,
                                  self.backend.tolerance)

    # -- public sampling surface

    def state_columns(self, times) -> np.ndarray:
        """Raw amplitude columns at each requested time (any order, >= 0)."""
        times = np.asarray(times, dtype=np.float64)
        self._split_times(times)
        if times.size == 0:
            return np.empty((self.initial_state.dimension, 0), dtype=np.complex128)
        if self.backend.kind is BackendKind.DENSE_EIGEN:
            return self._dense_columns(times)
        return self._krylov_columns(times)

    def battery_energy(self, times) -> np.ndarray:
        """<H_B> at each requested time."""
        columns = self.state_columns(times)
        if columns.shape[1] == 0:
            return np.empty(0)
        h_columns = self.h_battery.matrix @ columns
        values = np.einsum("ij,ij->j", columns.conj(), h_columns)
        residue = np.abs(values.imag).max()
        if residue > 1e-10 * max(1.0, np.abs(values.real).max()):
            raise NumericalError(
                f"battery energy came out complex (residue {residue:.3e})")
        return values.real

    def states(self, times) -> list[StateVector]:
        columns = self.state_columns(times)
        return [StateVector.normalized(columns[:, i])
                for i in range(columns.shape[1])]


def evolve_protocol(protocol: ProtocolSpec, grid, backend: PropagatorBackend,
                    return_states: bool = False):
    """Sample the protocol on a grid (see metrics.TimeGrid).

    Returns a list of ``(t, <H_B>)`` pairs, or ``(t, StateVector)`` pairs
    when states are retained.  Retention is memory-gated.
    """
    times = np.asarray(grid.times(), dtype=np.float64)
    if times.size == 0 or times[0] != 0.0:
        raise ParameterError("protocol grids must start at t = 0")
    engine = ProtocolEvolution(protocol, backend)
    if return_states:
        if times.size * (1 << protocol.num_qubits) > _STATE_RETENTION_LIMIT:
            raise CapacityError(
                "state retention on this grid exceeds the in-memory budget; "
                "sample energies instead")
        return list(zip(times.tolist(), engine.states(times)))
    energies = engine.battery_energy(times)
    return list(zip(times.tolist(), energies.tolist()))
