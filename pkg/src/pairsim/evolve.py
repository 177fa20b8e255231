"""Exact unitary evolution, partial traces, and the headline experiments.

Evolution is by full eigendecomposition of the (Hermitian) Hamiltonian,
diagonalized once and evaluated at every requested time, so there is no
integrator error to contaminate zero-decoherence verdicts.  Mixed bath
initializations (thermal) are handled as exact mixtures of pure component
runs sharing one eigendecomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dfs import LogicalState, encode, logical_product_state, pair_dfs_projector
from .errors import HermiticityError, LayoutError
from .gates import GateParams, eigen_to_computational, gate_hamiltonian, paired_controlled_gate
from .model import (
    BathInit,
    BathSpec,
    NoiseModel,
    VacuumInit,
    bare_hamiltonian,
    bath_state_components,
    total_hamiltonian,
)
from .qops import HilbertLayout, noise_eigenbasis
from .tolerances import HERMITICITY_TOL

__all__ = [
    "EvolutionResult",
    "Propagator",
    "evolve_exact",
    "partial_trace",
    "fidelity_to_pure",
    "offdiag_coherence",
    "StorageConfig",
    "StorageResult",
    "run_storage_experiment",
    "GateExperimentConfig",
    "GateExperimentResult",
    "run_gate_experiment",
]


@dataclass
class EvolutionResult:
    """Time series produced by one evolution run.

    ``states`` holds the full state vector per time for pure-bath runs and
    is ``None`` for mixed (thermal) initializations.  ``reduced`` holds the
    reduced system density matrix per time.  ``metrics`` maps metric names
    to per-time arrays; ``top_fock_pop`` has one column per mode.
    """

    times: np.ndarray
    states: np.ndarray | None
    reduced: list[np.ndarray] | None = None
    metrics: dict[str, np.ndarray] = field(default_factory=dict)


class Propagator:
    """Eigendecomposition-backed propagator exp(-iHt), reusable across states."""

    def __init__(self, h: np.ndarray, hermiticity_tol: float = HERMITICITY_TOL):
        h = np.asarray(h, dtype=complex)
        residual = float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0
        if residual > hermiticity_tol:
            raise HermiticityError(
                f"Hamiltonian symmetry residual {residual:.3e} exceeds "
                f"{hermiticity_tol:.1e}"
            )
        self.eigenvalues, self.eigenvectors = np.linalg.eigh(h)
        self.dim = h.shape[0]

    def evolve(self, psi0: np.ndarray, times: np.ndarray) -> np.ndarray:
        """States exp(-iHt) psi0, one row per time."""
        psi0 = np.asarray(psi0, dtype=complex).reshape(-1)
        if psi0.size != self.dim:
            raise LayoutError(f"state dim {psi0.size} != Hamiltonian dim {self.dim}")
        if abs(np.linalg.norm(psi0) - 1.0) > 1e-8:
            raise ValueError("initial state must be unit norm")
        times = _check_times(times)
        coeff = self.eigenvectors.conj().T @ psi0
        phases = np.exp(-1j * np.outer(times, self.eigenvalues))
        return (phases * coeff) @ self.eigenvectors.T


def _check_times(times) -> np.ndarray:
    t = np.asarray(times, dtype=float).reshape(-1)
    if t.size == 0:
        raise ValueError("need at least one time point")
    if not np.all(np.isfinite(t)) or np.any(t < 0):
        raise ValueError("times must be finite and nonnegative")
    if np.any(np.diff(t) < 0):
        raise ValueError("times must be sorted ascending")
    return t


def evolve_exact(h: np.ndarray, psi0: np.ndarray, times) -> EvolutionResult:
    """Evolve one pure state exactly under a Hermitian Hamiltonian."""
    times = _check_times(times)
    states = Propagator(h).evolve(psi0, times)
    return EvolutionResult(times=times, states=states)


def partial_trace(state: np.ndarray, dims, keep) -> np.ndarray:
    """Reduced density matrix over the kept factors (original factor order).

    ``state`` may be a pure state vector or a density matrix; ``dims`` lists
    every tensor-factor dimension.
    """
    dims = tuple(int(d) for d in dims)
    keep = tuple(sorted(set(int(k) for k in keep)))
    n = len(dims)
    if not keep or any(k < 0 or k >= n for k in keep):
        raise LayoutError(f"keep set {keep} invalid for {n} factors")
    state = np.asarray(state, dtype=complex)
    full = int(np.prod(dims))
    dim_keep = int(np.prod([dims[k] for k in keep]))
    if state.ndim == 1:
        if state.size != full:
            raise LayoutError(f"state size {state.size} != layout dim {full}")
        rest = [i for i in range(n) if i not in keep]
        mat = state.reshape(dims).transpose(keep + tuple(rest)).reshape(dim_keep, -1)
        return mat @ mat.conj().T
    if state.shape != (full, full):
        raise LayoutError(f"density shape {state.shape} != ({full}, {full})")
    rho = state.reshape(dims + dims)
    row = list(range(n))
    col = [i + n if i in keep else i for i in range(n)]
    out = [i for i in keep] + [i + n for i in keep]
    return np.einsum(rho, row + col, out).reshape(dim_keep, dim_keep)


def fidelity_to_pure(rho: np.ndarray, psi: np.ndarray) -> float:
    """<psi| rho |psi> for a pure reference (enough for the claims checked here)."""
    return float(np.real(np.vdot(psi, rho @ psi)))


def offdiag_coherence(rho: np.ndarray) -> float:
    """l1 coherence: sum of absolute off-diagonal entries."""
    return float(np.sum(np.abs(rho)) - np.sum(np.abs(np.diag(rho))))


def _eigenbasis_conjugator(nv, n_qubits: int) -> np.ndarray:
    rotation, _ = noise_eigenbasis(nv)
    b = np.eye(1, dtype=complex)
    for _ in range(n_qubits):
        b = np.kron(b, rotation)
    return b


def _top_level_populations(states: np.ndarray, layout: HilbertLayout) -> np.ndarray:
    """Population of each mode's top Fock level, one column per mode."""
    n_modes = len(layout.mode_dims)
    nt = states.shape[0]
    if n_modes == 0:
        return np.zeros((nt, 0))
    probs = np.abs(states) ** 2
    probs = probs.reshape((nt,) + layout.factor_dims)
    out = np.zeros((nt, n_modes))
    for k in range(n_modes):
        axis = 1 + layout.mode_factor(k)
        top = np.take(probs, -1, axis=axis)
        out[:, k] = top.reshape(nt, -1).sum(axis=1)
    return out


def _run_register(
    h: np.ndarray,
    psi_sys: np.ndarray,
    layout: HilbertLayout,
    nv,
    bath: BathSpec,
    bath_init: BathInit,
    times: np.ndarray,
    dfs_projector: np.ndarray | None,
    reference_states: np.ndarray | None = None,
) -> EvolutionResult:
    """Evolve system (x) bath and collect reduced states plus metrics.

    The fidelity reference is the initial system state unless explicit
    per-time reference states are supplied (gate runs).
    """
    times = _check_times(times)
    comps = bath_state_components(bath, bath_init)
    prop = Propagator(h)
    dim_sys = 2**layout.qubit_count
    dim_bath = layout.dim // dim_sys
    nt = times.size

    reduced = [np.zeros((dim_sys, dim_sys), dtype=complex) for _ in range(nt)]
    top_pop = np.zeros((nt, len(layout.mode_dims)))
    pure_states = None
    for weight, bath_vec in comps:
        psi0 = np.kron(psi_sys, bath_vec) if dim_bath > 1 else psi_sys.copy()
        states = prop.evolve(psi0, times)
        if len(comps) == 1:
            pure_states = states
        mats = states.reshape(nt, dim_sys, dim_bath)
        rho_t = np.einsum("tij,tkj->tik", mats, mats.conj())
        for t in range(nt):
            reduced[t] += weight * rho_t[t]
        top_pop += weight * _top_level_populations(states, layout)

    b = _eigenbasis_conjugator(nv, layout.qubit_count)
    if reference_states is None:
        refs = np.broadcast_to(psi_sys, (nt, dim_sys))
    else:
        refs = np.asarray(reference_states, dtype=complex)
    fidelity = np.zeros(nt)
    coherence = np.zeros(nt)
    leakage = np.zeros(nt)
    complement = (
        np.eye(dim_sys) - dfs_projector if dfs_projector is not None else None
    )
    for t in range(nt):
        fidelity[t] = fidelity_to_pure(reduced[t], refs[t])
        coherence[t] = offdiag_coherence(b.conj().T @ reduced[t] @ b)
        if complement is not None:
            leakage[t] = float(np.real(np.trace(complement @ reduced[t])))
    metrics = {
        "fidelity": fidelity,
        "coherence_offdiag": coherence,
        "dfs_leakage": leakage,
        "top_fock_pop": top_pop,
    }
    return EvolutionResult(
        times=times, states=pure_states, reduced=reduced, metrics=metrics
    )


# --- storage -------------------------------------------------------------------


@dataclass(frozen=True)
class StorageConfig:
    """One storage run: keep a logical state alive in a noisy bath."""

    pairs: int
    noise: NoiseModel
    bath: BathSpec
    logical: LogicalState
    times: tuple[float, ...]
    bath_init: BathInit = VacuumInit()
    epsilon: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        if self.pairs < 1:
            raise ValueError("need at least one pair")
        if self.logical.qubit_count != self.pairs:
            raise LayoutError(
                f"logical state spans {self.logical.qubit_count} qubits, "
                f"expected {self.pairs}"
            )


@dataclass
class StorageResult:
    encoded: EvolutionResult
    bare: EvolutionResult


def run_storage_experiment(cfg: StorageConfig) -> StorageResult:
    """Evolve the encoded register and, for contrast, the unencoded one.

    The encoded run uses the paired register under the driven total
    Hamiltonian; the bare run evolves the same logical state, unencoded and
    undriven, with identical bath modes and couplings, so the contrast
    isolates the encoding.
    """
    nv = cfg.noise.nv
    times = np.asarray(cfg.times, dtype=float)

    layout_enc = cfg.bath.layout(2 * cfg.pairs)
    h_enc = total_hamiltonian(cfg.pairs, cfg.noise, cfg.bath, cfg.epsilon, layout_enc)
    psi_enc = encode(cfg.logical, nv, cfg.pairs)
    encoded = _run_register(
        h_enc,
        psi_enc,
        layout_enc,
        nv,
        cfg.bath,
        cfg.bath_init,
        times,
        dfs_projector=pair_dfs_projector(nv, cfg.pairs),
    )

    layout_bare = cfg.bath.layout(cfg.pairs)
    h_bare = bare_hamiltonian(cfg.pairs, cfg.noise, cfg.bath, layout_bare)
    psi_bare = logical_product_state(cfg.logical, nv, cfg.pairs)
    bare = _run_register(
        h_bare,
        psi_bare,
        layout_bare,
        nv,
        cfg.bath,
        cfg.bath_init,
        times,
        dfs_projector=None,
    )
    return StorageResult(encoded=encoded, bare=bare)


# --- gate operation --------------------------------------------------------------


@dataclass(frozen=True)
class GateExperimentConfig:
    """One two-pair gate run: drive the register while a gate generator acts."""

    noise: NoiseModel
    bath: BathSpec
    logical: LogicalState
    gate: GateParams
    times: tuple[float, ...] = tuple(np.linspace(0.0, 1.0, 11))
    bath_init: BathInit = VacuumInit()
    epsilon: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        if self.logical.qubit_count != 2:
            raise LayoutError("gate experiment needs a 2-qubit logical state")


@dataclass
class GateExperimentResult:
    evolution: EvolutionResult
    logical_fidelity: float
    max_leakage: float


def run_gate_experiment(cfg: GateExperimentConfig) -> GateExperimentResult:
    """Evolve two encoded pairs under bath + drive + gate generator.

    The gate generator is the principal log of the paired controlled gate,
    expressed in the computational basis and acting on the qubits only.  The
    per-time fidelity reference is the ideal gate action exp(-iH_g t) applied
    to the encoded input; the headline figure is the value at the final time.
    """
    nv = cfg.noise.nv
    times = np.asarray(cfg.times, dtype=float)
    pairs = 2

    layout = cfg.bath.layout(2 * pairs)
    h_total = total_hamiltonian(pairs, cfg.noise, cfg.bath, cfg.epsilon, layout)
    h_gate_sys = eigen_to_computational(
        gate_hamiltonian(paired_controlled_gate(cfg.gate)), nv
    )
    dim_bath = layout.dim // h_gate_sys.shape[0]
    h_full = h_total + np.kron(h_gate_sys, np.eye(dim_bath, dtype=complex))

    psi_enc = encode(cfg.logical, nv, pairs)
    reference = Propagator(h_gate_sys).evolve(psi_enc, times)
    evolution = _run_register(
        h_full,
        psi_enc,
        layout,
        nv,
        cfg.bath,
        cfg.bath_init,
        times,
        dfs_projector=pair_dfs_projector(nv, pairs),
        reference_states=reference,
    )
    return GateExperimentResult(
        evolution=evolution,
        logical_fidelity=float(evolution.metrics["fidelity"][-1]),
        max_leakage=float(np.max(evolution.metrics["dfs_leakage"])),
    )
