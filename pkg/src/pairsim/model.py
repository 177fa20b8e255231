"""System-bath Hamiltonian assembly for bare and paired qubit registers.

The dissipation model couples each qubit to a set of truncated bosonic modes
through the noise direction lambda . sigma; modes may be shared between
qubits or pairs (collective noise) or private (independent noise).  A paired
register adds one ancilla per data qubit, coupled to exactly the same modes
with the same strength, plus a classical driving field whose quadratures
satisfy g1:g2:omega0 = lambda1:lambda2:lambda3 so that the free qubit term
is absorbed into the noise-sum structure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import LayoutError, UndrivableModelError
from .qops import (
    HilbertLayout,
    NoiseVector,
    annihilation,
    embed_product,
    max_abs,
    noise_operator,
    pauli,
)
from .tolerances import MATRIX_IDENTITY_TOL

__all__ = [
    "NoiseModel",
    "BathMode",
    "BathSpec",
    "DriveField",
    "VacuumInit",
    "ThermalInit",
    "CoherentInit",
    "BathInit",
    "drive_field",
    "bare_hamiltonian",
    "paired_hamiltonian",
    "drive_hamiltonian",
    "total_hamiltonian",
    "bath_state_components",
]


@dataclass(frozen=True)
class NoiseModel:
    """Noise direction plus the qubit level splitting omega0 (hbar = 1)."""

    nv: NoiseVector
    omega0: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.omega0) or self.omega0 < 0:
            raise ValueError(f"omega0 must be finite and >= 0, got {self.omega0}")


@dataclass(frozen=True)
class BathMode:
    """One truncated bosonic mode."""

    frequency: float
    fock_dim: int

    def __post_init__(self):
        if not (math.isfinite(self.frequency) and self.frequency > 0):
            raise ValueError(f"mode frequency must be > 0, got {self.frequency}")
        if self.fock_dim < 2:
            raise ValueError(f"Fock dimension must be >= 2, got {self.fock_dim}")


@dataclass(frozen=True)
class BathSpec:
    """Modes plus the coupling topology.

    ``coupling`` maps ``(pair_index, mode_index)`` to the coupling constant g.
    Two pairs couple to the same physical mode exactly when their couplings
    name the same mode index, which makes the collective-vs-independent
    topology explicit and machine checkable.  Within a pair, both members
    couple to the same modes with the same g by construction; deliberate
    asymmetry enters only through the epsilon knob of the assembly functions.
    """

    modes: tuple[BathMode, ...] = ()
    coupling: dict[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        for (pair, mode), g in self.coupling.items():
            if not 0 <= mode < len(self.modes):
                raise LayoutError(f"coupling ({pair}, {mode}) names a missing mode")
            if pair < 0:
                raise LayoutError(f"negative pair index {pair} in coupling")
            if not math.isfinite(g):
                raise ValueError(f"coupling ({pair}, {mode}) must be finite, got {g}")

    @property
    def mode_dims(self) -> tuple[int, ...]:
        return tuple(m.fock_dim for m in self.modes)

    def couplings_for(self, pair: int) -> list[tuple[int, float]]:
        """Sorted (mode_index, g) couplings of one pair/qubit."""
        return sorted(
            (mode, g) for (p, mode), g in self.coupling.items() if p == pair
        )

    def layout(self, qubit_count: int) -> HilbertLayout:
        return HilbertLayout(qubit_count, self.mode_dims)


@dataclass(frozen=True)
class DriveField:
    """Drive quadratures with the common ratio kappa = omega0 / lambda3.

    kappa is stored explicitly so the lambda3 -> 0 limit is a validation
    concern, never a division.
    """

    g1: float
    g2: float
    kappa: float


def drive_field(nm: NoiseModel) -> DriveField:
    """Solve the drive ratio condition for a noise model.

    Returns kappa = omega0/lambda3 and g_i = kappa * lambda_i.  For
    lambda3 = 0 the condition only has the trivial solution omega0 = 0
    (kappa = 0); otherwise the model is undrivable and an error is raised.
    """
    nv = nm.nv
    if nv.lambda3 == 0.0:
        if nm.omega0 != 0.0:
            raise UndrivableModelError(
                "lambda3 = 0 with omega0 != 0: the ratio condition "
                "g1:g2:omega0 = lambda1:lambda2:lambda3 has no finite solution"
            )
        return DriveField(g1=0.0, g2=0.0, kappa=0.0)
    kappa = nm.omega0 / nv.lambda3
    return DriveField(g1=kappa * nv.lambda1, g2=kappa * nv.lambda2, kappa=kappa)


def _check_layout(layout: HilbertLayout, qubit_count: int, bath: BathSpec) -> None:
    if layout.qubit_count != qubit_count:
        raise LayoutError(
            f"layout holds {layout.qubit_count} qubits, expected {qubit_count}"
        )
    if layout.mode_dims != bath.mode_dims:
        raise LayoutError(
            f"layout mode dims {layout.mode_dims} do not match bath {bath.mode_dims}"
        )


def _free_bath(bath: BathSpec, layout: HilbertLayout) -> np.ndarray:
    """Sum of omega a+a over distinct modes; a shared mode is counted once."""
    h = np.zeros((layout.dim, layout.dim), dtype=complex)
    for k, mode in enumerate(bath.modes):
        a = annihilation(mode.fock_dim)
        h += mode.frequency * embed_product(
            {layout.mode_factor(k): a.conj().T @ a}, layout
        )
    return h


def _displacement(mode: BathMode) -> np.ndarray:
    a = annihilation(mode.fock_dim)
    return a.conj().T + a


def bare_hamiltonian(
    qubit_count: int, nm: NoiseModel, bath: BathSpec, layout: HilbertLayout
) -> np.ndarray:
    """Dissipation Hamiltonian for unpaired qubits.

    omega0 * sum_l sigma_l^z  +  sum_modes omega a+a
    + sum_l sum_modes (lambda . sigma)_l g_{l,mode} (a+ + a).

    The coupling map's first index is the qubit index here.
    """
    _check_layout(layout, qubit_count, bath)
    s = noise_operator(nm.nv)
    h = np.zeros((layout.dim, layout.dim), dtype=complex)
    if nm.omega0 != 0.0:
        for l in range(qubit_count):
            h += nm.omega0 * embed_product({l: pauli("z")}, layout)
    h += _free_bath(bath, layout)
    for l in range(qubit_count):
        for mode_idx, g in bath.couplings_for(l):
            h += g * embed_product(
                {l: s, layout.mode_factor(mode_idx): _displacement(bath.modes[mode_idx])},
                layout,
            )
    return h


def paired_hamiltonian(
    pair_count: int,
    nm: NoiseModel,
    bath: BathSpec,
    epsilon: float,
    layout: HilbertLayout,
) -> np.ndarray:
    """Dissipation Hamiltonian for a paired register of 2 * pair_count qubits.

    Pair l couples through (sigma_l + sigma_l') jointly; the ancilla coupling
    is scaled to g * (1 + epsilon), so epsilon = 0 reproduces exact pairing.
    """
    _check_layout(layout, 2 * pair_count, bath)
    s = noise_operator(nm.nv)
    h = np.zeros((layout.dim, layout.dim), dtype=complex)
    if nm.omega0 != 0.0:
        for q in range(2 * pair_count):
            h += nm.omega0 * embed_product({q: pauli("z")}, layout)
    h += _free_bath(bath, layout)
    for l in range(pair_count):
        data, ancilla = 2 * l, 2 * l + 1
        for mode_idx, g in bath.couplings_for(l):
            disp = _displacement(bath.modes[mode_idx])
            mf = layout.mode_factor(mode_idx)
            h += g * embed_product({data: s, mf: disp}, layout)
            h += g * (1.0 + epsilon) * embed_product({ancilla: s, mf: disp}, layout)
    return h


def drive_hamiltonian(
    pair_count: int, df: DriveField, layout: HilbertLayout
) -> np.ndarray:
    """Classical driving field acting homogeneously on all pairs.

    sum_l [ g1 (sigma_l^x + sigma_l'^x) + g2 (sigma_l^y + sigma_l'^y) ].
    """
    h = np.zeros((layout.dim, layout.dim), dtype=complex)
    if df.g1 == 0.0 and df.g2 == 0.0:
        return h
    for q in range(2 * pair_count):
        if df.g1 != 0.0:
            h += df.g1 * embed_product({q: pauli("x")}, layout)
        if df.g2 != 0.0:
            h += df.g2 * embed_product({q: pauli("y")}, layout)
    return h


def _noise_sum_form(
    pair_count: int,
    nm: NoiseModel,
    bath: BathSpec,
    df: DriveField,
    layout: HilbertLayout,
) -> np.ndarray:
    """Factored form: sum_l (S_l + S_l')[kappa + sum g (a+ + a)] + free bath.

    Assembled independently of paired_hamiltonian/drive_hamiltonian so the
    two routes cross-check each other.
    """
    s = noise_operator(nm.nv)
    dim = layout.dim
    h = _free_bath(bath, layout)
    for l in range(pair_count):
        bracket = df.kappa * np.eye(dim, dtype=complex)
        for mode_idx, g in bath.couplings_for(l):
            bracket += g * embed_product(
                {layout.mode_factor(mode_idx): _displacement(bath.modes[mode_idx])},
                layout,
            )
        s_sum = embed_product({2 * l: s}, layout) + embed_product(
            {2 * l + 1: s}, layout
        )
        h += s_sum @ bracket
    return h


def total_hamiltonian(
    pair_count: int,
    nm: NoiseModel,
    bath: BathSpec,
    epsilon: float,
    layout: HilbertLayout,
) -> np.ndarray:
    """Full paired Hamiltonian including the drive.

    Returns paired_hamiltonian + drive_hamiltonian.  At epsilon = 0 the
    result is verified entrywise against the independently assembled
    noise-sum form before being returned.
    """
    df = drive_field(nm)
    h = paired_hamiltonian(pair_count, nm, bath, epsilon, layout)
    h += drive_hamiltonian(pair_count, df, layout)
    if epsilon == 0.0:
        factored = _noise_sum_form(pair_count, nm, bath, df, layout)
        residual = max_abs(h - factored)
        if residual > MATRIX_IDENTITY_TOL:
            raise AssertionError(
                f"assembly routes disagree: max-abs residual {residual:.3e}"
            )
    return h


# --- bath initial states ----------------------------------------------------


@dataclass(frozen=True)
class VacuumInit:
    """All modes in their ground state."""


@dataclass(frozen=True)
class ThermalInit:
    """Diagonal Gibbs state at the given temperature (weights renormalized
    over each mode's truncated ladder)."""

    temperature: float

    def __post_init__(self):
        if not math.isfinite(self.temperature) or self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")


@dataclass(frozen=True)
class CoherentInit:
    """Truncated coherent state per mode, one (real) amplitude each."""

    amplitudes: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", tuple(float(a) for a in self.amplitudes))
        if not all(math.isfinite(a) for a in self.amplitudes):
            raise ValueError("coherent amplitudes must be finite")


BathInit = VacuumInit | ThermalInit | CoherentInit


def _fock_vector(dim: int, level: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[level] = 1.0
    return v


def _coherent_vector(dim: int, amp: float) -> np.ndarray:
    v = np.array(
        [amp**n / math.sqrt(math.factorial(n)) for n in range(dim)], dtype=complex
    )
    return v / np.linalg.norm(v)


def bath_state_components(
    bath: BathSpec, init: BathInit
) -> list[tuple[float, np.ndarray]]:
    """Decompose the bath initial state into weighted pure product vectors.

    Vacuum and coherent states are single components; a thermal state is the
    exact (truncated, renormalized) mixture of Fock products.  The weights
    sum to 1.
    """
    dims = bath.mode_dims
    if not dims:
        return [(1.0, np.ones(1, dtype=complex))]
    if isinstance(init, VacuumInit):
        vecs = [_fock_vector(d, 0) for d in dims]
        out = vecs[0]
        for v in vecs[1:]:
            out = np.kron(out, v)
        return [(1.0, out)]
    if isinstance(init, CoherentInit):
        if len(init.amplitudes) != len(dims):
            raise LayoutError(
                f"{len(init.amplitudes)} coherent amplitudes for {len(dims)} modes"
            )
        vecs = [_coherent_vector(d, a) for d, a in zip(dims, init.amplitudes)]
        out = vecs[0]
        for v in vecs[1:]:
            out = np.kron(out, v)
        return [(1.0, out)]
    if isinstance(init, ThermalInit):
        if init.temperature == 0.0:
            return bath_state_components(bath, VacuumInit())
        per_mode = []
        for mode in bath.modes:
            w = np.exp(
                -mode.frequency * np.arange(mode.fock_dim) / init.temperature
            )
            per_mode.append(w / w.sum())
        comps = []
        for levels in itertools.product(*(range(d) for d in dims)):
            weight = 1.0
            for k, n in enumerate(levels):
                weight *= per_mode[k][n]
            vecs = [_fock_vector(d, n) for d, n in zip(dims, levels)]
            out = vecs[0]
            for v in vecs[1:]:
                out = np.kron(out, v)
            comps.append((float(weight), out))
        return comps
    raise TypeError(f"unknown bath initialization {init!r}")
