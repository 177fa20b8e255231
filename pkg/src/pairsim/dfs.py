"""Coherence-preserving subspaces, logical encodings, and encode circuits.

A cluster of 2m qubits that couple collectively through the noise operator
admits a zero-eigenvalue eigenspace of the summed noise operators with
dimension C(2m, m); states stored there factor out of the system-bath
evolution.  For pairs (m = 1) the encoding maps each logical qubit onto the
anti-aligned pair states and is implemented by one basis-rotated CNOT per
pair, with ancillas prepared in the upper noise eigenstate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .errors import LayoutError, LeakageError
from .qops import (
    HilbertLayout,
    NoiseVector,
    embed_product,
    noise_eigenbasis,
    noise_operator,
    pauli,
)
from .tolerances import DECODE_LEAKAGE_TOL, MATRIX_IDENTITY_TOL

__all__ = [
    "DfsSubspace",
    "Gate",
    "Circuit",
    "LogicalState",
    "coherence_preserving_subspace",
    "cluster_efficiency",
    "build_encode_circuit",
    "encode",
    "decode",
    "logical_product_state",
    "pair_dfs_projector",
    "pair_noise_sums",
]

MAX_CLUSTER_HALF = 6  # 2m = 12 qubits, 4096-dim: the desk-scale ceiling


@dataclass(frozen=True)
class DfsSubspace:
    """Orthonormal basis of the zero eigenspace of the summed noise operator.

    ``basis`` has one column per basis vector (shape ``2**cluster_size`` by
    ``logical_dim``); ``eigenvalue`` is the common eigenvalue, fixed at 0.
    """

    cluster_size: int
    basis: np.ndarray
    eigenvalue: float
    logical_dim: int


def coherence_preserving_subspace(nv: NoiseVector, m: int) -> DfsSubspace:
    """Zero eigenspace of S_1 + ... + S_{2m} on a 2m-qubit cluster.

    Basis vectors are products of single-qubit noise eigenstates with exactly
    m factors in the upper eigenstate, enumerated with the upper-eigenstate
    positions in lexicographic order; they are exactly orthonormal and
    exactly annihilated by the sum.  Dimension C(2m, m).
    """
    if m < 1:
        raise ValueError(f"cluster half-size must be >= 1, got {m}")
    if m > MAX_CLUSTER_HALF:
        raise ValueError(f"cluster half-size {m} exceeds desk scale ({MAX_CLUSTER_HALF})")
    rotation, _ = noise_eigenbasis(nv)
    v_up, v_down = rotation[:, 0], rotation[:, 1]
    n = 2 * m
    cols = []
    for up_positions in itertools.combinations(range(n), m):
        factors = [v_up if q in up_positions else v_down for q in range(n)]
        cols.append(reduce(np.kron, factors))
    basis = np.column_stack(cols)
    return DfsSubspace(
        cluster_size=n,
        basis=basis,
        eigenvalue=0.0,
        logical_dim=math.comb(n, m),
    )


def cluster_efficiency(m: int) -> tuple[float, float]:
    """Logical qubits per physical qubit for 2m-qubit clusters.

    Returns ``(exact, approx)``: exact = log2 C(2m, m) / (2m), and the
    large-m approximation 1 - log2(pi m) / (4m).
    """
    if m < 1:
        raise ValueError(f"cluster half-size must be >= 1, got {m}")
    exact = math.log2(math.comb(2 * m, m)) / (2 * m)
    approx = 1.0 - math.log2(math.pi * m) / (4 * m)
    return exact, approx


# --- circuits ----------------------------------------------------------------


@dataclass(frozen=True)
class Gate:
    """One circuit element: a single-qubit rotation or a CNOT.

    Rotations carry an explicit 2x2 unitary.  The CNOT convention here is
    control-active on basis index 0 (the upper state): it flips the target
    when the control is in the first basis state.
    """

    kind: str  # "rotation" | "cnot"
    targets: tuple[int, ...]
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if self.kind == "rotation":
            if len(self.targets) != 1 or self.matrix is None:
                raise ValueError("rotation gates take one target and a 2x2 matrix")
            m = np.asarray(self.matrix, dtype=complex)
            if m.shape != (2, 2):
                raise ValueError(f"rotation matrix has shape {m.shape}")
            if np.max(np.abs(m.conj().T @ m - np.eye(2))) > MATRIX_IDENTITY_TOL:
                raise ValueError("rotation matrix is not unitary")
            object.__setattr__(self, "matrix", m)
            object.__setattr__(self, "targets", tuple(self.targets))
        elif self.kind == "cnot":
            if len(self.targets) != 2 or self.targets[0] == self.targets[1]:
                raise ValueError("cnot gates take distinct (control, target)")
            object.__setattr__(self, "targets", tuple(self.targets))
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list; ``gates[0]`` is applied first."""

    width: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(t >= self.width or t < 0 for t in g.targets):
                raise LayoutError(f"gate targets {g.targets} exceed width {self.width}")

    def unitary(self) -> np.ndarray:
        """Full-register matrix of the circuit (product in application order)."""
        layout = HilbertLayout(self.width)
        u = np.eye(layout.dim, dtype=complex)
        for g in self.gates:
            u = _gate_matrix(g, layout) @ u
        return u

    def apply(self, state: np.ndarray) -> np.ndarray:
        return self.unitary() @ state

    def to_text(self) -> str:
        """Plain-text gate list, one gate per line, for auditability.

        ``rotation q re00 im00 re01 im01 re10 im10 re11 im11`` or
        ``cnot control target``.
        """
        lines = []
        for g in self.gates:
            if g.kind == "rotation":
                entries = " ".join(
                    f"{part!r}"
                    for z in g.matrix.reshape(-1)
                    for part in (float(z.real), float(z.imag))
                )
                lines.append(f"rotation {g.targets[0]} {entries}")
            else:
                lines.append(f"cnot {g.targets[0]} {g.targets[1]}")
        return "\n".join(lines) + ("\n" if lines else "")


def _gate_matrix(g: Gate, layout: HilbertLayout) -> np.ndarray:
    if g.kind == "rotation":
        return embed_product({g.targets[0]: g.matrix}, layout)
    control, target = g.targets
    p_active = np.array([[1, 0], [0, 0]], dtype=complex)  # control on index 0
    p_rest = np.array([[0, 0], [0, 1]], dtype=complex)
    return embed_product({control: p_active, target: pauli("x")}, layout) + embed_product(
        {control: p_rest}, layout
    )


def build_encode_circuit(pair_count: int, nv: NoiseVector) -> Circuit:
    """Encoding circuit: one basis-rotated CNOT per pair.

    For each pair (data qubit 2l, ancilla 2l+1): rotate both qubits from the
    noise eigenbasis into the computational basis, apply the CNOT that flips
    the ancilla when the data qubit is in the upper state, rotate back.  The
    conjugated CNOT squares to the identity, so the same circuit decodes.
    When the noise eigenbasis is already computational the rotations are
    omitted and the circuit is ``pair_count`` plain CNOTs.
    """
    if pair_count < 1:
        raise ValueError(f"pair count must be >= 1, got {pair_count}")
    rotation, _ = noise_eigenbasis(nv)
    trivial = np.array_equal(rotation, np.eye(2))
    inverse = rotation.conj().T
    gates: list[Gate] = []
    for l in range(pair_count):
        data, ancilla = 2 * l, 2 * l + 1
        if not trivial:
            gates.append(Gate("rotation", (data,), inverse))
            gates.append(Gate("rotation", (ancilla,), inverse))
        gates.append(Gate("cnot", (data, ancilla)))
        if not trivial:
            gates.append(Gate("rotation", (data,), rotation))
            gates.append(Gate("rotation", (ancilla,), rotation))
    return Circuit(width=2 * pair_count, gates=tuple(gates))


# --- logical states and the encode/decode maps --------------------------------


@dataclass(frozen=True)
class LogicalState:
    """Amplitudes over the noise-eigenbasis labels of L logical qubits.

    Index bit 0 of qubit l means the upper eigenstate (+), bit 1 the lower
    one (-); qubit 0 is the most significant bit, matching the tensor order.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        n = amps.size
        if n < 2 or n & (n - 1):
            raise ValueError(f"amplitude count must be a power of two >= 2, got {n}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-8:
            raise ValueError(f"logical state must be unit norm, got {norm}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def qubit_count(self) -> int:
        return int(self.amplitudes.size).bit_length() - 1


def _prepared_state(
    state: LogicalState, nv: NoiseVector, pair_count: int
) -> np.ndarray:
    """Data qubits carrying the logical state, ancillas in the upper eigenstate."""
    rotation, _ = noise_eigenbasis(nv)
    eig = (rotation[:, 0], rotation[:, 1])
    out = np.zeros(4**pair_count, dtype=complex)
    for idx, amp in enumerate(state.amplitudes):
        if amp == 0.0:
            continue
        bits = [(idx >> (pair_count - 1 - l)) & 1 for l in range(pair_count)]
        factors = []
        for b in bits:
            factors.append(eig[b])
            factors.append(eig[0])
        out += amp * reduce(np.kron, factors)
    return out


def logical_product_state(
    state: LogicalState, nv: NoiseVector, qubit_count: int
) -> np.ndarray:
    """Unencoded register state: each logical label as a bare noise eigenstate."""
    if state.qubit_count != qubit_count:
        raise LayoutError(
            f"logical state has {state.qubit_count} qubits, expected {qubit_count}"
        )
    rotation, _ = noise_eigenbasis(nv)
    eig = (rotation[:, 0], rotation[:, 1])
    out = np.zeros(2**qubit_count, dtype=complex)
    for idx, amp in enumerate(state.amplitudes):
        if amp == 0.0:
            continue
        bits = [(idx >> (qubit_count - 1 - l)) & 1 for l in range(qubit_count)]
        out += amp * reduce(np.kron, [eig[b] for b in bits])
    return out


def encode(state: LogicalState, nv: NoiseVector, pair_count: int) -> np.ndarray:
    """Encode a logical state into the paired register via the CNOT circuit.

    Ancillas are prepared in the upper noise eigenstate; the circuit leaves
    each pair anti-aligned, so every pair noise-sum annihilates the result.
    """
    if state.qubit_count != pair_count:
        raise LayoutError(
            f"logical state has {state.qubit_count} qubits, expected {pair_count}"
        )
    prepared = _prepared_state(state, nv, pair_count)
    return build_encode_circuit(pair_count, nv).apply(prepared)


def decode(
    vector: np.ndarray,
    nv: NoiseVector,
    pair_count: int,
    leakage_tol: float = DECODE_LEAKAGE_TOL,
) -> LogicalState:
    """Invert :func:`encode`; exact up to global phase for in-subspace input.

    Weight outside the encoded subspace above ``leakage_tol`` raises
    :class:`LeakageError` carrying the leaked weight.
    """
    vector = np.asarray(vector, dtype=complex).reshape(-1)
    if vector.size != 4**pair_count:
        raise LayoutError(
            f"vector has dimension {vector.size}, expected {4 ** pair_count}"
        )
    rotation, _ = noise_eigenbasis(nv)
    eig = (rotation[:, 0], rotation[:, 1])
    restored = build_encode_circuit(pair_count, nv).apply(vector)
    amps = np.zeros(2**pair_count, dtype=complex)
    for idx in range(2**pair_count):
        bits = [(idx >> (pair_count - 1 - l)) & 1 for l in range(pair_count)]
        factors = []
        for b in bits:
            factors.append(eig[b])
            factors.append(eig[0])  # ancilla restored to the upper eigenstate
        basis_vec = reduce(np.kron, factors)
        amps[idx] = np.vdot(basis_vec, restored)
    captured = float(np.vdot(amps, amps).real)
    total = float(np.vdot(vector, vector).real)
    leaked = max(total - captured, 0.0)
    if leaked > leakage_tol:
        raise LeakageError(leaked)
    return LogicalState(amps / np.linalg.norm(amps))


# --- helpers for leakage metrics and invariants --------------------------------


def pair_dfs_projector(nv: NoiseVector, pair_count: int) -> np.ndarray:
    """Projector onto the tensor product of per-pair zero eigenspaces."""
    sub = coherence_preserving_subspace(nv, 1)
    p_pair = sub.basis @ sub.basis.conj().T
    return reduce(np.kron, [p_pair] * pair_count)


def pair_noise_sums(
    nv: NoiseVector, pair_count: int, layout: HilbertLayout | None = None
) -> list[np.ndarray]:
    """The operators S_l + S_l' for each pair, embedded in the given layout."""
    if layout is None:
        layout = HilbertLayout(2 * pair_count)
    s = noise_operator(nv)
    sums = []
    for l in range(pair_count):
        sums.append(
            embed_product({2 * l: s}, layout) + embed_product({2 * l + 1: s}, layout)
        )
    return sums
