"""Universal two-qubit gate family and its lift to qubit-pair registers.

Gate matrices in this module are written in the noise-eigenbasis labels:
basis index 0 of every qubit is the upper noise eigenstate, index 1 the
lower one, so each per-qubit noise operator is a * diag(1, -1).  Conjugate
with :func:`eigen_to_computational` to obtain the physical (computational
basis) matrices for a given noise direction.

The paired gate acts on two pairs (qubit order: data1, ancilla1, data2,
ancilla2).  It is controlled by the first pair's anti-aligned states and,
on the complement of the control pair's anti-aligned subspace, completed by
the identity, which keeps it unitary and exactly commuting with every pair
noise-sum.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg

from .errors import BranchAmbiguityWarning, GateCommutationError, LayoutError
from .qops import NoiseVector, noise_eigenbasis
from .tolerances import COMMUTATOR_TOL

__all__ = [
    "GateParams",
    "target_rotation",
    "controlled_gate",
    "paired_controlled_gate",
    "check_gate_commutation",
    "gate_hamiltonian",
    "eigen_to_computational",
]


@dataclass(frozen=True)
class GateParams:
    """Angles (radians) of the universal controlled gate.

    Universality of the generated gate set requires alpha, theta, phi to be
    irrational multiples of pi and of each other; that is a documentation
    constraint, not something numerics can certify.  ``theta`` here is the
    gate mixing angle, unrelated to the encoder's basis rotation.
    """

    alpha: float
    theta: float
    phi: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.alpha, self.theta, self.phi))):
            raise ValueError("gate angles must be finite")


def target_rotation(p: GateParams) -> np.ndarray:
    """The 2x2 unitary applied to the target when the control is active.

    [[ e^{ia} cos t,            -i e^{i(a-f)} sin t ],
     [ -i e^{i(a+f)} sin t,      e^{ia} cos t       ]]
    with determinant e^{2ia}.
    """
    c, s = math.cos(p.theta), math.sin(p.theta)
    ea = np.exp(1j * p.alpha)
    return np.array(
        [
            [ea * c, -1j * np.exp(1j * (p.alpha - p.phi)) * s],
            [-1j * np.exp(1j * (p.alpha + p.phi)) * s, ea * c],
        ],
        dtype=complex,
    )


def controlled_gate(p: GateParams) -> np.ndarray:
    """Two-qubit controlled gate: target rotation when the control is upper.

    4x4 block diagonal: the control's lower branch is untouched.
    """
    u = np.eye(4, dtype=complex)
    u[:2, :2] = target_rotation(p)
    return u


def paired_controlled_gate(p: GateParams) -> np.ndarray:
    """The controlled gate lifted to two qubit-pairs (16x16).

    Control pair anti-aligned up-down: apply the pair-level target rotation
    to pair 2 (mixing only its two anti-aligned states); control pair
    anti-aligned down-up: identity.  Aligned control states, which never
    occur for encoded inputs, are completed by the identity.
    """
    v = target_rotation(p)
    v4 = np.eye(4, dtype=complex)
    v4[1:3, 1:3] = v  # indices 1 = up,down and 2 = down,up of pair 2
    p_updown = np.zeros((4, 4), dtype=complex)
    p_updown[1, 1] = 1.0  # |up,down><up,down| of the control pair
    return np.eye(16, dtype=complex) + np.kron(p_updown, v4 - np.eye(4))


def check_gate_commutation(
    op: np.ndarray,
    nv: NoiseVector,
    pairs: list[tuple[int, int]],
    tol: float = COMMUTATOR_TOL,
) -> list[float]:
    """Verify [op, S_l + S_l'] is scalar for every pair; return the scalars.

    ``op`` is read in the noise-eigenbasis labels, so each qubit's noise
    operator is a * diag(1, -1).  In finite dimensions a scalar commutator
    must vanish (commutators are traceless), so the returned values are
    zero up to float noise; a non-scalar commutator raises
    :class:`GateCommutationError` with its spectral norm.
    """
    op = np.asarray(op, dtype=complex)
    dim = op.shape[0]
    n_qubits = dim.bit_length() - 1
    if op.shape != (dim, dim) or 2**n_qubits != dim:
        raise LayoutError(f"operator shape {op.shape} is not a qubit-register matrix")
    a = nv.magnitude
    z = np.array([1.0, -1.0])
    scalars = []
    for pair_idx, (i, j) in enumerate(pairs):
        if not (0 <= i < n_qubits and 0 <= j < n_qubits):
            raise LayoutError(f"pair {(i, j)} out of range for {n_qubits} qubits")
        diag = np.zeros(dim)
        for q, sign in ((i, z), (j, z)):
            pattern = np.ones(dim)
            block = 2 ** (n_qubits - 1 - q)
            pattern = np.tile(np.repeat(sign, block), dim // (2 * block))
            diag += a * pattern
        s_sum = np.diag(diag)
        comm = op @ s_sum - s_sum @ op
        n_l = complex(np.trace(comm)) / dim
        residual = comm - n_l * np.eye(dim)
        norm = float(np.linalg.norm(residual, 2))
        if norm > tol:
            raise GateCommutationError(pair_idx, float(np.linalg.norm(comm, 2)))
        scalars.append(float(n_l.real))
    return scalars


def gate_hamiltonian(u: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Hermitian generator H with exp(-iH) = u, via the principal matrix log.

    Eigenphases are mapped to (-pi, pi]; an eigenvalue at exactly -1 sits on
    the branch cut and is pinned to +pi with a :class:`BranchAmbiguityWarning`.
    """
    u = np.asarray(u, dtype=complex)
    dim = u.shape[0]
    if np.max(np.abs(u.conj().T @ u - np.eye(dim))) > tol:
        raise ValueError("gate_hamiltonian requires a unitary matrix")
    t, w = scipy.linalg.schur(u, output="complex")
    eigs = np.diag(t)
    if np.any(np.abs(eigs + 1.0) <= 1e-12):
        warnings.warn(
            "unitary has an eigenvalue at -1; its log phase is pinned to +pi",
            BranchAmbiguityWarning,
            stacklevel=2,
        )
    phases = np.angle(eigs)
    phases[np.abs(eigs + 1.0) <= 1e-12] = math.pi
    h = w @ np.diag(-phases) @ w.conj().T
    return 0.5 * (h + h.conj().T)  # symmetrize away Schur round-off


def eigen_to_computational(op: np.ndarray, nv: NoiseVector) -> np.ndarray:
    """Conjugate a noise-eigenbasis qubit-register matrix into the computational basis."""
    op = np.asarray(op, dtype=complex)
    dim = op.shape[0]
    n_qubits = dim.bit_length() - 1
    if 2**n_qubits != dim:
        raise LayoutError(f"operator dimension {dim} is not a power of two")
    rotation, _ = noise_eigenbasis(nv)
    b = reduce(np.kron, [rotation] * n_qubits)
    return b @ op @ b.conj().T
