"""Finite-dimensional operator algebra for qubits and truncated bosonic modes.

Conventions used everywhere in the package:

* Qubit basis index 0 is the upper z-eigenstate |+> and index 1 is |->,
  so ``pauli("z")`` is ``diag(1, -1)``.
* Tensor factors are ordered qubits first (ascending index; a pair's ancilla
  sits immediately after its data qubit), then bosonic modes ascending.
  Factor 0 is the leftmost (most significant) Kronecker factor.
* All operators are dense complex128 matrices; dimensions stay at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import InvalidNoiseError, LayoutError

__all__ = [
    "NoiseVector",
    "HilbertLayout",
    "pauli",
    "annihilation",
    "embed",
    "embed_product",
    "noise_operator",
    "noise_eigenbasis",
    "noise_rotation_angle",
    "is_hermitian",
    "is_unitary",
    "max_abs",
]

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "plus": np.array([[0, 1], [0, 0]], dtype=complex),
    "minus": np.array([[0, 0], [1, 0]], dtype=complex),
}


def pauli(axis: str) -> np.ndarray:
    """Return a Pauli or ladder matrix: one of x, y, z, plus, minus.

    ``plus``/``minus`` are (x +- i y)/2, so ``pauli("plus")`` maps |-> to |+>.
    """
    try:
        return _PAULI[axis].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}") from None


def annihilation(dim: int) -> np.ndarray:
    """Truncated bosonic annihilation operator on a ``dim``-level Fock space.

    Entries sqrt(n) on the superdiagonal; the creation operator is the
    conjugate transpose.  Truncation artifacts are confined to the top level:
    [a, a+] equals the identity except at the (dim-1, dim-1) entry.
    """
    if dim < 2:
        raise LayoutError(f"Fock dimension must be >= 2, got {dim}")
    a = np.zeros((dim, dim), dtype=complex)
    for n in range(1, dim):
        a[n - 1, n] = math.sqrt(n)
    return a


@dataclass(frozen=True)
class NoiseVector:
    """Coupling weights (lambda1, lambda2, lambda3) along x, y, z.

    Their ratio fixes the dissipation type: (0, 0, 1) is pure dephasing,
    lambda3 = 0 is amplitude damping.  Must be nonzero and finite.
    """

    lambda1: float
    lambda2: float
    lambda3: float

    def __post_init__(self):
        comps = (self.lambda1, self.lambda2, self.lambda3)
        if not all(math.isfinite(c) for c in comps):
            raise InvalidNoiseError(f"noise vector must be finite, got {comps}")
        if self.magnitude == 0.0:
            raise InvalidNoiseError("noise vector must not be all zero")

    @property
    def magnitude(self) -> float:
        """|lambda|, the eigenvalue scale a of the noise operator."""
        return math.sqrt(self.lambda1**2 + self.lambda2**2 + self.lambda3**2)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.lambda1, self.lambda2, self.lambda3)


@dataclass(frozen=True)
class HilbertLayout:
    """Canonical tensor-factor layout: qubits first, then bosonic modes.

    Qubit ``i`` is factor ``i``; mode ``k`` is factor ``qubit_count + k``.
    In paired registers the ancilla of pair ``l`` occupies qubit ``2l + 1``,
    directly after its data qubit ``2l``.
    """

    qubit_count: int
    mode_dims: tuple[int, ...] = ()

    def __post_init__(self):
        if self.qubit_count < 0:
            raise LayoutError(f"negative qubit count {self.qubit_count}")
        object.__setattr__(self, "mode_dims", tuple(int(d) for d in self.mode_dims))
        if any(d < 2 for d in self.mode_dims):
            raise LayoutError(f"all mode dimensions must be >= 2, got {self.mode_dims}")

    @property
    def factor_dims(self) -> tuple[int, ...]:
        return (2,) * self.qubit_count + self.mode_dims

    @property
    def n_factors(self) -> int:
        return self.qubit_count + len(self.mode_dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.factor_dims, dtype=object)) if self.n_factors else 1

    def mode_factor(self, mode_index: int) -> int:
        if not 0 <= mode_index < len(self.mode_dims):
            raise LayoutError(f"mode index {mode_index} out of range")
        return self.qubit_count + mode_index


def embed_product(ops: dict[int, np.ndarray], layout: HilbertLayout) -> np.ndarray:
    """Kronecker product with ``ops[i]`` at factor ``i`` and identities elsewhere.

    Building the product in one kron chain (instead of multiplying embedded

    single-factor operators) keeps assembly cost quadratic in the dimension.
    """
    dims = layout.factor_dims
    mats = []
    for i, d in enumerate(dims):
        if i in ops:
            op = np.asarray(ops[i], dtype=complex)
            if op.shape != (d, d):
                raise LayoutError(
                    f"operator at factor {i} has shape {op.shape}, expected ({d}, {d})"
                )
            mats.append(op)
        else:
            mats.append(np.eye(d, dtype=complex))
    for i in ops:
        if not 0 <= i < len(dims):
            raise LayoutError(f"factor index {i} out of range for {len(dims)} factors")
    if not mats:
        return np.eye(1, dtype=complex)
    return reduce(np.kron, mats)


def embed(op: np.ndarray, factor_index: int, layout: HilbertLayout) -> np.ndarray:
    """Embed a single-factor operator into the full tensor space."""
    return embed_product({factor_index: op}, layout)


def noise_operator(nv: NoiseVector) -> np.ndarray:
    """The per-qubit noise direction lambda . sigma (2x2 Hermitian, traceless).

    Eigenvalues are +-a with a = |lambda|.
    """
    return (
        nv.lambda1 * _PAULI["x"]
        + nv.lambda2 * _PAULI["y"]
        + nv.lambda3 * _PAULI["z"]
    )


def noise_eigenbasis(nv: NoiseVector) -> tuple[np.ndarray, float]:
    """Rotation taking the computational basis onto the noise eigenbasis.

    Returns ``(rotation, a)`` where the columns of ``rotation`` are the
    eigenvectors of the noise operator with eigenvalues ``+a`` and ``-a``
    (in that order), so ``rotation @ |+>`` is the upper noise eigenstate.
    Phase convention: the first nonzero component of each column is real
    and positive, which makes the rotation deterministic.
    """
    s = noise_operator(nv)
    evals, evecs = np.linalg.eigh(s)  # ascending: (-a, +a)
    rotation = evecs[:, ::-1].copy()
    a = float(evals[1])
    for col in range(2):
        v = rotation[:, col]
        idx = 0 if abs(v[0]) > 1e-12 else 1
        phase = v[idx] / abs(v[idx])
        rotation[:, col] = v / phase
    return rotation, a


def noise_rotation_angle(nv: NoiseVector) -> float | None:
    """Single rotation angle exp(-i theta sigma_y / 2) when lambda2 = 0.

    For lambda2 != 0 the basis change is a general 2x2 unitary and no single
    angle captures it; ``None`` is returned in that case.
    """
    if nv.lambda2 != 0.0:
        return None
    return math.atan2(nv.lambda1, nv.lambda3)


def is_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def is_unitary(m: np.ndarray, tol: float = 1e-12) -> bool:
    d = m.shape[0]
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(d))) <= tol)


def max_abs(m: np.ndarray) -> float:
    """Largest absolute entry; the max-norm used for identity checks."""
    return float(np.max(np.abs(m))) if m.size else 0.0
